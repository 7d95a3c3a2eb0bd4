#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

namespace ellfrob {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// exp(2 pi i x)
cplx e_of(cplx x);

struct SeriesConfig {
    int max_terms = 4000;
    double tail_tol = 1e-17;
    double im_min = 0.3;

    void validate() const;
};

// Point of the upper half plane. Construction rejects Im(tau) <= 0.
class HalfPlanePoint {
public:
    HalfPlanePoint(cplx tau); // NOLINT(implicit)
    cplx tau() const { return tau_; }
    cplx nome() const { return e_of(tau_); }

private:
    cplx tau_;
};

// sum_{d | n} d^k for k in {1,3,5}; throws Overflow if the result leaves int64.
std::int64_t divisor_sigma(int k, std::int64_t n);

cplx eisenstein(int weight, HalfPlanePoint tau, const SeriesConfig& cfg = {});

struct DerivativeValue {
    cplx series;   // termwise differentiated q-series
    cplx ring;     // recursion through the derivative ring
    double residual() const { return std::abs(series - ring); }
};

// (1/2 pi i)^order d^order E_w / dtau^order, computed two ways.
DerivativeValue eisenstein_derivative(int weight, int order, HalfPlanePoint tau,
                                      const SeriesConfig& cfg = {});

// public value: series route
cplx eisenstein_tau_derivative(int weight, int order, HalfPlanePoint tau,
                               const SeriesConfig& cfg = {});

cplx dedekind_eta(HalfPlanePoint tau, const SeriesConfig& cfg = {});

// E2, E4, E6 with D E2, D^2 E2, D^3 E2 (D = (1/2 pi i) d/dtau), from one pass.
struct EisensteinJet {
    cplx e2, e4, e6;
    cplx de2, d2e2, d3e2;
};
EisensteinJet eisenstein_jet(HalfPlanePoint tau, const SeriesConfig& cfg = {});

// tau' = (a tau + b)/(c tau + d) in the standard fundamental domain
struct ModularReduction {
    cplx tau;
    long a = 1, b = 0, c = 0, d = 1;
    cplx automorphy(cplx tau0) const { return static_cast<double>(c) * tau0 + static_cast<double>(d); }
};
ModularReduction reduce_modular(cplx tau);

} // namespace ellfrob
