#pragma once

#include "ellfrob/frobenius_structure.hpp"
#include "ellfrob/k_lattice.hpp"

#include <string>
#include <vector>

namespace ellfrob {

struct GammaData {
    Mat3 ch_gamma;
    Eigen::Vector3d Q;   // diagonal of the degree operator
    IntMatrix chi_P;
    Mat3 eta_flat;
};
GammaData gamma_data();

struct GammaResiduals {
    double serre; // conjugated e[Q] against chi^{-1} chi^T
    double euler; // transposed pairing against chi
};
GammaResiduals gamma_identities(const GammaData& d = gamma_data());

enum class CycleId { path1, path2a, path2b, path3 };
const char* cycle_name(CycleId id);
CycleId parse_cycle(const std::string& s);

// straight segment in the z-plane; path1 runs from 1/2 + tau down to 1/2, which carries the
// orientation sign of its cycle
struct CyclePath {
    CycleId id;
    cplx start(cplx tau) const;
    cplx end(cplx tau) const;
    // both endpoints sit on the pole lattice (integrand extended by 0 there)
    bool pole_endpoints() const { return id == CycleId::path2a; }
};

struct QuadConfig {
    int n_quad = 20;        // Gauss-Legendre nodes per panel: 10, 15, 20, 25 or 30
    int initial_panels = 8;
    int max_panels = 4096;
    double quad_tol = 1e-10;

    void validate() const;
};

struct PeriodValue {
    cplx value;
    double error_estimate; // change under the last panel doubling
    int panels;
};

// u^{-1/2} * int_path exp(-F(z; t)/u) (2 pi i dz) with F = t2^2 (wp~ - E2/12) + t1.
// Requires t2 > 0, tau on the positive imaginary axis and u > 0.
PeriodValue exponential_period(const CyclePath& path, const FlatPoint& t, double u, const QuadConfig& q = {},
                               const SeriesConfig& cfg = {});

// path1 and path3 are single cycles; path2 is path2a - path2b
enum class PeriodCombo { path1, path2, path3 };
const char* combo_name(PeriodCombo c);
PeriodCombo parse_combo(const std::string& s);
PeriodValue combo_period(PeriodCombo c, const FlatPoint& t, double u, const QuadConfig& q = {},
                         const SeriesConfig& cfg = {});
// u^{-1/2}, u^{-3/2}, ... for path1/path3 and u^{-1}, u^{-2}, ... for path2
std::array<double, 3> combo_exponents(PeriodCombo c);

struct AsymptoticFit {
    PeriodCombo combo;
    std::array<double, 2> exponents;
    cplx leading, subleading;       // least squares
    cplx leading_richardson;        // two-level Richardson over the three smallest u
    cplx subleading_richardson;     // same, applied to (I u^e0 - leading) u
    double relative_residual;       // of the least-squares fit
    double condition;               // of the column-scaled design matrix
    double exponent_estimate;       // local slope at the two largest u after removing the subleading term
    std::vector<double> u_grid;
    std::vector<PeriodValue> values;
};
// Least-squares fit against the known exponents, with `extra_terms` further powers absorbing the
// O(u^{-e0-2}) tail. IllConditioned if the condition number exceeds 1e8.
AsymptoticFit asymptotic_fit(PeriodCombo combo, const FlatPoint& t, const std::vector<double>& u_grid,
                             const QuadConfig& q = {}, const SeriesConfig& cfg = {}, int extra_terms = 1);

// coefficient targets at t
struct PeriodTargets {
    cplx leading;
    cplx subleading;          // values the periods converge to
    cplx subleading_stated;   // the form with t1 and the printed signs (differs for path1, path2)
};
PeriodTargets period_targets(PeriodCombo combo, const FlatPoint& t, const SeriesConfig& cfg = {});

struct KClassImage {
    std::string name;
    KClass k_class;
    Vec3 expected;
    Vec3 computed; // ch_gamma applied to the P coordinates
};
std::vector<KClassImage> kclass_correspondence();

} // namespace ellfrob
