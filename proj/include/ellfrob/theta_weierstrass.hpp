#pragma once

#include "ellfrob/modular_forms.hpp"

#include <array>
#include <string>
#include <vector>

namespace ellfrob {

inline constexpr double kPoleMargin = 0.02;
inline constexpr int kMaxThetaOrder = 7;

struct TorusPoint {
    cplx z;
    HalfPlanePoint tau;
};

// x = x0 + m + n tau with x0 in the period parallelogram centred at 0
struct LatticeReduction {
    cplx x0;
    long m = 0;
    long n = 0;
};
LatticeReduction reduce_to_cell(cplx x, cplx tau);

// distance from x to the nearest lattice point of Z + Z tau
double lattice_distance(cplx x, cplx tau);

// d^order/dx^order theta_11(x; tau), order 0..7, with argument reduction
cplx theta11_d(int order, cplx x, HalfPlanePoint tau, const SeriesConfig& cfg = {});

namespace detail {
// termwise series without argument reduction (oracle for quasi-periodicity)
cplx theta11_series(int order, cplx x, cplx tau, const SeriesConfig& cfg);
// Jacobi triple product
cplx theta11_product(cplx x, cplx tau, const SeriesConfig& cfg);
} // namespace detail

enum class WeierstrassKind { p, p_dz, zeta };

cplx weierstrass(WeierstrassKind kind, const TorusPoint& pt, const SeriesConfig& cfg = {},
                 double pole_margin = kPoleMargin);

// Everything needed downstream at one (z, tau). D = (1/2 pi i) d/dtau at fixed z.
// P = wp~ - E2/12 and psi = -zeta~ - E2 z/12 are the combinations that appear in the
// flat-coordinate formulas.
struct WeierstrassJet {
    EisensteinJet eis;
    cplx p, p_dz, p_dzz, zeta;
    cplx P, psi;
    cplx dP, d2P, dpsi, d2psi;
};
WeierstrassJet weierstrass_jet(cplx z, HalfPlanePoint tau, const SeriesConfig& cfg = {},
                               double pole_margin = kPoleMargin);
// same, reusing Eisenstein data already computed at tau
WeierstrassJet weierstrass_jet(cplx z, HalfPlanePoint tau, const EisensteinJet& eis,
                               const SeriesConfig& cfg = {}, double pole_margin = kPoleMargin);

struct HalfPeriodValues {
    cplx e1, e2, e3;
    cplx operator[](int i) const { return i == 0 ? e1 : (i == 1 ? e2 : e3); }
};
HalfPeriodValues half_periods(HalfPlanePoint tau, const SeriesConfig& cfg = {});

// critical points 1/2, (1+tau)/2, tau/2
std::array<cplx, 3> half_period_points(cplx tau);

struct IdentitySample {
    cplx z;
    cplx tau;
    int m = 1; // lattice shift used by the quasi-periodicity checks
    int n = 1;
};

struct IdentityCheck {
    cplx lhs, rhs;
    double absolute() const { return std::abs(lhs - rhs); }
    // |lhs - rhs| / max(1, |lhs|, |rhs|)
    double relative() const;
};

const std::vector<std::string>& identity_names();
IdentityCheck evaluate_identity(const std::string& name, const IdentitySample& s,
                                const SeriesConfig& cfg = {});
inline double identity_residual(const std::string& name, const IdentitySample& s,
                                const SeriesConfig& cfg = {}) {
    return evaluate_identity(name, s, cfg).relative();
}

} // namespace ellfrob
