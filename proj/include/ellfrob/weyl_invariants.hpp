#pragma once

#include "ellfrob/frobenius_structure.hpp"
#include "ellfrob/k_lattice.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ellfrob {

// point (phi, x, tau) of E~
struct TildeEPoint {
    cplx phi;
    cplx x;
    HalfPlanePoint tau;
};

enum class WeylGenerator { r1, r2, r3, tau1, tau2, c };

// letters compose as operators: the rightmost letter acts first
struct GroupWord {
    std::vector<std::pair<WeylGenerator, int>> letters;
    // +1 for W~-invariance, -1 where J changes sign (odd number of reflections)
    int parity() const;
};
// "r1 t2 c^-2"; ParseError on malformed input
GroupWord parse_group_word(const std::string& text);

using GroupElement = std::variant<GroupWord, Mat2>;

TildeEPoint apply_group(const GroupElement& g, const TildeEPoint& p);

struct Invariants {
    cplx y1, y2, y3, J;
};
// y1 and J go through wp~ and wp~', so x must stay pole_margin away from Z + Z tau
Invariants invariants(const TildeEPoint& p, const SeriesConfig& cfg = {}, double pole_margin = kPoleMargin);

// J = (2 pi i)^-3 theta(2x) / (2 theta(x)) e[3 phi / 2]
cplx J_theta_quotient(const TildeEPoint& p, const SeriesConfig& cfg = {});
// the same through the infinite products
cplx J_product(const TildeEPoint& p, const SeriesConfig& cfg = {});

// |J^2 - (y1^3 - E4 y1 y2^4 / 48 + E6 y2^6 / 864)|
double chevalley_residual(const TildeEPoint& p, const SeriesConfig& cfg = {});
// the cubic with y2^2 and y2^3, kept to show that it does not vanish
double chevalley_residual_unbalanced(const TildeEPoint& p, const SeriesConfig& cfg = {});

// Word elements: |y1(gp) - y1(p)|, |y2(gp) - y2(p)|, |J(gp) - parity J(p)|.
// Matrix elements: |y1(gp) - y1(p)|, |y2(gp)(c tau + d) - y2(p)|, |J(gp) - J(p)|.
struct InvarianceResiduals {
    double dy1, dy2, dJ;
};
InvarianceResiduals invariance_residuals(const TildeEPoint& p, const GroupElement& g, const SeriesConfig& cfg = {});

// flat coordinates t1 = -y1 + E2 y2^2 / 12, t2 = y2, t3 = 2 pi i tau through the entire theta form of t1
FlatPoint flat_coordinates(const TildeEPoint& p, const SeriesConfig& cfg = {});
// t1 through the definition -y1 + E2 y2^2 / 12
cplx t1_from_invariants(const TildeEPoint& p, const SeriesConfig& cfg = {});

// rows t1, t2, t3; columns d/dphi, d/dx, d/dtau; analytic (heat equation for tau)
Mat3 flat_jacobian(const TildeEPoint& p, const SeriesConfig& cfg = {});
// rows y1, y2, y3
Mat3 invariant_jacobian(const TildeEPoint& p, const SeriesConfig& cfg = {});
cplx invariant_jacobian_determinant(const TildeEPoint& p, const SeriesConfig& cfg = {});

// the constant form on d(phi, x, tau)
Mat3 weyl_metric();
// g(dt_i, dt_j) from the constant form; DegenerateJacobian if d(t)/d(phi,x,tau) is singular
Mat3 pullback_metric(const TildeEPoint& p, const SeriesConfig& cfg = {});

} // namespace ellfrob
