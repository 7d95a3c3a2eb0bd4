#include "ellfrob/weyl_invariants.hpp"

#include "ellfrob/errors.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace ellfrob {

namespace {

const cplx kI{0.0, 1.0};
const cplx kC = 1.0 / (kTwoPiI * kTwoPiI);

// exp(k pi i phi), single valued in phi
cplx half_exp(int k, cplx phi) { return std::exp(static_cast<double>(k) * kPi * kI * phi); }

TildeEPoint apply_letter(WeylGenerator g, int sign, const TildeEPoint& p) {
    const cplx phi = p.phi, x = p.x, tau = p.tau.tau();
    switch (g) {
    case WeylGenerator::r1: return {phi, 1.0 - x, p.tau};
    case WeylGenerator::r2: return {phi - 2.0 * x + 1.0 + tau, -x + 1.0 + tau, p.tau};
    case WeylGenerator::r3: return {phi - 2.0 * x + tau, -x + tau, p.tau};
    case WeylGenerator::tau1:
        return sign > 0 ? TildeEPoint{phi + 1.0, x + 1.0, p.tau} : TildeEPoint{phi - 1.0, x - 1.0, p.tau};
    case WeylGenerator::tau2:
        return sign > 0 ? TildeEPoint{phi + 2.0 * x - 1.0 + tau, x + tau, p.tau}
                        : TildeEPoint{phi - 2.0 * x + 1.0 + tau, x - tau, p.tau};
    case WeylGenerator::c:
        return sign > 0 ? TildeEPoint{phi + 1.0, -x, p.tau} : TildeEPoint{phi - 1.0, -x, p.tau};
    }
    return p;
}

void require_regular(const TildeEPoint& p, double margin) {
    const double d = lattice_distance(p.x, p.tau.tau());
    if (d < margin)
        throw PoleTooClose("x is " + std::to_string(d) + " from Z + Z tau (margin " + std::to_string(margin) + ")");
}

struct ThetaData {
    std::array<cplx, 5> th; // theta^(k)(x), k = 0..4
    cplx d1, d3;            // theta'(0), theta'''(0)
};

ThetaData theta_data(const TildeEPoint& p, const SeriesConfig& cfg) {
    ThetaData t;
    for (int k = 0; k < 5; ++k) t.th[static_cast<std::size_t>(k)] = theta11_d(k, p.x, p.tau, cfg);
    t.d1 = theta11_d(1, 0.0, p.tau, cfg);
    t.d3 = theta11_d(3, 0.0, p.tau, cfg);
    return t;
}

} // namespace

int GroupWord::parity() const {
    int odd = 0;
    for (const auto& [g, k] : letters)
        if (g == WeylGenerator::r1 || g == WeylGenerator::r2 || g == WeylGenerator::r3 || g == WeylGenerator::c)
            odd += std::abs(k);
    return odd % 2 ? -1 : 1;
}

GroupWord parse_group_word(const std::string& text) {
    static const std::regex tok(R"(^(r1|r2|r3|t1|t2|tau1|tau2|c)(?:\^(-?\d+))?$)");
    GroupWord w;
    std::istringstream is(text);
    std::string s;
    while (is >> s) {
        std::smatch m;
        if (!std::regex_match(s, m, tok)) throw ParseError("bad group letter '" + s + "'");
        const std::string name = m[1].str();
        const int k = m[2].matched ? std::stoi(m[2].str()) : 1;
        if (k == 0) throw ParseError("zero exponent in '" + s + "'");
        WeylGenerator g = WeylGenerator::c;
        if (name == "r1") g = WeylGenerator::r1;
        else if (name == "r2") g = WeylGenerator::r2;
        else if (name == "r3") g = WeylGenerator::r3;
        else if (name == "t1" || name == "tau1") g = WeylGenerator::tau1;
        else if (name == "t2" || name == "tau2") g = WeylGenerator::tau2;
        w.letters.emplace_back(g, k);
    }
    return w;
}

TildeEPoint apply_group(const GroupElement& g, const TildeEPoint& p) {
    if (const auto* m = std::get_if<Mat2>(&g)) {
        const auto& M = *m;
        if (M[0][0] * M[1][1] - M[0][1] * M[1][0] != 1) throw std::invalid_argument("SL(2,Z) element must have determinant 1");
        const double a = static_cast<double>(M[0][0]), b = static_cast<double>(M[0][1]);
        const double c = static_cast<double>(M[1][0]), d = static_cast<double>(M[1][1]);
        const cplx tau = p.tau.tau(), j = c * tau + d;
        return {p.phi - c * p.x * p.x / j, p.x / j, HalfPlanePoint((a * tau + b) / j)};
    }
    const auto& w = std::get<GroupWord>(g);
    TildeEPoint cur = p;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const auto [gen, k] = *it;
        const bool involution = gen == WeylGenerator::r1 || gen == WeylGenerator::r2 || gen == WeylGenerator::r3;
        const int reps = involution ? std::abs(k) % 2 : std::abs(k);
        for (int i = 0; i < reps; ++i) cur = apply_letter(gen, k > 0 ? 1 : -1, cur);
    }
    return cur;
}

Invariants invariants(const TildeEPoint& p, const SeriesConfig& cfg, double pole_margin) {
    require_regular(p, pole_margin);
    const cplx A = theta11_d(0, p.x, p.tau, cfg) / theta11_d(1, 0.0, p.tau, cfg);
    const TorusPoint z{p.x, p.tau};
    const cplx wp = weierstrass(WeierstrassKind::p, z, cfg, pole_margin);
    const cplx dwp = weierstrass(WeierstrassKind::p_dz, z, cfg, pole_margin);
    Invariants out;
    out.y1 = A * A * wp * half_exp(2, p.phi);
    out.y2 = A * half_exp(1, p.phi);
    out.y3 = kTwoPiI * p.tau.tau();
    out.J = -0.5 / kTwoPiI * A * A * A * dwp * half_exp(3, p.phi);
    return out;
}

cplx J_theta_quotient(const TildeEPoint& p, const SeriesConfig& cfg) {
    require_regular(p, kPoleMargin);
    const cplx r = theta11_d(0, 2.0 * p.x, p.tau, cfg) / (2.0 * theta11_d(0, p.x, p.tau, cfg));
    return r * half_exp(3, p.phi) / (kTwoPiI * kTwoPiI * kTwoPiI);
}

cplx J_product(const TildeEPoint& p, const SeriesConfig& cfg) {
    cfg.validate();
    const cplx tau = p.tau.tau(), x = p.x;
    // cos(pi x) prefactor, then products over integer and half-integer powers of q
    cplx prod = 0.5 * (e_of(x / 2.0) + e_of(-x / 2.0));
    int calm = 0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        const cplx h = (n + 0.5) * tau;
        cplx f = (1.0 - e_of(h + x)) * (1.0 - e_of(h - x)) * (1.0 + e_of(h + x)) * (1.0 + e_of(h - x));
        if (n >= 1) f *= (1.0 + e_of(static_cast<double>(n) * tau + x)) * (1.0 + e_of(static_cast<double>(n) * tau - x));
        prod *= f;
        calm = std::abs(f - 1.0) <= cfg.tail_tol ? calm + 1 : 0;
        if (calm >= 2) return prod * half_exp(3, p.phi) / (kTwoPiI * kTwoPiI * kTwoPiI);
    }
    throw NonConvergence("J product did not settle within max_terms");
}

double chevalley_residual(const TildeEPoint& p, const SeriesConfig& cfg) {
    const Invariants v = invariants(p, cfg);
    const EisensteinJet e = eisenstein_jet(p.tau, cfg);
    const cplx y22 = v.y2 * v.y2;
    const cplx rhs = v.y1 * v.y1 * v.y1 - e.e4 * v.y1 * y22 * y22 / 48.0 + e.e6 * y22 * y22 * y22 / 864.0;
    return std::abs(v.J * v.J - rhs);
}

double chevalley_residual_unbalanced(const TildeEPoint& p, const SeriesConfig& cfg) {
    const Invariants v = invariants(p, cfg);
    const EisensteinJet e = eisenstein_jet(p.tau, cfg);
    const cplx rhs = v.y1 * v.y1 * v.y1 - e.e4 * v.y1 * v.y2 * v.y2 / 48.0 + e.e6 * v.y2 * v.y2 * v.y2 / 864.0;
    return std::abs(v.J * v.J - rhs);
}

InvarianceResiduals invariance_residuals(const TildeEPoint& p, const GroupElement& g, const SeriesConfig& cfg) {
    const TildeEPoint q = apply_group(g, p);
    const Invariants a = invariants(p, cfg), b = invariants(q, cfg);
    if (const auto* m = std::get_if<Mat2>(&g)) {
        const cplx j = static_cast<double>((*m)[1][0]) * p.tau.tau() + static_cast<double>((*m)[1][1]);
        return {std::abs(b.y1 - a.y1), std::abs(b.y2 * j - a.y2), std::abs(b.J - a.J)};
    }
    const double s = std::get<GroupWord>(g).parity();
    return {std::abs(b.y1 - a.y1), std::abs(b.y2 - a.y2), std::abs(b.J - s * a.J)};
}

FlatPoint flat_coordinates(const TildeEPoint& p, const SeriesConfig& cfg) {
    const ThetaData t = theta_data(p, cfg);
    const cplx t1 = kC * (t.th[2] * t.th[0] - t.th[1] * t.th[1]) / (t.d1 * t.d1) * half_exp(2, p.phi);
    const cplx t2 = t.th[0] / t.d1 * half_exp(1, p.phi);
    return {t1, t2, p.tau};
}

cplx t1_from_invariants(const TildeEPoint& p, const SeriesConfig& cfg) {
    const Invariants v = invariants(p, cfg);
    return -v.y1 + eisenstein(2, p.tau, cfg) * v.y2 * v.y2 / 12.0;
}

Mat3 flat_jacobian(const TildeEPoint& p, const SeriesConfig& cfg) {
    const ThetaData t = theta_data(p, cfg);
    const auto& th = t.th;
    const cplx e1 = half_exp(1, p.phi), e2 = half_exp(2, p.phi);
    const cplx heat = 1.0 / (2.0 * kTwoPiI); // d/dtau theta^(k) = theta^(k+2) / (4 pi i)
    const cplx d1t = t.d3 * heat;            // d/dtau theta'(0)

    const cplx t2 = th[0] / t.d1 * e1;
    const cplx N = th[2] * th[0] - th[1] * th[1];
    const cplx t1 = kC * N / (t.d1 * t.d1) * e2;

    Mat3 J = Mat3::Zero();
    J(0, 0) = kTwoPiI * t1;
    J(0, 1) = kC * (th[3] * th[0] - th[1] * th[2]) / (t.d1 * t.d1) * e2;
    const cplx dN = (th[4] * th[0] + th[2] * th[2] - 2.0 * th[1] * th[3]) * heat;
    J(0, 2) = kC * e2 * (dN / (t.d1 * t.d1) - 2.0 * N * d1t / (t.d1 * t.d1 * t.d1));
    J(1, 0) = 0.5 * kTwoPiI * t2;
    J(1, 1) = th[1] / t.d1 * e1;
    J(1, 2) = e1 * (th[2] * heat / t.d1 - th[0] * d1t / (t.d1 * t.d1));
    J(2, 2) = kTwoPiI;
    return J;
}

Mat3 invariant_jacobian(const TildeEPoint& p, const SeriesConfig& cfg) {
    const Mat3 Jt = flat_jacobian(p, cfg);
    const FlatPoint f = flat_coordinates(p, cfg);
    const EisensteinJet e = eisenstein_jet(p.tau, cfg);
    Mat3 Jy = Jt;
    // y1 = -t1 + E2 t2^2 / 12
    Jy.row(0) = -Jt.row(0) + (e.e2 * f.t2 / 6.0) * Jt.row(1);
    Jy(0, 2) += f.t2 * f.t2 / 12.0 * kTwoPiI * e.de2;
    return Jy;
}

cplx invariant_jacobian_determinant(const TildeEPoint& p, const SeriesConfig& cfg) {
    return invariant_jacobian(p, cfg).determinant();
}

Mat3 weyl_metric() {
    Mat3 G;
    G << 0, 0, 1, 0, -0.5, 0, 1, 0, 0;
    return G * kC;
}

Mat3 pullback_metric(const TildeEPoint& p, const SeriesConfig& cfg) {
    const Mat3 J = flat_jacobian(p, cfg);
    const double scale = J.cwiseAbs().maxCoeff();
    if (std::abs(J.determinant()) < 1e-12 * scale * scale * scale)
        throw DegenerateJacobian("d(t1,t2,t3)/d(phi,x,tau) is singular at this point");
    return J * weyl_metric() * J.transpose();
}

} // namespace ellfrob
