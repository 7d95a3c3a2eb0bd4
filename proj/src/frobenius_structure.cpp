#include "ellfrob/frobenius_structure.hpp"

#include "ellfrob/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellfrob {

namespace {

const cplx kInvTwoPiI2 = 1.0 / (kTwoPiI * kTwoPiI);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace

ModuliPoint::ModuliPoint(cplx s1, cplx s2, HalfPlanePoint tau) : s1_(s1), s2_(s2), tau_(tau) {
    if (s2 == cplx(0.0)) throw std::domain_error("ModuliPoint: s2 must be nonzero");
}

FlatPoint ModuliPoint::flat(const SeriesConfig& cfg) const {
    const cplx e2 = eisenstein(2, tau_, cfg);
    return FlatPoint{s1_ + s2_ * s2_ * e2 / 12.0, s2_, tau_};
}

ModuliPoint ModuliPoint::from_flat(const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx e2 = eisenstein(2, t.tau, cfg);
    return ModuliPoint(t.t1 - t.t2 * t.t2 * e2 / 12.0, t.t2, t.tau);
}

Triple canonical_coordinates(const ModuliPoint& p, const SeriesConfig& cfg) {
    const HalfPeriodValues e = half_periods(p.tau(), cfg);
    const cplx s22 = p.s2() * p.s2();
    return {p.s1() + s22 * e.e1, p.s1() + s22 * e.e2, p.s1() + s22 * e.e3};
}

cplx unfolding(cplx z, const ModuliPoint& p, const SeriesConfig& cfg) {
    return p.s2() * p.s2() * weierstrass(WeierstrassKind::p, {z, p.tau()}, cfg) + p.s1();
}

cplx unfolding_flat(cplx z, const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx P = weierstrass(WeierstrassKind::p, {z, t.tau}, cfg) - eisenstein(2, t.tau, cfg) / 12.0;
    return t.t2 * t.t2 * P + t.t1;
}

Mat3 flat_pairing() {
    Mat3 m;
    m << 0, 0, 1, 0, 2, 0, 1, 0, 0;
    return m;
}

Mat3 flat_pairing_inverse() {
    Mat3 m;
    m << 0, 0, 1, 0, 0.5, 0, 1, 0, 0;
    return m;
}

namespace {

// integrand (dF/ds_i)(dF/ds_j)/(dF/dz) summed over N trapezoid nodes on |z - centre| = r,
// scaled to (2 pi i)^2 * (1/2 pi i) * contour integral
Mat3 contour_sum(const ModuliPoint& p, cplx centre, double r, int nodes, const EisensteinJet& eis,
                 const SeriesConfig& cfg) {
    const cplx s2 = p.s2(), s22 = s2 * s2;
    const double margin = std::min(kPoleMargin, 0.5 * r);
    Mat3 acc = Mat3::Zero();
    for (int k = 0; k < nodes; ++k) {
        const cplx dz = std::polar(r, 2.0 * kPi * k / nodes);
        const WeierstrassJet w = weierstrass_jet(centre + dz, p.tau(), eis, cfg, margin);
        const Vec3 dF(1.0, 2.0 * s2 * w.p, s22 * (w.dP + eis.de2 / 12.0));
        acc += (dF * dF.transpose()) * (dz / (s22 * w.p_dz));
    }
    // 2 pi i * (2 pi i / N) * sum g(z_k)(z_k - centre)
    return acc * (-4.0 * kPi * kPi / nodes);
}

// distance from `centre` to the nearest other point of the half-lattice (critical points and poles)
double half_lattice_gap(cplx centre, cplx tau) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            const cplx w = (static_cast<double>(a) + static_cast<double>(b) * tau) / 2.0;
            const double d = std::abs(w - centre);
            if (d > 1e-12) nearest = std::min(nearest, d);
        }
    return nearest;
}

double contour_radius(cplx centre, cplx tau, std::optional<double> radius) {
    const double gap = half_lattice_gap(centre, tau);
    if (radius) {
        if (*radius >= gap)
            throw ContourTooLarge("radius " + std::to_string(*radius) +
                                  " reaches another critical point or pole at distance " + std::to_string(gap));
        return *radius;
    }
    return std::min(0.25, 0.5 * gap);
}

} // namespace

Mat3 residue_pairing(const ModuliPoint& p, const SeriesConfig& cfg, std::optional<double> radius, int nodes) {
    if (nodes < 8) throw std::invalid_argument("residue_pairing: too few nodes");
    const EisensteinJet eis = eisenstein_jet(p.tau(), cfg);
    const cplx tau = p.tau().tau();
    Mat3 total = Mat3::Zero();
    for (const cplx c : half_period_points(tau)) total += contour_sum(p, c, contour_radius(c, tau, radius), nodes, eis, cfg);
    return total;
}

Mat3 residue_pairing_at_pole(const ModuliPoint& p, const SeriesConfig& cfg, std::optional<double> radius, int nodes) {
    if (nodes < 8) throw std::invalid_argument("residue_pairing_at_pole: too few nodes");
    const EisensteinJet eis = eisenstein_jet(p.tau(), cfg);
    const cplx tau = p.tau().tau();
    // residues at the critical points and at the pole cancel for elliptic integrands
    return -contour_sum(p, 0.0, contour_radius(0.0, tau, radius), nodes, eis, cfg);
}

Mat3 residue_pairing_closed_form(const ModuliPoint& p, const SeriesConfig& cfg) {
    const cplx e2 = eisenstein(2, p.tau(), cfg);
    const cplx de2 = eisenstein_tau_derivative(2, 1, p.tau(), cfg);
    const cplx s2 = p.s2();
    Mat3 m;
    m << 0, 0, 1, 0, 2, s2 * e2 / 6.0, 1, s2 * e2 / 6.0, s2 * s2 * de2 / 6.0;
    return m;
}

Mat3 raw_from_flat_jacobian(const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx e2 = eisenstein(2, t.tau, cfg);
    const cplx de2 = eisenstein_tau_derivative(2, 1, t.tau, cfg);
    Mat3 J;
    J << 1, -t.t2 * e2 / 6.0, -t.t2 * t.t2 * de2 / 12.0, 0, 1, 0, 0, 0, 1;
    return J;
}

Mat3 residue_pairing_flat(const ModuliPoint& p, const SeriesConfig& cfg) {
    const Mat3 J = raw_from_flat_jacobian(p.flat(cfg), cfg);
    return J.transpose() * residue_pairing(p, cfg) * J;
}

cplx potential(const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx e2 = eisenstein(2, t.tau, cfg);
    return 0.5 * t.t1 * t.t1 * t.t3() + t.t1 * t.t2 * t.t2 - std::pow(t.t2, 4) * e2 / 24.0;
}

Vec3 potential_gradient(const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet e = eisenstein_jet(t.tau, cfg);
    const cplx t1 = t.t1, t2 = t.t2;
    return {t1 * t.t3() + t2 * t2, 2.0 * t1 * t2 - std::pow(t2, 3) * e.e2 / 6.0,
            0.5 * t1 * t1 - std::pow(t2, 4) * e.de2 / 24.0};
}

double euler_homogeneity_residual(const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx F = potential(t, cfg);
    const Vec3 g = potential_gradient(t, cfg);
    return std::abs(t.t1 * g(0) + 0.5 * t.t2 * g(1) - 2.0 * F) / std::max(1.0, std::abs(F));
}

std::array<Mat3, 3> potential_third_derivatives(const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet e = eisenstein_jet(t.tau, cfg);
    const cplx t2 = t.t2;
    // F_{ijk}, symmetric; only the entries with a t2 or t3 dependence are nonzero beyond F_113, F_122
    cplx F[3][3][3] = {};
    auto set = [&](int i, int j, int k, cplx v) {
        const int idx[3] = {i, j, k};
        int perm[3] = {0, 1, 2};
        do {
            F[idx[perm[0]]][idx[perm[1]]][idx[perm[2]]] = v;
        } while (std::next_permutation(perm, perm + 3));
    };
    set(0, 0, 2, 1.0);
    set(0, 1, 1, 2.0);
    set(1, 1, 1, -t2 * e.e2);
    set(1, 1, 2, -0.5 * t2 * t2 * e.de2);
    set(1, 2, 2, -std::pow(t2, 3) * e.d2e2 / 6.0);
    set(2, 2, 2, -std::pow(t2, 4) * e.d3e2 / 24.0);
    std::array<Mat3, 3> out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out[i](j, k) = F[i][j][k];
    return out;
}

Tensor3 structure_constants_from_potential(const FlatPoint& t, const SeriesConfig& cfg) {
    const auto F = potential_third_derivatives(t, cfg);
    const Mat3 etainv = flat_pairing_inverse();
    Tensor3 C;
    for (int k = 0; k < 3; ++k) {
        C[k] = Mat3::Zero();
        for (int a = 0; a < 3; ++a) C[k] += etainv(k, a) * F[a];
    }
    return C;
}

Mat3 intersection_form(const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet e = eisenstein_jet(t.tau, cfg);
    const cplx t1 = t.t1, t2 = t.t2;
    const cplx g11 = -std::pow(t2, 4) * e.d2e2 / 12.0;
    const cplx g12 = -std::pow(t2, 3) * e.de2 / 8.0;
    const cplx g22 = 0.5 * t1 - t2 * t2 * e.e2 / 8.0;
    Mat3 g;
    g << g11, g12, t1, g12, g22, 0.5 * t2, t1, 0.5 * t2, 0.0;
    return g;
}

Tensor3 christoffel(const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet e = eisenstein_jet(t.tau, cfg);
    const cplx t2 = t.t2, t22 = t2 * t2, t23 = t22 * t2, t24 = t23 * t2;
    Tensor3 G;
    G[0] << 0, 0, 0, 0, 0.25, 0, 1, 0, 0;
    G[1] << -t23 * e.d2e2 / 6.0, -t22 * e.de2 / 8.0, 0, -t22 * e.de2 / 4.0, -t2 * e.e2 / 8.0, 0, 0, 0.5, 0;
    G[2] << -t24 * e.d3e2 / 24.0, -t23 * e.d2e2 / 24.0, 0, -t23 * e.d2e2 / 12.0, -t22 * e.de2 / 16.0, 0, 0, 0, 0;
    return G;
}

FrobeniusTensors frobenius_tensors(const FlatPoint& t, const SeriesConfig& cfg) {
    if (t.t2 == cplx(0.0)) throw std::domain_error("frobenius_tensors: t2 must be nonzero");
    FrobeniusTensors out;
    out.eta = flat_pairing();
    out.C = structure_constants_from_potential(t, cfg);
    out.g = intersection_form(t, cfg);
    out.Gamma = christoffel(t, cfg);
    out.potential_value = potential(t, cfg);
    return out;
}

Mat3 canonical_jacobian(const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet eis = eisenstein_jet(t.tau, cfg);
    const auto pts = half_period_points(t.tau.tau());
    Mat3 V;
    for (int a = 0; a < 3; ++a) {
        const WeierstrassJet w = weierstrass_jet(pts[a], t.tau, eis, cfg);
        V(a, 0) = 1.0;
        V(a, 1) = 2.0 * t.t2 * w.P;
        V(a, 2) = t.t2 * t.t2 * w.dP;
    }
    return V;
}

namespace {

Eigen::PartialPivLU<Mat3> checked_lu(const Mat3& V) {
    if (std::abs(V.determinant()) < 1e-12) throw DegenerateJacobian("|det du/dt| below 1e-12");
    return Eigen::PartialPivLU<Mat3>(V);
}

} // namespace

Vec3 product_via_critical_values(const FlatPoint& t, int i, int j, const SeriesConfig& cfg) {
    if (i < 0 || i > 2 || j < 0 || j > 2) throw std::out_of_range("frame index must be 0, 1 or 2");
    const Mat3 V = canonical_jacobian(t, cfg);
    const Vec3 w = V.col(i).cwiseProduct(V.col(j));
    return checked_lu(V).solve(w);
}

Tensor3 structure_constants_from_critical_values(const FlatPoint& t, const SeriesConfig& cfg) {
    const Mat3 V = canonical_jacobian(t, cfg);
    const auto lu = checked_lu(V);
    Tensor3 C;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Vec3 x = lu.solve(Vec3(V.col(i).cwiseProduct(V.col(j))));
            for (int k = 0; k < 3; ++k) C[k](i, j) = x(k);
        }
    return C;
}

Tensor3 structure_constants_from_christoffel(const FlatPoint& t, const SeriesConfig& cfg) {
    const Tensor3 G = christoffel(t, cfg);
    const Mat3 eta = flat_pairing();
    // C^{ka}_j = Gamma^{k1}_j, 2 Gamma^{k2}_j, delta_kj for a = 1, 2, 3
    auto upper = [&](int k, int a, int j) -> cplx {
        if (a == 0) return G[j](k, 0);
        if (a == 1) return 2.0 * G[j](k, 1);
        return k == j ? 1.0 : 0.0;
    };
    Tensor3 C;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                cplx s = 0.0;
                for (int a = 0; a < 3; ++a) s += eta(i, a) * upper(k, a, j);
                C[k](i, j) = s;
            }
    return C;
}

Vec3 multiply(const Tensor3& C, const Vec3& a, const Vec3& b) {
    Vec3 out;
    for (int k = 0; k < 3; ++k) out(k) = a.transpose() * C[k] * b;
    return out;
}

Tensor3 canonical_products(const FlatPoint& t, const SeriesConfig& cfg) {
    const Mat3 V = canonical_jacobian(t, cfg);
    const Mat3 Vinv = checked_lu(V).inverse();
    const Tensor3 C = structure_constants_from_potential(t, cfg);
    Tensor3 out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const Vec3 m = V * multiply(C, Vinv.col(a), Vinv.col(b));
            for (int c = 0; c < 3; ++c) out[c](a, b) = m(c);
        }
    return out;
}

double wdvv_residual(const Tensor3& C) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                const Vec3 ei = Vec3::Unit(i), ej = Vec3::Unit(j), el = Vec3::Unit(l);
                const Vec3 lhs = multiply(C, multiply(C, ei, ej), el);
                const Vec3 rhs = multiply(C, ei, multiply(C, ej, el));
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
    return worst;
}

double wdvv_residual(const FlatPoint& t, const SeriesConfig& cfg) {
    return wdvv_residual(structure_constants_from_potential(t, cfg));
}

PrimitiveFormResiduals primitive_form_residuals(cplx z, const FlatPoint& t, const SeriesConfig& cfg) {
    const EisensteinJet e = eisenstein_jet(t.tau, cfg);
    const WeierstrassJet w = weierstrass_jet(z, t.tau, e, cfg);
    const cplx t2 = t.t2;
    const cplx Ft1 = 1.0, Ft2 = 2.0 * t2 * w.P, Ft3 = t2 * t2 * w.dP, Fz = t2 * t2 * w.p_dz;
    const cplx phi22 = 2.0 * w.psi, phi23 = 2.0 * t2 * w.dpsi, phi33 = t2 * t2 * w.d2psi;

    PrimitiveFormResiduals r;
    r.identities[0] = rel(Ft2 * Ft2, 2.0 * Ft3 - 0.5 * t2 * e.e2 * Ft2 - 0.5 * t2 * t2 * e.de2 * Ft1 + phi22 * Fz);
    r.identities[1] = rel(Ft2 * Ft3, -0.25 * t2 * t2 * e.de2 * Ft2 - std::pow(t2, 3) * e.d2e2 / 6.0 * Ft1 + phi23 * Fz);
    r.identities[2] = rel(Ft3 * Ft3, -std::pow(t2, 3) * e.d2e2 / 12.0 * Ft2 - std::pow(t2, 4) * e.d3e2 / 24.0 * Ft1 + phi33 * Fz);

    const double h = 1e-5;
    std::array<WeierstrassJet, 4> s;
    const double offs[4] = {-2, -1, 1, 2};
    for (int k = 0; k < 4; ++k) s[k] = weierstrass_jet(z + offs[k] * h, t.tau, e, cfg);
    auto d5 = [&](auto get) { return (get(s[0]) - 8.0 * get(s[1]) + 8.0 * get(s[2]) - get(s[3])) / (12.0 * h); };
    const cplx dphi22 = d5([](const WeierstrassJet& j) { return 2.0 * j.psi; });
    const cplx dphi23 = d5([&](const WeierstrassJet& j) { return 2.0 * t2 * j.dpsi; });
    const cplx dphi33 = d5([&](const WeierstrassJet& j) { return t2 * t2 * j.d2psi; });
    r.conditions[0] = rel(dphi22, 2.0 * w.P);
    r.conditions[1] = rel(dphi23, 2.0 * t2 * w.dP);
    r.conditions[2] = rel(dphi33, t2 * t2 * w.d2P);

    const cplx zt = weierstrass(WeierstrassKind::zeta, {z, t.tau}, cfg);
    r.phi22_vs_zeta = rel(phi22, 2.0 * (-zt - e.e2 * z / 12.0));
    return r;
}

cplx discriminant(const FlatPoint& t, const SeriesConfig& cfg) {
    const Triple u = canonical_coordinates(ModuliPoint::from_flat(t, cfg), cfg);
    return u[0] * u[1] * u[2];
}

cplx euler_multiplication_det(const FlatPoint& t, const SeriesConfig& cfg) {
    const Tensor3 C = structure_constants_from_potential(t, cfg);
    const Vec3 E(t.t1, 0.5 * t.t2, 0.0);
    Mat3 M;
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
            cplx s = 0.0;
            for (int i = 0; i < 3; ++i) s += E(i) * C[k](i, j);
            M(k, j) = s;
        }
    return M.determinant();
}

Triple lyashko_looijenga(const ModuliPoint& p, const SeriesConfig& cfg) { return canonical_coordinates(p, cfg); }

double multiset_distance(const Triple& a, const Triple& b) {
    std::array<int, 3> perm = {0, 1, 2};
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

HalfPeriodValues half_periods_any(cplx tau, const SeriesConfig& cfg) {
    const ModularReduction red = reduce_modular(tau);
    const cplx j = red.automorphy(tau);
    const auto pts = half_period_points(tau);
    const HalfPlanePoint tr(red.tau);
    HalfPeriodValues h;
    h.e1 = weierstrass(WeierstrassKind::p, {pts[0] / j, tr}, cfg) / (j * j);
    h.e2 = weierstrass(WeierstrassKind::p, {pts[1] / j, tr}, cfg) / (j * j);
    h.e3 = weierstrass(WeierstrassKind::p, {pts[2] / j, tr}, cfg) / (j * j);
    return h;
}

ModuliPoint canonical_representative(const ModuliPoint& p) {
    const ModularReduction red = reduce_modular(p.tau().tau());
    cplx s2 = p.s2() / red.automorphy(p.tau().tau());
    if (s2.real() < 0.0 || (s2.real() == 0.0 && s2.imag() < 0.0)) s2 = -s2;
    return ModuliPoint(p.s1(), s2, HalfPlanePoint(red.tau));
}

ModuliPoint ll_inverse(const Triple& u, const SeriesConfig& cfg, const LLInverseOptions& opt) {
    const double size = std::max({1.0, std::abs(u[0]), std::abs(u[1]), std::abs(u[2])});
    const double gap = std::min({std::abs(u[0] - u[1]), std::abs(u[1] - u[2]), std::abs(u[0] - u[2])});
    if (gap < 1e-10 * size) throw DegenerateInput("critical values nearly coincide");

    const cplx target = (u[2] - u[1]) / (u[0] - u[1]);
    const double ftol = opt.tol * std::max(1.0, std::abs(target));
    auto f = [&](cplx tau) {
        const HalfPeriodValues e = half_periods_any(tau, cfg);
        return (e.e3 - e.e2) / (e.e1 - e.e2) - target;
    };
    auto safe_f = [&](cplx tau, cplx& out) {
        if (!(tau.imag() > 1e-3)) return false;
        try {
            out = f(tau);
            return std::isfinite(out.real()) && std::isfinite(out.imag());
        } catch (const std::exception&) {
            return false;
        }
    };

    for (int ix = 0; ix < opt.grid; ++ix)
        for (int iy = 0; iy < opt.grid; ++iy) {
            const double re = -0.5 + ix * (1.0 / (opt.grid - 1));
            const double im = 0.5 + iy * (2.0 / (opt.grid - 1));
            cplx tau(re, im), val;
            if (!safe_f(tau, val)) continue;
            bool converged = std::abs(val) <= ftol;
            for (int it = 0; it < opt.max_iter && !converged; ++it) {
                const double h = 1e-6 * std::max(1.0, std::abs(tau));
                cplx fp, fm;
                if (!safe_f(tau + h, fp) || !safe_f(tau - h, fm)) break;
                const cplx deriv = (fp - fm) / (2.0 * h);
                if (deriv == cplx(0.0)) break;
                cplx step = -val / deriv;
                bool accepted = false;
                for (int damp = 0; damp < 30; ++damp) {
                    cplx trial;
                    if (safe_f(tau + step, trial) && std::abs(trial) < std::abs(val)) {
                        tau += step;
                        val = trial;
                        accepted = true;
                        break;
                    }
                    step *= opt.damping;
                }
                if (!accepted) break;
                converged = std::abs(val) <= ftol;
            }
            if (!converged) continue;

            const HalfPeriodValues e = half_periods_any(tau, cfg);
            const cplx s2 = std::sqrt((u[0] - u[1]) / (e.e1 - e.e2));
            const cplx s1 = (u[0] + u[1] + u[2]) / 3.0;
            const ModuliPoint rep = canonical_representative(ModuliPoint(s1, s2, HalfPlanePoint(tau)));
            if (multiset_distance(lyashko_looijenga(rep, cfg), u) <= 1e-6 * size) return rep;
        }
    throw NewtonDiverged("no start of the multi-start Newton search converged");
}

} // namespace ellfrob
