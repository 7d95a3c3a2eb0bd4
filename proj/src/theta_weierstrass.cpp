#include "ellfrob/theta_weierstrass.hpp"

#include "ellfrob/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace ellfrob {

namespace {

const cplx kInvTwoPiI2 = 1.0 / (kTwoPiI * kTwoPiI); // 1/(2 pi i)^2

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_tau(cplx tau, const SeriesConfig& cfg) {
    cfg.validate();
    if (!(tau.imag() > 0.0)) throw std::domain_error("Im(tau) must be positive");
    if (tau.imag() < cfg.im_min)
        throw std::domain_error("Im(tau) = " + std::to_string(tau.imag()) + " is below im_min");
}

using ThetaArray = std::array<cplx, kMaxThetaOrder + 1>;

// theta^(j)(x), j = 0..order, from the sine form of the series:
// theta(x) = -2 sum_{n>=0} (-1)^n e^{pi i k^2 tau} sin(2 pi k x),  k = n + 1/2.
// The sine form keeps full relative accuracy near x = 0.
ThetaArray theta_series_all(int order, cplx x, cplx tau, const SeriesConfig& cfg) {
    ThetaArray sum{};
    std::array<double, kMaxThetaOrder + 1> scale{};
    int small = 0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        const double k = n + 0.5;
        const cplx w = std::exp(cplx(0.0, kPi) * k * k * tau);
        const cplx arg = 2.0 * kPi * k * x;
        const cplx s = std::sin(arg), c = std::cos(arg);
        const double sign = (n % 2 == 0) ? -2.0 : 2.0;
        double a = 1.0;
        bool all_small = true;
        for (int j = 0; j <= order; ++j) {
            const cplx trig = (j % 4 == 0) ? s : (j % 4 == 1) ? c : (j % 4 == 2) ? -s : -c;
            const cplx term = sign * a * w * trig;
            sum[j] += term;
            scale[j] += std::abs(term);
            if (std::abs(term) > cfg.tail_tol * scale[j]) all_small = false;
            a *= 2.0 * kPi * k;
        }
        if (all_small) {
            if (++small == 2) return sum;
        } else {
            small = 0;
        }
    }
    throw NonConvergence("theta series did not converge within max_terms");
}

struct ReducedTheta {
    LatticeReduction red;
    ThetaArray t; // derivatives at the reduced point
};

ReducedTheta reduced_theta(int order, cplx x, cplx tau, const SeriesConfig& cfg) {
    ReducedTheta r;
    r.red = reduce_to_cell(x, tau);
    r.t = theta_series_all(order, r.red.x0, tau, cfg);
    return r;
}

// ratios theta^(j)(x) / theta(x) at the unreduced x, j = 0..order
ThetaArray theta_ratios(int order, const ReducedTheta& rt) {
    const cplx shift = -kTwoPiI * static_cast<double>(rt.red.n);
    ThetaArray R{};
    for (int j = 0; j <= order; ++j) {
        cplx acc = 0.0;
        for (int i = 0; i <= j; ++i)
            acc += binom(j, i) * std::pow(shift, j - i) * rt.t[i];
        R[j] = acc / rt.t[0];
    }
    return R;
}

void check_pole(cplx z, cplx tau, double margin) {
    const double d = lattice_distance(z, tau);
    if (d < margin)
        throw PoleTooClose("point is " + std::to_string(d) + " from the lattice (margin " +
                           std::to_string(margin) + ")");
}

} // namespace

LatticeReduction reduce_to_cell(cplx x, cplx tau) {
    LatticeReduction r;
    r.n = std::lround(x.imag() / tau.imag());
    const cplx y = x - static_cast<double>(r.n) * tau;
    r.m = std::lround(y.real());
    r.x0 = y - static_cast<double>(r.m);
    return r;
}

double lattice_distance(cplx x, cplx tau) {
    const cplx x0 = reduce_to_cell(x, tau).x0;
    double best = std::abs(x0);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            best = std::min(best, std::abs(x0 - static_cast<double>(a) - static_cast<double>(b) * tau));
    return best;
}

cplx theta11_d(int order, cplx x, HalfPlanePoint tau, const SeriesConfig& cfg) {
    if (order < 0 || order > kMaxThetaOrder)
        throw UnsupportedOrder("theta derivative order " + std::to_string(order));
    check_tau(tau.tau(), cfg);
    const ReducedTheta rt = reduced_theta(order, x, tau.tau(), cfg);
    const double n = static_cast<double>(rt.red.n);
    const double sign = ((rt.red.m + rt.red.n) % 2 == 0) ? 1.0 : -1.0;
    const cplx factor = sign * e_of(-n * n * tau.tau() / 2.0 - n * rt.red.x0);
    const cplx shift = -kTwoPiI * n;
    cplx acc = 0.0;
    for (int i = 0; i <= order; ++i) acc += binom(order, i) * std::pow(shift, order - i) * rt.t[i];
    return factor * acc;
}

namespace detail {

cplx theta11_series(int order, cplx x, cplx tau, const SeriesConfig& cfg) {
    if (order < 0 || order > kMaxThetaOrder)
        throw UnsupportedOrder("theta derivative order " + std::to_string(order));
    return theta_series_all(order, x, tau, cfg)[order];
}

cplx theta11_product(cplx x, cplx tau, const SeriesConfig& cfg) {
    const cplx q = e_of(tau), ex = e_of(x), emx = e_of(-x);
    cplx prod = 1.0, qn = 1.0;
    int small = 0;
    for (int n = 1; n <= cfg.max_terms; ++n) {
        qn *= q;
        prod *= (1.0 - qn) * (1.0 - qn * ex) * (1.0 - qn * emx);
        if (std::abs(qn) * (1.0 + std::abs(ex) + std::abs(emx)) <= cfg.tail_tol) {
            if (++small == 2)
                return cplx(0.0, 1.0) * e_of(tau / 8.0) * (e_of(x / 2.0) - e_of(-x / 2.0)) * prod;
        } else {
            small = 0;
        }
    }
    throw NonConvergence("triple product did not converge within max_terms");
}

} // namespace detail

WeierstrassJet weierstrass_jet(cplx z, HalfPlanePoint tau, const SeriesConfig& cfg, double pole_margin) {
    check_tau(tau.tau(), cfg);
    return weierstrass_jet(z, tau, eisenstein_jet(tau, cfg), cfg, pole_margin);
}

WeierstrassJet weierstrass_jet(cplx z, HalfPlanePoint tau, const EisensteinJet& eis, const SeriesConfig& cfg,
                               double pole_margin) {
    check_tau(tau.tau(), cfg);
    check_pole(z, tau.tau(), pole_margin);
    const ThetaArray R = theta_ratios(kMaxThetaOrder, reduced_theta(kMaxThetaOrder, z, tau.tau(), cfg));
    const cplx c = kInvTwoPiI2;

    // heat equation: D theta^(j) = (c/2) theta^(j+2)
    std::array<cplx, 6> DR{};
    for (int j = 0; j < 6; ++j) DR[j] = 0.5 * c * (R[j + 2] - R[j] * R[2]);
    std::array<cplx, 4> D2R{};
    for (int j = 0; j < 4; ++j) D2R[j] = 0.5 * c * (DR[j + 2] - DR[j] * R[2] - R[j] * DR[2]);

    const cplx L1 = R[1];
    const cplx L2 = R[2] - R[1] * R[1];
    const cplx L3 = R[3] - 3.0 * R[1] * R[2] + 2.0 * std::pow(R[1], 3);
    const cplx L4 = R[4] - 4.0 * R[1] * R[3] - 3.0 * R[2] * R[2] + 12.0 * R[1] * R[1] * R[2] -
                    6.0 * std::pow(R[1], 4);
    const cplx DL2 = DR[2] - 2.0 * R[1] * DR[1];
    const cplx D2L2 = D2R[2] - 2.0 * DR[1] * DR[1] - 2.0 * R[1] * D2R[1];

    WeierstrassJet w;
    w.eis = eis;
    w.P = -c * L2;
    w.psi = -c * L1;
    w.p = w.P + w.eis.e2 / 12.0;
    w.zeta = -w.psi - w.eis.e2 * z / 12.0;
    w.p_dz = -c * L3;
    w.p_dzz = -c * L4;
    w.dP = -c * DL2;
    w.d2P = -c * D2L2;
    w.dpsi = -c * DR[1];
    w.d2psi = -c * D2R[1];
    return w;
}

cplx weierstrass(WeierstrassKind kind, const TorusPoint& pt, const SeriesConfig& cfg, double pole_margin) {
    check_tau(pt.tau.tau(), cfg);
    check_pole(pt.z, pt.tau.tau(), pole_margin);
    const ThetaArray R = theta_ratios(3, reduced_theta(3, pt.z, pt.tau.tau(), cfg));
    const cplx c = kInvTwoPiI2;
    switch (kind) {
    case WeierstrassKind::p:
        return eisenstein(2, pt.tau, cfg) / 12.0 - c * (R[2] - R[1] * R[1]);
    case WeierstrassKind::p_dz:
        return -c * (R[3] - 3.0 * R[1] * R[2] + 2.0 * std::pow(R[1], 3));
    case WeierstrassKind::zeta:
        return c * R[1] - eisenstein(2, pt.tau, cfg) * pt.z / 12.0;
    }
    throw std::invalid_argument("unknown Weierstrass kind");
}

std::array<cplx, 3> half_period_points(cplx tau) {
    return {cplx(0.5), (1.0 + tau) / 2.0, tau / 2.0};
}

HalfPeriodValues half_periods(HalfPlanePoint tau, const SeriesConfig& cfg) {
    const auto pts = half_period_points(tau.tau());
    HalfPeriodValues h;
    h.e1 = weierstrass(WeierstrassKind::p, {pts[0], tau}, cfg);
    h.e2 = weierstrass(WeierstrassKind::p, {pts[1], tau}, cfg);
    h.e3 = weierstrass(WeierstrassKind::p, {pts[2], tau}, cfg);
    return h;
}

double IdentityCheck::relative() const {
    return absolute() / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

namespace {

using IdentityFn = std::function<IdentityCheck(const IdentitySample&, const SeriesConfig&)>;

cplx wp(cplx z, cplx tau, const SeriesConfig& cfg) { return weierstrass(WeierstrassKind::p, {z, tau}, cfg); }
cplx wp_dz(cplx z, cplx tau, const SeriesConfig& cfg) { return weierstrass(WeierstrassKind::p_dz, {z, tau}, cfg); }
cplx zeta(cplx z, cplx tau, const SeriesConfig& cfg) { return weierstrass(WeierstrassKind::zeta, {z, tau}, cfg); }

IdentityCheck ring_check(int weight, int order, const IdentitySample& s, const SeriesConfig& cfg) {
    const DerivativeValue d = eisenstein_derivative(weight, order, s.tau, cfg);
    return {d.series, d.ring};
}

const std::map<std::string, IdentityFn>& registry() {
    static const std::map<std::string, IdentityFn> table = {
        {"cubic_a",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const cplx p = wp(s.z, s.tau, cfg), pz = wp_dz(s.z, s.tau, cfg);
             const cplx e4 = eisenstein(4, s.tau, cfg), e6 = eisenstein(6, s.tau, cfg);
             return IdentityCheck{kInvTwoPiI2 * pz * pz, 4.0 * p * p * p - e4 * p / 12.0 + e6 / 216.0};
         }},
        {"cubic_b",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const cplx p = wp(s.z, s.tau, cfg);
             return IdentityCheck{kInvTwoPiI2 * w.p_dzz, 6.0 * p * p - eisenstein(4, s.tau, cfg) / 24.0};
         }},
        {"cubic_tilde_a",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const EisensteinJet e = eisenstein_jet(s.tau, cfg);
             const cplx P = wp(s.z, s.tau, cfg) - e.e2 / 12.0, Pz = wp_dz(s.z, s.tau, cfg);
             return IdentityCheck{kInvTwoPiI2 * Pz * Pz,
                                  4.0 * P * P * P + e.e2 * P * P + e.de2 * P + e.d2e2 / 6.0};
         }},
        {"cubic_tilde_b",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const EisensteinJet& e = w.eis;
             const cplx P = wp(s.z, s.tau, cfg) - e.e2 / 12.0;
             return IdentityCheck{kInvTwoPiI2 * w.p_dzz, 6.0 * P * P + e.e2 * P + 0.5 * e.de2};
         }},
        {"zeta_quasi_period_1",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             return IdentityCheck{zeta(s.z + 1.0, s.tau, cfg) - zeta(s.z, s.tau, cfg),
                                  -eisenstein(2, s.tau, cfg) / 12.0};
         }},
        {"zeta_quasi_period_tau",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             return IdentityCheck{zeta(s.z + s.tau, s.tau, cfg) - zeta(s.z, s.tau, cfg),
                                  -eisenstein(2, s.tau, cfg) * s.tau / 12.0 - 1.0 / kTwoPiI};
         }},
        {"zeta_derivative",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const double h = 1e-5;
             auto f = [&](double k) { return zeta(s.z + k * h, s.tau, cfg); };
             const cplx d = (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h);
             return IdentityCheck{d, -wp(s.z, s.tau, cfg)};
         }},
        {"eisenstein_ring_a", [](const IdentitySample& s, const SeriesConfig& cfg) { return ring_check(2, 1, s, cfg); }},
        {"eisenstein_ring_b", [](const IdentitySample& s, const SeriesConfig& cfg) { return ring_check(4, 1, s, cfg); }},
        {"eisenstein_ring_c", [](const IdentitySample& s, const SeriesConfig& cfg) { return ring_check(6, 1, s, cfg); }},
        {"e2_third_derivative",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const EisensteinJet e = eisenstein_jet(s.tau, cfg);
             return IdentityCheck{e.d3e2, e.e2 * e.d2e2 - 1.5 * e.de2 * e.de2};
         }},
        {"key_identity_1",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const EisensteinJet& e = w.eis;
             const cplx lhs = -w.dpsi - e.de2 * s.z / 12.0;
             const cplx p = wp(s.z, s.tau, cfg), pz = wp_dz(s.z, s.tau, cfg), zt = zeta(s.z, s.tau, cfg);
             const cplx psi = -zt - e.e2 * s.z / 12.0;
             return IdentityCheck{lhs, -0.5 * kInvTwoPiI2 * pz + e.e2 * zt / 12.0 + e.e4 * s.z / 144.0 + psi * p};
         }},
        {"key_identity_1_tilde",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const cplx e2 = w.eis.e2;
             const cplx psi = -zeta(s.z, s.tau, cfg) - e2 * s.z / 12.0;
             const cplx P = wp(s.z, s.tau, cfg) - e2 / 12.0;
             return IdentityCheck{w.dpsi, -psi * P + 0.5 * kInvTwoPiI2 * wp_dz(s.z, s.tau, cfg)};
         }},
        {"key_identity_2",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const EisensteinJet& e = w.eis;
             const cplx lhs = w.dP + e.de2 / 12.0;
             const cplx p = wp(s.z, s.tau, cfg);
             const cplx psi = -zeta(s.z, s.tau, cfg) - e.e2 * s.z / 12.0;
             return IdentityCheck{lhs, 2.0 * p * p + e.e2 * p / 6.0 - e.e4 / 36.0 - psi * wp_dz(s.z, s.tau, cfg)};
         }},
        {"key_identity_2_tilde",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const WeierstrassJet w = weierstrass_jet(s.z, s.tau, cfg);
             const EisensteinJet& e = w.eis;
             const cplx P = wp(s.z, s.tau, cfg) - e.e2 / 12.0;
             const cplx psi = -zeta(s.z, s.tau, cfg) - e.e2 * s.z / 12.0;
             return IdentityCheck{w.dP, 2.0 * P * P + 0.5 * e.e2 * P + 0.25 * e.de2 - psi * wp_dz(s.z, s.tau, cfg)};
         }},
        {"theta_quasi_periodicity",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const double m = s.m, n = s.n;
             const cplx lhs = detail::theta11_series(0, s.z + m + n * s.tau, s.tau, cfg);
             const double sign = ((s.m + s.n) % 2 == 0) ? 1.0 : -1.0;
             const cplx rhs = sign * e_of(-n * n * s.tau / 2.0 - n * s.z) * detail::theta11_series(0, s.z, s.tau, cfg);
             return IdentityCheck{lhs, rhs};
         }},
        {"theta_heat",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             const double h = 1e-5;
             auto f = [&](double k) { return theta11_d(0, s.z, s.tau + k * h, cfg); };
             const cplx dtau = (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h);
             return IdentityCheck{dtau / kTwoPiI, 0.5 * kInvTwoPiI2 * theta11_d(2, s.z, s.tau, cfg)};
         }},
        {"theta_e2",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             return IdentityCheck{eisenstein(2, s.tau, cfg),
                                  4.0 * kInvTwoPiI2 * theta11_d(3, 0.0, s.tau, cfg) / theta11_d(1, 0.0, s.tau, cfg)};
         }},
        {"triple_product",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             return IdentityCheck{theta11_d(0, s.z, s.tau, cfg), detail::theta11_product(s.z, s.tau, cfg)};
         }},
        {"theta_prime_eta",
         [](const IdentitySample& s, const SeriesConfig& cfg) {
             return IdentityCheck{theta11_d(1, 0.0, s.tau, cfg), -2.0 * kPi * std::pow(dedekind_eta(s.tau, cfg), 3)};
         }},
    };
    return table;
}

} // namespace

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : registry()) v.push_back(k);
        return v;
    }();
    return names;
}

IdentityCheck evaluate_identity(const std::string& name, const IdentitySample& s, const SeriesConfig& cfg) {
    const auto& table = registry();
    auto it = table.find(name);
    if (it == table.end()) throw UnknownIdentity(name);
    return it->second(s, cfg);
}

} // namespace ellfrob
