#include "ellfrob/gamma_periods.hpp"

#include "ellfrob/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/SVD>

#include <cmath>
#include <future>

namespace ellfrob {

GammaData gamma_data() {
    const double sp = std::sqrt(kPi);
    GammaData d;
    d.ch_gamma << 1, 1, 0, sp, sp, sp, 0, kTwoPiI, kTwoPiI;
    d.Q << -0.5, 0.0, 0.5;
    d.chi_P = euler_matrix(Basis::P);
    d.eta_flat = flat_pairing();
    return d;
}

namespace {

Mat3 to_complex(const IntMatrix& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = static_cast<double>(m(i, j));
    return r;
}

Mat3 exp_Q(const Eigen::Vector3d& Q, double scale) {
    Mat3 e = Mat3::Zero();
    for (int i = 0; i < 3; ++i) e(i, i) = e_of(scale * Q(i));
    return e;
}

} // namespace

GammaResiduals gamma_identities(const GammaData& d) {
    const Mat3 C = d.ch_gamma / std::sqrt(2.0 * kPi);
    const Mat3 chi = to_complex(d.chi_P);
    const Mat3 serre = chi.inverse() * chi.transpose();
    const Mat3 lhs1 = C.inverse() * exp_Q(d.Q, 1.0) * C;
    const Mat3 lhs2 = C.transpose() * exp_Q(d.Q, 0.5) * d.eta_flat * C;
    return {(lhs1 - serre).cwiseAbs().maxCoeff(), (lhs2 - chi).cwiseAbs().maxCoeff()};
}

const char* cycle_name(CycleId id) {
    switch (id) {
    case CycleId::path1: return "path1";
    case CycleId::path2a: return "path2a";
    case CycleId::path2b: return "path2b";
    case CycleId::path3: return "path3";
    }
    return "?";
}

CycleId parse_cycle(const std::string& s) {
    for (CycleId id : {CycleId::path1, CycleId::path2a, CycleId::path2b, CycleId::path3})
        if (s == cycle_name(id)) return id;
    throw ParseError("unknown cycle '" + s + "'");
}

cplx CyclePath::start(cplx tau) const {
    switch (id) {
    case CycleId::path1: return 0.5 + tau;
    case CycleId::path2a: return 0.0;
    case CycleId::path2b: return 0.5;
    case CycleId::path3: return tau / 2.0;
    }
    return 0.0;
}

cplx CyclePath::end(cplx tau) const {
    switch (id) {
    case CycleId::path1: return 0.5;
    case CycleId::path2a: return tau;
    case CycleId::path2b: return 0.5 + tau;
    case CycleId::path3: return 1.0 + tau / 2.0;
    }
    return 0.0;
}

void QuadConfig::validate() const {
    if (n_quad != 10 && n_quad != 15 && n_quad != 20 && n_quad != 25 && n_quad != 30)
        throw std::invalid_argument("n_quad must be one of 10, 15, 20, 25, 30");
    if (initial_panels < 1 || max_panels < initial_panels) throw std::invalid_argument("bad panel limits");
    if (!(quad_tol > 0.0)) throw std::invalid_argument("quad_tol must be positive");
}

namespace {

struct Rule {
    std::vector<double> x, w; // full rule on [-1, 1]
};

template <unsigned N>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.x.push_back(a[i]);
        r.w.push_back(w[i]);
        if (a[i] != 0.0) {
            r.x.push_back(-a[i]);
            r.w.push_back(w[i]);
        }
    }
    return r;
}

const Rule& rule(int n) {
    static const Rule r10 = make_rule<10>(), r15 = make_rule<15>(), r20 = make_rule<20>(), r25 = make_rule<25>(),
                      r30 = make_rule<30>();
    switch (n) {
    case 10: return r10;
    case 15: return r15;
    case 25: return r25;
    case 30: return r30;
    default: return r20;
    }
}

// below this distance from a pole exp(-F/u) has underflowed for every u in range
constexpr double kPoleCut = 1e-9;

cplx integrand(cplx z, const FlatPoint& t, cplx e2, double u, bool pole_ends, const SeriesConfig& cfg) {
    if (pole_ends && lattice_distance(z, t.tau.tau()) < kPoleCut) return 0.0;
    const cplx wp = weierstrass(WeierstrassKind::p, {z, t.tau}, cfg, pole_ends ? kPoleCut : kPoleMargin);
    const cplx F = t.t2 * t.t2 * (wp - e2 / 12.0) + t.t1;
    return std::exp(-F / u);
}

cplx composite(const CyclePath& path, const FlatPoint& t, cplx e2, double u, int panels, const Rule& r,
               const SeriesConfig& cfg) {
    const cplx a = path.start(t.tau.tau()), b = path.end(t.tau.tau());
    const cplx h = (b - a) / static_cast<double>(panels);
    cplx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const cplx mid = a + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t k = 0; k < r.x.size(); ++k)
            sum += r.w[k] * integrand(mid + 0.5 * r.x[k] * h, t, e2, u, path.pole_endpoints(), cfg);
    }
    return sum * 0.5 * h;
}

void check_chamber(const FlatPoint& t, double u) {
    const cplx tau = t.tau.tau();
    if (!(u > 0.0)) throw std::invalid_argument("exponential_period: u must be positive");
    if (std::abs(t.t2.imag()) > 1e-14 * std::abs(t.t2) || !(t.t2.real() > 0.0))
        throw std::invalid_argument("exponential_period: t2 must be real and positive");
    if (std::abs(tau.real()) > 1e-14 * std::abs(tau))
        throw std::invalid_argument("exponential_period: tau must be purely imaginary");
}

} // namespace

PeriodValue exponential_period(const CyclePath& path, const FlatPoint& t, double u, const QuadConfig& q,
                               const SeriesConfig& cfg) {
    q.validate();
    check_chamber(t, u);
    const Rule& r = rule(q.n_quad);
    const cplx e2 = eisenstein(2, t.tau, cfg);
    const cplx pref = std::pow(u, -0.5) * kTwoPiI;
    int panels = q.initial_panels;
    cplx prev = pref * composite(path, t, e2, u, panels, r, cfg);
    while (panels * 2 <= q.max_panels) {
        panels *= 2;
        const cplx cur = pref * composite(path, t, e2, u, panels, r, cfg);
        const double diff = std::abs(cur - prev);
        if (diff <= q.quad_tol) return {cur, diff, panels};
        prev = cur;
    }
    throw QuadratureUnconverged(std::string(cycle_name(path.id)) + ": panel doubling did not settle to " +
                                std::to_string(q.quad_tol) + " at u = " + std::to_string(u));
}

const char* combo_name(PeriodCombo c) {
    switch (c) {
    case PeriodCombo::path1: return "path1";
    case PeriodCombo::path2: return "path2";
    case PeriodCombo::path3: return "path3";
    }
    return "?";
}

PeriodCombo parse_combo(const std::string& s) {
    for (PeriodCombo c : {PeriodCombo::path1, PeriodCombo::path2, PeriodCombo::path3})
        if (s == combo_name(c)) return c;
    throw ParseError("unknown period combination '" + s + "'");
}

PeriodValue combo_period(PeriodCombo c, const FlatPoint& t, double u, const QuadConfig& q, const SeriesConfig& cfg) {
    switch (c) {
    case PeriodCombo::path1: return exponential_period({CycleId::path1}, t, u, q, cfg);
    case PeriodCombo::path3: return exponential_period({CycleId::path3}, t, u, q, cfg);
    case PeriodCombo::path2: {
        const PeriodValue a = exponential_period({CycleId::path2a}, t, u, q, cfg);
        const PeriodValue b = exponential_period({CycleId::path2b}, t, u, q, cfg);
        return {a.value - b.value, a.error_estimate + b.error_estimate, std::max(a.panels, b.panels)};
    }
    }
    throw std::logic_error("unreachable");
}

std::array<double, 3> combo_exponents(PeriodCombo c) {
    if (c == PeriodCombo::path2) return {1.0, 2.0, 3.0};
    return {0.5, 1.5, 2.5};
}

AsymptoticFit asymptotic_fit(PeriodCombo combo, const FlatPoint& t, const std::vector<double>& u_grid,
                             const QuadConfig& q, const SeriesConfig& cfg, int extra_terms) {
    if (u_grid.size() < 3) throw std::invalid_argument("asymptotic_fit: need at least 3 u values");
    if (extra_terms < 0 || extra_terms > 1) throw std::invalid_argument("asymptotic_fit: extra_terms must be 0 or 1");
    const int nterms = 2 + extra_terms;
    if (static_cast<int>(u_grid.size()) < nterms) throw std::invalid_argument("asymptotic_fit: too few u values");
    for (std::size_t i = 1; i < u_grid.size(); ++i)
        if (!(u_grid[i] > u_grid[i - 1])) throw std::invalid_argument("asymptotic_fit: u grid must increase");

    AsymptoticFit fit{};
    fit.combo = combo;
    const auto ex = combo_exponents(combo);
    fit.exponents = {ex[0], ex[1]};
    fit.u_grid = u_grid;

    std::vector<std::future<PeriodValue>> jobs;
    for (double u : u_grid) jobs.push_back(std::async(std::launch::async, [=, &t, &q, &cfg] { return combo_period(combo, t, u, q, cfg); }));
    for (auto& j : jobs) fit.values.push_back(j.get());

    const int m = static_cast<int>(u_grid.size());
    const double u0 = u_grid.front();
    Eigen::MatrixXd A(m, nterms);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < nterms; ++k) A(i, k) = std::pow(u0 / u_grid[static_cast<std::size_t>(i)], ex[static_cast<std::size_t>(k)]);
        b(i) = fit.values[static_cast<std::size_t>(i)].value;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    fit.condition = sv(0) / sv(sv.size() - 1);
    if (!(fit.condition <= 1e8)) throw IllConditioned("design matrix condition " + std::to_string(fit.condition));
    const Eigen::MatrixXcd Ac = A.cast<cplx>();
    const Eigen::VectorXcd x = Ac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    fit.relative_residual = (Ac * x - b).norm() / b.norm();
    fit.leading = x(0) * std::pow(u0, ex[0]);
    fit.subleading = x(1) * std::pow(u0, ex[1]);

    // Richardson in 1/u on A(u) = I u^e0 over u, 2u, 4u taken from the grid when it doubles
    auto richardson = [](cplx a1, cplx a2, cplx a4) {
        const cplx r1 = 2.0 * a2 - a1, r2 = 2.0 * a4 - a2;
        return (4.0 * r2 - r1) / 3.0;
    };
    fit.leading_richardson = fit.subleading_richardson = cplx(std::nan(""), std::nan(""));
    for (int i = 0; i + 2 < m; ++i) {
        const double ua = u_grid[static_cast<std::size_t>(i)];
        if (std::abs(u_grid[static_cast<std::size_t>(i + 1)] - 2 * ua) > 1e-12 * ua ||
            std::abs(u_grid[static_cast<std::size_t>(i + 2)] - 4 * ua) > 1e-12 * ua)
            continue;
        cplx Av[3], Bv[3];
        for (int k = 0; k < 3; ++k) {
            const double u = u_grid[static_cast<std::size_t>(i + k)];
            Av[k] = fit.values[static_cast<std::size_t>(i + k)].value * std::pow(u, ex[0]);
        }
        fit.leading_richardson = richardson(Av[0], Av[1], Av[2]);
        for (int k = 0; k < 3; ++k) Bv[k] = (Av[k] - fit.leading_richardson) * u_grid[static_cast<std::size_t>(i + k)];
        fit.subleading_richardson = richardson(Bv[0], Bv[1], Bv[2]);
        break;
    }

    const double ua = u_grid[static_cast<std::size_t>(m - 2)], ub = u_grid[static_cast<std::size_t>(m - 1)];
    const cplx ia = fit.values[static_cast<std::size_t>(m - 2)].value - fit.subleading * std::pow(ua, -ex[1]);
    const cplx ib = fit.values[static_cast<std::size_t>(m - 1)].value - fit.subleading * std::pow(ub, -ex[1]);
    fit.exponent_estimate = -std::log(std::abs(ib) / std::abs(ia)) / std::log(ub / ua);
    return fit;
}

PeriodTargets period_targets(PeriodCombo combo, const FlatPoint& t, const SeriesConfig& cfg) {
    const cplx tau = t.tau.tau();
    const double sp = std::sqrt(kPi);
    const cplx s1 = t.t1 - t.t2 * t.t2 * eisenstein(2, t.tau, cfg) / 12.0;
    switch (combo) {
    case PeriodCombo::path1:
        return {-kTwoPiI * tau, kTwoPiI * tau * t.t1 + t.t2 * t.t2, -(kTwoPiI * tau * t.t1 + t.t2 * t.t2)};
    case PeriodCombo::path2: return {2.0 * sp * t.t2, -2.0 * sp * t.t2 * s1, -2.0 * sp * t.t2 * t.t1};
    case PeriodCombo::path3: return {kTwoPiI, -kTwoPiI * t.t1, -kTwoPiI * t.t1};
    }
    throw std::logic_error("unreachable");
}

std::vector<KClassImage> kclass_correspondence() {
    const Mat3 ch = gamma_data().ch_gamma;
    const double sp = std::sqrt(kPi);
    std::vector<KClassImage> out{
        {"-delta2", -k_delta2(), Vec3(1.0, 0.0, 0.0), {}},
        {"-alpha", -k_alpha(), Vec3(0.0, -sp, 0.0), {}},
        {"delta1", k_delta1(), Vec3(0.0, 0.0, kTwoPiI), {}},
    };
    for (auto& e : out) {
        const auto p = e.k_class.in(Basis::P).coords;
        e.computed = ch * Vec3(static_cast<double>(p[0]), static_cast<double>(p[1]), static_cast<double>(p[2]));
    }
    return out;
}

} // namespace ellfrob
