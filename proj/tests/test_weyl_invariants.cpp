#include "ellfrob/errors.hpp"
#include "ellfrob/modular_forms.hpp"
#include "ellfrob/weyl_invariants.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ellfrob;

namespace {

TildeEPoint random_point(oracle::Rng& rng) {
    return {cplx(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3)), cplx(rng.uniform(0.15, 0.85), rng.uniform(-0.2, 0.2)),
            rng.tau()};
}

double distance(const TildeEPoint& a, const TildeEPoint& b) {
    return std::max({std::abs(a.phi - b.phi), std::abs(a.x - b.x), std::abs(a.tau.tau() - b.tau.tau())});
}

template <class F>
cplx fd(F f, cplx x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

} // namespace

TEST_CASE("group action") {
    const TildeEPoint p{0.3, cplx(0.2, 0.1), HalfPlanePoint(cplx(0, 1.1))};
    CHECK(distance(apply_group(parse_group_word("r1 r1"), p), p) < 1e-15);
    const TildeEPoint r = apply_group(parse_group_word("r1"), p);
    CHECK(std::abs(r.x - (1.0 - p.x)) < 1e-15);
    CHECK(r.phi == p.phi);

    const int m = 2, n = 3;
    const cplx tau = p.tau.tau();
    const TildeEPoint q = apply_group(parse_group_word("t1^2 t2^3"), p);
    const TildeEPoint expect{p.phi + 2.0 * double(n) * p.x + double(n * n) * tau + double(m - n), p.x + double(m) + double(n) * tau, p.tau};
    CHECK(distance(q, expect) < 1e-13);

    const TildeEPoint s = apply_group(Mat2{{{1, 1}, {0, 1}}}, p);
    CHECK(distance(s, {p.phi, p.x, HalfPlanePoint(tau + 1.0)}) < 1e-15);
    // the S element: (phi - x^2/tau, x/tau, -1/tau)
    const TildeEPoint sS = apply_group(Mat2{{{0, -1}, {1, 0}}}, p);
    CHECK(distance(sS, {p.phi - p.x * p.x / tau, p.x / tau, HalfPlanePoint(-1.0 / tau)}) < 1e-14);

    CHECK(parse_group_word("r1 r2").parity() == 1);
    CHECK(parse_group_word("r3 t1 c^-2").parity() == -1);
    for (const char* bad : {"r4", "q", "r1^", "t1^x"}) CHECK_THROWS_AS(parse_group_word(bad), ParseError);
}

TEST_CASE("invariants and degrees") {
    const TildeEPoint p{cplx(0.1, 0.05), cplx(0.31, 0.12), HalfPlanePoint(cplx(0.07, 0.95))};
    const Invariants v = invariants(p);
    CHECK(std::abs(v.y3 - kTwoPiI * p.tau.tau()) < 1e-14);
    CHECK(oracle::rel(v.J, J_theta_quotient(p)) < 1e-9);
    CHECK(oracle::rel(v.J, J_product(p)) < 1e-8);

    // (1/pi i) d/dphi of (y1, y2, y3, J) = (2, 1, 0, 3) times itself
    const cplx pi_i{0, kPi};
    auto at = [&](cplx phi) { return invariants({phi, p.x, p.tau}); };
    const cplx d1 = fd([&](cplx f) { return at(f).y1; }, p.phi, 1e-3) / pi_i;
    const cplx d2 = fd([&](cplx f) { return at(f).y2; }, p.phi, 1e-3) / pi_i;
    const cplx d3 = fd([&](cplx f) { return at(f).y3; }, p.phi, 1e-3) / pi_i;
    const cplx dJ = fd([&](cplx f) { return at(f).J; }, p.phi, 1e-3) / pi_i;
    CHECK(oracle::rel(d1, 2.0 * v.y1) < 1e-9);
    CHECK(oracle::rel(d2, v.y2) < 1e-9);
    CHECK(std::abs(d3) < 1e-9);
    CHECK(oracle::rel(dJ, 3.0 * v.J) < 1e-9);

    // phi -> phi + 2 is invisible
    const Invariants w = invariants({p.phi + 2.0, p.x, p.tau});
    CHECK(oracle::rel(w.y1, v.y1) < 1e-12);
    CHECK(oracle::rel(w.y2, v.y2) < 1e-12);
    CHECK(oracle::rel(w.J, v.J) < 1e-12);
    CHECK(chevalley_residual({p.phi + 2.0, p.x, p.tau}) < 1e-8);

    CHECK_THROWS_AS(invariants({0.1, cplx(1e-5, 0), p.tau}), PoleTooClose);
}

TEST_CASE("Chevalley relation") {
    oracle::Rng rng(21);
    double worst = 0, unbalanced = 0;
    for (int i = 0; i < 100; ++i) {
        const TildeEPoint p = random_point(rng);
        const Invariants v = invariants(p);
        const double scale = std::max({1.0, std::norm(v.J), std::pow(std::abs(v.y1), 3), std::pow(std::abs(v.y2), 6)});
        worst = std::max(worst, chevalley_residual(p) / scale);
        unbalanced = std::max(unbalanced, chevalley_residual_unbalanced(p) / scale);
    }
    CHECK(worst < 1e-8);
    CHECK(unbalanced > 1e-3);

    // on the reflection hyperplane J vanishes and so does the cubic
    const TildeEPoint h{cplx(0.2, 0.1), 0.5, HalfPlanePoint(cplx(0.1, 1.2))};
    const Invariants v = invariants(h);
    CHECK(std::abs(v.J) < 1e-8);
    const cplx E4 = eisenstein(4, h.tau), E6 = eisenstein(6, h.tau);
    CHECK(std::abs(std::pow(v.y1, 3) - E4 * v.y1 * std::pow(v.y2, 4) / 48.0 + E6 * std::pow(v.y2, 6) / 864.0) < 1e-8);
}

TEST_CASE("invariance") {
    oracle::Rng rng(22);
    const std::vector<GroupElement> elements{parse_group_word("r1"), parse_group_word("r2"), parse_group_word("r3"),
                                             parse_group_word("t1"), parse_group_word("t2"), parse_group_word("c"),
                                             parse_group_word("r2 t1^-1 c^2"), Mat2{{{1, 1}, {0, 1}}},
                                             Mat2{{{1, 0}, {1, 1}}}};
    SeriesConfig wide;
    wide.im_min = 0.15; // SL(2,Z) images leave the sampling box
    double worst = 0;
    for (int i = 0; i < 30; ++i) {
        const TildeEPoint p = random_point(rng);
        for (const auto& g : elements) {
            const InvarianceResiduals r = invariance_residuals(p, g, wide);
            worst = std::max({worst, r.dy1, r.dy2, r.dJ});
        }
    }
    CHECK(worst < 1e-8);

    const TildeEPoint p{0.1, cplx(0.3, 0.1), HalfPlanePoint(cplx(0, 1))};
    const Invariants a = invariants(p), b = invariants(apply_group(parse_group_word("r2"), p));
    CHECK(std::abs(b.J + a.J) < 1e-9);
    CHECK(std::abs(b.y1 - a.y1) < 1e-9);
}

TEST_CASE("flat coordinates and the pulled-back metric") {
    oracle::Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const TildeEPoint p = random_point(rng);
        const FlatPoint t = flat_coordinates(p);
        CHECK(oracle::rel(t.t1, t1_from_invariants(p)) < 1e-8);
        const Mat3 g = pullback_metric(p);
        CHECK((g - intersection_form(t)).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, std::abs(t.t1)));
        CHECK(std::abs(g(0, 2) - t.t1) < 1e-8 * std::max(1.0, std::abs(t.t1)));
        const cplx E2 = eisenstein(2, t.tau);
        CHECK(std::abs(g(1, 1) - (t.t1 / 2.0 - t.t2 * t.t2 * E2 / 8.0)) < 1e-8 * std::max(1.0, std::abs(t.t1)));
        CHECK(oracle::rel(invariant_jacobian_determinant(p), kTwoPiI * kTwoPiI * kTwoPiI * invariants(p).J) < 1e-7);
    }

    // analytic Jacobian against finite differences
    const TildeEPoint p{cplx(0.1, 0.05), cplx(0.31, 0.12), HalfPlanePoint(cplx(0.07, 0.95))};
    const Mat3 jac = flat_jacobian(p);
    auto t_at = [&](cplx phi, cplx x, cplx tau) {
        const FlatPoint f = flat_coordinates({phi, x, HalfPlanePoint(tau)});
        return std::array<cplx, 3>{f.t1, f.t2, f.t3()};
    };
    for (int k = 0; k < 3; ++k) {
        const cplx fphi = fd([&](cplx s) { return t_at(s, p.x, p.tau.tau())[k]; }, p.phi, 1e-3);
        const cplx fx = fd([&](cplx s) { return t_at(p.phi, s, p.tau.tau())[k]; }, p.x, 1e-3);
        const cplx ftau = fd([&](cplx s) { return t_at(p.phi, p.x, s)[k]; }, p.tau.tau(), 1e-3);
        CHECK(std::abs(jac(k, 0) - fphi) < 1e-7 * std::max(1.0, std::abs(fphi)));
        CHECK(std::abs(jac(k, 1) - fx) < 1e-7 * std::max(1.0, std::abs(fx)));
        CHECK(std::abs(jac(k, 2) - ftau) < 1e-7 * std::max(1.0, std::abs(ftau)));
    }

    // on x = 1/2 the t2 row loses rank in x
    CHECK_THROWS_AS(pullback_metric({0.1, 0.5, HalfPlanePoint(cplx(0, 1))}), DegenerateJacobian);
}
