#include "ellfrob/errors.hpp"
#include "ellfrob/gamma_periods.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ellfrob;

namespace {

const FlatPoint kT{-1.0, 1.0, HalfPlanePoint(cplx(0, 1))};

} // namespace

TEST_CASE("Gamma-class identities") {
    const GammaData d = gamma_data();
    const GammaResiduals r = gamma_identities(d);
    CHECK(r.serre < 1e-12);
    CHECK(r.euler < 1e-12);
    // the identities notice a missing degree operator
    GammaData flat = d;
    flat.Q.setZero();
    CHECK(gamma_identities(flat).serre > 0.5);

    for (const KClassImage& k : kclass_correspondence()) CHECK_MESSAGE((k.computed - k.expected).norm() < 1e-14, k.name);
    // ch_gamma is linear in the class
    const auto images = kclass_correspondence();
    REQUIRE(images.size() >= 2);
    const auto pc = [](const KClass& x) {
        const auto c = x.in(Basis::P).coords;
        return Vec3(double(c[0]), double(c[1]), double(c[2]));
    };
    const KClass sum = images[0].k_class + images[1].k_class;
    CHECK((d.ch_gamma * pc(sum) - images[0].computed - images[1].computed).norm() < 1e-14);
}

TEST_CASE("single periods approach their leading terms") {
    const PeriodTargets p3 = period_targets(PeriodCombo::path3, kT);
    CHECK(std::abs(p3.leading - kTwoPiI) < 1e-12);
    const PeriodValue v3 = combo_period(PeriodCombo::path3, kT, 100.0);
    CHECK(std::abs(v3.value * std::sqrt(100.0) - kTwoPiI) < 2e-2 * std::abs(kTwoPiI));

    const PeriodValue v2 = combo_period(PeriodCombo::path2, kT, 100.0);
    const PeriodTargets p2 = period_targets(PeriodCombo::path2, kT);
    CHECK(std::abs(std::abs(p2.leading) - 2.0 * std::sqrt(kPi)) < 1e-12);
    // the u^-1 correction is still 1% at u = 100, so compare against two terms
    CHECK(std::abs(v2.value * 100.0 - p2.leading - p2.subleading / 100.0) < 1e-3 * std::abs(p2.leading));
    CHECK(v2.error_estimate < 1e-8);
}

TEST_CASE("asymptotic fits") {
    const std::vector<double> grid{25, 50, 100, 200};
    for (PeriodCombo c : {PeriodCombo::path1, PeriodCombo::path2, PeriodCombo::path3}) {
        const AsymptoticFit f = asymptotic_fit(c, kT, grid);
        const PeriodTargets t = period_targets(c, kT);
        CHECK_MESSAGE(oracle::rel(f.leading, t.leading) < 1e-2, combo_name(c));
        CHECK_MESSAGE(oracle::rel(f.subleading, t.subleading) < 1e-2, combo_name(c));
        CHECK(f.relative_residual < 1e-3);
        CHECK(std::abs(f.exponent_estimate - combo_exponents(c)[0]) < 5e-2);
    }
    const AsymptoticFit r1 = asymptotic_fit(PeriodCombo::path1, kT, {25, 50, 100});
    CHECK(oracle::rel(r1.leading_richardson, period_targets(PeriodCombo::path1, kT).leading) < 1e-3);

    // t1 = 0 leaves path3 with no subleading term
    const FlatPoint t0{0.0, 1.0, HalfPlanePoint(cplx(0, 1))};
    const AsymptoticFit f0 = asymptotic_fit(PeriodCombo::path3, t0, grid);
    CHECK(std::abs(f0.subleading) < 1e-3);
}

TEST_CASE("period errors") {
    QuadConfig tight;
    tight.max_panels = 8;
    tight.quad_tol = 1e-15;
    CHECK_THROWS_AS(exponential_period({CycleId::path1}, kT, 25.0, tight), QuadratureUnconverged);
    CHECK_THROWS(exponential_period({CycleId::path1}, {-1.0, cplx(0, 1), HalfPlanePoint(cplx(0, 1))}, 25.0));
    CHECK_THROWS(exponential_period({CycleId::path1}, {-1.0, 1.0, HalfPlanePoint(cplx(0.2, 1))}, 25.0));
    CHECK_THROWS(exponential_period({CycleId::path1}, kT, -1.0));
    CHECK_THROWS_AS(asymptotic_fit(PeriodCombo::path3, kT, {100, 100.0000001, 100.0000002}), IllConditioned);

    QuadConfig bad;
    bad.n_quad = 11;
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(parse_combo("path4"));
    CHECK(parse_cycle("path2b") == CycleId::path2b);
}
