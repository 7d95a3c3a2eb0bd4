#include "ellfrob/errors.hpp"
#include "ellfrob/theta_weierstrass.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace ellfrob;

namespace {

cplx wp(cplx z, cplx tau) { return weierstrass(WeierstrassKind::p, {z, tau}); }
cplx zeta(cplx z, cplx tau) { return weierstrass(WeierstrassKind::zeta, {z, tau}); }

cplx cell_point(oracle::Rng& rng, cplx tau, double margin) {
    for (;;) {
        const cplx z = rng.uniform(0, 1) + rng.uniform(0, 1) * tau;
        if (lattice_distance(z, tau) >= margin) return z;
    }
}

} // namespace

TEST_CASE("theta11 special values") {
    const cplx x{0.17, 0.21};
    CHECK(std::abs(theta11_d(0, -x, cplx(0, 0.95)) + theta11_d(0, x, cplx(0, 0.95))) < 1e-12);
    const HalfPlanePoint t(cplx(0, 1.3));
    CHECK(oracle::rel(theta11_d(1, 0.0, t), -2.0 * kPi * std::pow(dedekind_eta(t), 3)) < 1e-10);
    const HalfPlanePoint u(cplx(0.25, 0.8));
    CHECK(oracle::rel(4.0 / (kTwoPiI * kTwoPiI) * theta11_d(3, 0.0, u) / theta11_d(1, 0.0, u), eisenstein(2, u)) < 1e-9);
}

TEST_CASE("theta11 derivatives against finite differences and argument reduction") {
    const HalfPlanePoint t(cplx(0.1, 0.9));
    for (cplx x : {cplx(0.2, 0.1), cplx(3.7, 2.6), cplx(-1.4, -1.9)}) {
        for (int k = 0; k < 3; ++k) {
            const cplx fd = oracle::derivative([&](cplx y) { return theta11_d(k, y, t); }, x, 1e-5);
            CHECK(oracle::rel(fd, theta11_d(k + 1, x, t)) / std::max(1.0, std::abs(theta11_d(k + 1, x, t))) < 1e-7);
        }
    }
    // far from the cell: the direct series and the reduced evaluation agree where both are accurate
    const cplx x{2.3, 1.7};
    CHECK(oracle::rel(theta11_d(0, x, t), detail::theta11_series(0, x, t.tau(), SeriesConfig{})) < 1e-9);
    CHECK(oracle::rel(theta11_d(0, x, t), detail::theta11_product(x, t.tau(), SeriesConfig{})) < 1e-9);
}

TEST_CASE("theta11 quasi-periodicity for all small shifts") {
    oracle::Rng rng(3);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const cplx tau = rng.tau();
        const cplx x = cell_point(rng, tau, 0.05);
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n)
                worst = std::max(worst, identity_residual("theta_quasi_periodicity", {x, tau, m, n}));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Weierstrass functions") {
    const cplx z{0.31, 0.12}, tau{0, 1.1};
    CHECK(std::abs(wp(-z, tau) - wp(z, tau)) < 1e-11);
    const cplx t2{0.13, 0.97}, z2{0.41, 0.27};
    CHECK(oracle::rel(wp(z2 + 1.0, t2), wp(z2, t2)) < 1e-10);
    CHECK(oracle::rel(wp(z2 + t2, t2), wp(z2, t2)) < 1e-10);
    const cplx E2 = eisenstein(2, t2);
    CHECK(std::abs(zeta(z2 + 1.0, t2) - zeta(z2, t2) + E2 / 12.0) < 1e-9);
    CHECK(std::abs(zeta(z2 + t2, t2) - zeta(z2, t2) + E2 * t2 / 12.0 + 1.0 / kTwoPiI) < 1e-9);
    const cplx dz = oracle::derivative([&](cplx w) { return zeta(w, t2); }, z2, 1e-5);
    CHECK(std::abs(dz + wp(z2, t2)) < 1e-7);
    const cplx dp = oracle::derivative([&](cplx w) { return wp(w, t2); }, z2, 1e-5);
    CHECK(oracle::rel(dp, weierstrass(WeierstrassKind::p_dz, {z2, t2})) < 1e-7);
}

TEST_CASE("theta-based wp against the lattice sum") {
    oracle::Rng rng(17);
    for (int i = 0; i < 10; ++i) {
        const cplx tau = rng.tau();
        const cplx z = cell_point(rng, tau, 0.1) - 0.5 - 0.5 * tau; // centered cell keeps |z| small
        const cplx ref = oracle::wp_lattice(z, tau, eisenstein(4, tau), eisenstein(6, tau));
        CHECK(oracle::rel(wp(z, tau), ref) < 1e-6);
    }
}

TEST_CASE("half periods") {
    const HalfPeriodValues h = half_periods(cplx(0, 1));
    CHECK(std::abs(h.e2) < 1e-10);
    CHECK(std::abs(h.e1 + h.e3) < 1e-10);
    CHECK(h.e3.real() > 0);
    CHECK(std::abs(h.e3.imag()) < 1e-12);
    oracle::Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        const cplx tau = rng.tau();
        const HalfPeriodValues v = half_periods(tau);
        CHECK(std::abs(v.e1 + v.e2 + v.e3) < 1e-10);
        CHECK(std::abs(v.e1 - v.e2) > 1e-3);
        CHECK(std::abs(v.e2 - v.e3) > 1e-3);
        CHECK(std::abs(v.e1 - v.e3) > 1e-3);
        // e_i are the values of wp at the critical points
        const auto c = half_period_points(tau);
        for (int k = 0; k < 3; ++k) CHECK(oracle::rel(v[k], wp(c[static_cast<std::size_t>(k)], tau)) < 1e-12);
        // the cubic factors as 4 prod (wp - e_i): the quadratic coefficient is zero and the rest match E4, E6
        const cplx s2 = v.e1 * v.e2 + v.e2 * v.e3 + v.e1 * v.e3, s3 = v.e1 * v.e2 * v.e3;
        CHECK(oracle::rel(-4.0 * s2, eisenstein(4, tau) / 12.0) < 1e-10);
        CHECK(oracle::rel(-4.0 * s3, eisenstein(6, tau) / 216.0) < 1e-10);
    }
}

TEST_CASE("identity registry") {
    CHECK(identity_residual("theta_heat", {0.23, cplx(0, 0.9)}) < 1e-8);
    CHECK(identity_residual("key_identity_1", {cplx(0.31, 0.07), cplx(0, 1.2)}) < 1e-8);
    oracle::Rng rng(7);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const cplx tau = rng.tau();
        worst = std::max(worst, identity_residual("cubic_a", {cell_point(rng, tau, 0.05), tau}));
    }
    CHECK(worst < 1e-8);
    CHECK(identity_names().size() == 20);
    CHECK_THROWS_AS(identity_residual("no_such_identity", {0.2, cplx(0, 1)}), UnknownIdentity);
}

TEST_CASE("pole margin") {
    CHECK_THROWS_AS(wp(0.01, cplx(0, 1)), PoleTooClose);
    CHECK_THROWS_AS(wp(cplx(1.0, 1.005), cplx(0, 1)), PoleTooClose);
    CHECK_NOTHROW(wp(0.03, cplx(0, 1)));
    const cplx x{3.2, 2.1}, tau{0.1, 1.0};
    const LatticeReduction r = reduce_to_cell(x, tau);
    CHECK(std::abs(r.x0 + static_cast<double>(r.m) + static_cast<double>(r.n) * tau - x) < 1e-14);
    CHECK(std::abs(r.x0) < 1.5);
}
