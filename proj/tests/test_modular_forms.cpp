#include "ellfrob/errors.hpp"
#include "ellfrob/modular_forms.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace ellfrob;
using oracle::big;

TEST_CASE("e_of special values") {
    CHECK(std::abs(e_of(0.0) - 1.0) == 0.0);
    CHECK(std::abs(e_of(0.5) + 1.0) < 1e-15);
    const double ref = static_cast<double>(exp(-2 * oracle::big_pi()));
    CHECK(std::abs(e_of(cplx(0, 1)) - ref) < 1e-18);
    // single valued: no branch is taken for large arguments
    CHECK(std::abs(e_of(cplx(7.25, 0)) - cplx(0, 1)) < 1e-13);
}

TEST_CASE("divisor sums against enumeration") {
    CHECK(divisor_sigma(3, 1) == 1);
    CHECK(divisor_sigma(3, 2) == 9);
    CHECK(divisor_sigma(5, 3) == 244);
    for (int k : {1, 3, 5})
        for (std::int64_t n = 1; n <= 300; ++n) {
            std::int64_t s = 0;
            for (std::int64_t d = 1; d <= n; ++d)
                if (n % d == 0) {
                    std::int64_t p = 1;
                    for (int i = 0; i < k; ++i) p *= d;
                    s += p;
                }
            REQUIRE(divisor_sigma(k, n) == s);
        }
    CHECK_THROWS_AS(divisor_sigma(5, 9000), Overflow);
    CHECK_THROWS(divisor_sigma(2, 4));
    CHECK_THROWS(divisor_sigma(3, 0));
}

TEST_CASE("Eisenstein values") {
    CHECK(std::abs(eisenstein(4, cplx(0, 10)) - 1.0) <= 1e-20);
    const cplx e2 = eisenstein(2, cplx(0, 1));
    CHECK(std::abs(e2 - 3.0 / kPi) < 1e-14);
    CHECK(std::abs(e2 - static_cast<double>(oracle::e2_imaginary(1))) < 1e-14);
    CHECK(std::abs(eisenstein(6, cplx(0, 1))) < 1e-13);
    const cplx t{0.3, 0.8};
    CHECK(std::abs(eisenstein(6, t + 1.0) - eisenstein(6, t)) < 1e-12);
    // E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6
    CHECK(oracle::rel(eisenstein(4, cplx(0, 1)), 3.0 * std::pow(std::tgamma(0.25), 8) / std::pow(2 * kPi, 6)) < 1e-13);
}

TEST_CASE("Eisenstein derivatives") {
    const HalfPlanePoint far(cplx(0, 10));
    const cplx E2 = eisenstein(2, far), E4 = eisenstein(4, far), E6 = eisenstein(6, far);
    CHECK(oracle::rel(eisenstein_tau_derivative(4, 1, far), (E2 * E4 - E6) / 3.0) < 1e-12);
    CHECK(std::abs(eisenstein_tau_derivative(2, 1, far) - (E2 * E2 - E4) / 12.0) < 1e-15);

    const HalfPlanePoint t(cplx(0.2, 0.9));
    const cplx e2 = eisenstein(2, t), d1 = eisenstein_tau_derivative(2, 1, t), d2 = eisenstein_tau_derivative(2, 2, t),
               d3 = eisenstein_tau_derivative(2, 3, t);
    CHECK(oracle::rel(d3, e2 * d2 - 1.5 * d1 * d1) < 1e-9);

    // the termwise derivative is a tau-derivative: compare with finite differences
    const cplx fd = oracle::derivative([](cplx x) { return eisenstein(4, x); }, t.tau(), 1e-4) / kTwoPiI;
    CHECK(oracle::rel(eisenstein_tau_derivative(4, 1, t), fd) < 1e-9);

    oracle::Rng rng(11);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const HalfPlanePoint p(rng.tau());
        for (auto [w, k] : {std::pair{2, 1}, {2, 2}, {2, 3}, {4, 1}, {4, 2}, {6, 1}, {6, 2}}) {
            const DerivativeValue v = eisenstein_derivative(w, k, p);
            worst = std::max(worst, v.residual() / std::max(1.0, std::abs(v.series)));
        }
    }
    CHECK(worst < 1e-9);
    CHECK_THROWS_AS(eisenstein_tau_derivative(4, 3, t), UnsupportedOrder);
    CHECK_THROWS_AS(eisenstein_tau_derivative(2, 4, t), UnsupportedOrder);
}

TEST_CASE("Dedekind eta") {
    CHECK(oracle::rel(std::abs(dedekind_eta(cplx(0, 10))), std::exp(-20 * kPi / 24)) < 1e-15);
    CHECK(std::abs(dedekind_eta(cplx(0, 1)) - static_cast<double>(oracle::eta_imaginary(1))) < 1e-14);
    CHECK(std::abs(dedekind_eta(cplx(0, 1)) - 0.7682254223) < 1e-10);
    const cplx t{0.1, 1.1};
    const cplx dlog = oracle::derivative([](cplx x) { return std::log(dedekind_eta(x)); }, t, 1e-4) / kTwoPiI;
    CHECK(std::abs(dlog - eisenstein(2, t) / 24.0) < 1e-7);

    oracle::Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const cplx p = rng.tau();
        REQUIRE(std::abs(dedekind_eta(p + 1.0) - e_of(1.0 / 24.0) * dedekind_eta(p)) < 1e-12);
        for (int w : {2, 4, 6}) REQUIRE(std::abs(eisenstein(w, p + 1.0) - eisenstein(w, p)) < 1e-12);
    }
}

TEST_CASE("truncation and configuration") {
    const HalfPlanePoint t(cplx(0.1, 0.4));
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        SeriesConfig a, b;
        a.tail_tol = tol;
        b.tail_tol = tol / 2;
        for (int w : {2, 4, 6}) {
            const cplx va = eisenstein(w, t, a), vb = eisenstein(w, t, b);
            CHECK(std::abs(va - vb) <= tol * std::abs(va));
        }
    }
    SeriesConfig tiny;
    tiny.max_terms = 8;
    CHECK_THROWS_AS(eisenstein(4, cplx(0, 0.35), tiny), NonConvergence);
    CHECK_THROWS(HalfPlanePoint(cplx(0.3, -0.1)));
    CHECK_THROWS(HalfPlanePoint(cplx(0.3, 0.0)));
    CHECK_THROWS(eisenstein(2, cplx(0, 0.2)));
    SeriesConfig bad;
    bad.max_terms = 3;
    CHECK_THROWS(bad.validate());
    bad = {};
    bad.tail_tol = 0;
    CHECK_THROWS(bad.validate());
}
