#include "ellfrob/errors.hpp"
#include "ellfrob/frobenius_structure.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ellfrob;

namespace {

ModuliPoint random_point(oracle::Rng& rng) {
    const cplx s1{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const cplx s2 = std::polar(rng.uniform(0.5, 1.5), rng.uniform(-kPi, kPi));
    return {s1, s2, rng.tau()};
}

FlatPoint shifted(const FlatPoint& t, int k, cplx h) {
    FlatPoint u = t;
    if (k == 0) u.t1 += h;
    if (k == 1) u.t2 += h;
    if (k == 2) u.tau = HalfPlanePoint(t.tau.tau() + h / kTwoPiI); // d/dt3 = (1/2 pi i) d/dtau
    return u;
}

// d/dt_k of a matrix-valued function, 5-point stencil
template <class F>
Mat3 dmat(F f, const FlatPoint& t, int k, double h) {
    return (-f(shifted(t, k, 2 * h)) + 8.0 * f(shifted(t, k, h)) - 8.0 * f(shifted(t, k, -h)) + f(shifted(t, k, -2 * h))) /
           (12.0 * h);
}

} // namespace

TEST_CASE("moduli points and flat coordinates") {
    CHECK_THROWS(ModuliPoint(0.3, 0.0, cplx(0, 1)));
    oracle::Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const ModuliPoint p = random_point(rng);
        const FlatPoint t = p.flat();
        CHECK(oracle::rel(t.t1, p.s1() + p.s2() * p.s2() * eisenstein(2, p.tau()) / 12.0) < 1e-14);
        const ModuliPoint q = ModuliPoint::from_flat(t);
        CHECK(std::abs(q.s1() - p.s1()) < 1e-12);
        CHECK(std::abs(q.s2() - p.s2()) < 1e-12);
        CHECK(std::abs(q.tau().tau() - p.tau().tau()) < 1e-12);
    }
}

TEST_CASE("unfolding") {
    const ModuliPoint p(cplx(0.3, 0.1), cplx(1.2, -0.2), cplx(0.1, 1.3));
    const cplx z{0.21, 0.33};
    CHECK(std::abs(unfolding(z, p) - unfolding(z, ModuliPoint(0.0, p.s2(), p.tau())) - p.s1()) < 1e-13);
    CHECK(oracle::rel(unfolding(z, p), unfolding_flat(z, p.flat())) < 1e-10);
    const Triple u = canonical_coordinates(p);
    CHECK(std::abs(unfolding(0.5, p) - u[0]) < 1e-10);
    for (cplx c : half_period_points(p.tau().tau()))
        CHECK(std::abs(p.s2() * p.s2() * weierstrass(WeierstrassKind::p_dz, {c, p.tau()})) < 1e-9);
    CHECK_THROWS_AS(unfolding(0.001, p), PoleTooClose);
}

TEST_CASE("residue pairing") {
    const ModuliPoint p(cplx(0.3, 0.1), cplx(1.2, -0.2), cplx(0.1, 1.3));
    const Mat3 eta = residue_pairing(p);
    CHECK(std::abs(eta(0, 0)) < 1e-10);
    CHECK(std::abs(eta(1, 1) - 2.0) < 1e-10);
    CHECK((eta - residue_pairing_closed_form(p)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((residue_pairing_flat(p) - flat_pairing()).cwiseAbs().maxCoeff() < 1e-10);
    // the pole contour reproduces only the (s1, s2) block
    CHECK((residue_pairing_at_pole(p) - eta).block(0, 0, 2, 2).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(residue_pairing(p, {}, 0.6), ContourTooLarge);

    oracle::Rng rng(2);
    double worst = 0;
    for (int i = 0; i < 50; ++i)
        worst = std::max(worst, (residue_pairing_flat(random_point(rng)) - flat_pairing()).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-10);
}

TEST_CASE("Frobenius tensors at a point") {
    const FlatPoint t{cplx(0.4, -0.2), cplx(0.9, 0.3), HalfPlanePoint(cplx(0.15, 1.05))};
    const FrobeniusTensors f = frobenius_tensors(t);
    CHECK((f.eta - flat_pairing()).cwiseAbs().maxCoeff() == 0.0);
    // unit field
    for (int j = 0; j < 3; ++j) {
        Vec3 e1 = Vec3::Zero(), v = Vec3::Zero();
        e1(0) = 1;
        v(j) = 1;
        CHECK((multiply(f.C, e1, v) - v).norm() < 1e-14);
    }
    const cplx E2 = eisenstein(2, t.tau);
    CHECK(std::abs(f.g(0, 2) - t.t1) < 1e-8);
    CHECK(std::abs(f.g(1, 2) - t.t2 / 2.0) < 1e-8);
    CHECK(std::abs(f.g(1, 1) - (t.t1 / 2.0 - t.t2 * t.t2 * E2 / 8.0)) < 1e-8);
    // C symmetric in the lower pair; eta-lowered C totally symmetric
    double asym = 0, lowered = 0;
    for (int k = 0; k < 3; ++k) asym = std::max(asym, (f.C[k] - f.C[k].transpose()).cwiseAbs().maxCoeff());
    auto low = [&](int a, int b, int c) {
        cplx s = 0;
        for (int k = 0; k < 3; ++k) s += f.eta(a, k) * f.C[k](b, c);
        return s;
    };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) lowered = std::max({lowered, std::abs(low(a, b, c) - low(b, a, c)), std::abs(low(a, b, c) - low(c, b, a))});
    CHECK(asym < 1e-14);
    CHECK(lowered < 1e-13);
    CHECK(euler_homogeneity_residual(t) < 1e-12);
    // the potential's gradient against finite differences
    const Vec3 grad = potential_gradient(t);
    for (int k = 0; k < 3; ++k) {
        const cplx fd = (-potential(shifted(t, k, 2e-4)) + 8.0 * potential(shifted(t, k, 1e-4)) - 8.0 * potential(shifted(t, k, -1e-4)) +
                         potential(shifted(t, k, -2e-4))) / 12e-4;
        CHECK(oracle::rel(fd, grad(k)) < 1e-8);
    }
}

TEST_CASE("three product constructions") {
    oracle::Rng rng(4);
    double worst_kS = 0, worst_G = 0;
    for (int i = 0; i < 50; ++i) {
        const FlatPoint t = random_point(rng).flat();
        const Tensor3 a = structure_constants_from_potential(t), b = structure_constants_from_critical_values(t),
                      c = structure_constants_from_christoffel(t);
        for (int k = 0; k < 3; ++k) {
            worst_kS = std::max(worst_kS, (a[k] - b[k]).cwiseAbs().maxCoeff());
            worst_G = std::max(worst_G, (a[k] - c[k]).cwiseAbs().maxCoeff());
        }
    }
    CHECK(worst_kS < 1e-8);
    CHECK(worst_G < 1e-8);

    const FlatPoint t{cplx(-0.3, 0.2), cplx(1.1, -0.4), HalfPlanePoint(cplx(-0.2, 0.95))};
    const Vec3 unit = product_via_critical_values(t, 0, 0);
    CHECK((unit - Vec3(1, 0, 0)).norm() < 1e-10);
    const EisensteinJet e = eisenstein_jet(t.tau);
    const Vec3 p22 = product_via_critical_values(t, 1, 1);
    CHECK(std::abs(p22(2) - 2.0) < 1e-8);
    CHECK(std::abs(p22(1) + t.t2 / 2.0 * e.e2) < 1e-8);
    CHECK(std::abs(p22(0) + t.t2 * t.t2 / 2.0 * e.de2) < 1e-8);

    const Tensor3 can = canonical_products(t);
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) CHECK(std::abs(can[c](a, b) - (a == b && b == c ? 1.0 : 0.0)) < 1e-9);
}

TEST_CASE("WDVV and its sensitivity") {
    oracle::Rng rng(6);
    double worst = 0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, wdvv_residual(random_point(rng).flat()));
    CHECK(worst < 1e-9);

    const FlatPoint t{cplx(0.2, 0.1), cplx(0.8, 0.5), HalfPlanePoint(cplx(0.1, 1.2))};
    Tensor3 C = structure_constants_from_potential(t);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            Vec3 e1 = Vec3::Zero(), a = Vec3::Zero(), b = Vec3::Zero();
            e1(0) = 1;
            a(j) = 1;
            b(k) = 1;
            CHECK((multiply(C, multiply(C, e1, a), b) - multiply(C, e1, multiply(C, a, b))).norm() < 1e-14);
        }
    C[1](2, 2) += 1e-3;
    CHECK(wdvv_residual(C) > 1e-4);
}

TEST_CASE("intersection form and Christoffel symbols") {
    const FlatPoint t{cplx(0.35, -0.15), cplx(0.7, 0.45), HalfPlanePoint(cplx(0.05, 1.1))};
    const double h = 1e-4;
    const Mat3 dg1 = dmat([](const FlatPoint& u) { return intersection_form(u); }, t, 0, h);
    CHECK((dg1 - flat_pairing_inverse()).cwiseAbs().maxCoeff() < 1e-7);
    const Tensor3 G = christoffel(t);
    for (int k = 0; k < 3; ++k) {
        const Mat3 dg = dmat([](const FlatPoint& u) { return intersection_form(u); }, t, k, h);
        CHECK((G[k] + G[k].transpose() - dg).cwiseAbs().maxCoeff() < 1e-7);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(G[k](i, 2)) < 1e-12);
        // Gamma does not depend on t1
        const Mat3 dG = dmat([k](const FlatPoint& u) { return christoffel(u)[k]; }, t, 0, h);
        CHECK(dG.cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("discriminant") {
    const ModuliPoint p0(cplx(0.2, 0.3), cplx(0.9, 0.2), cplx(0.1, 1.1));
    const cplx e1 = half_periods(p0.tau()).e1;
    const ModuliPoint p(-p0.s2() * p0.s2() * e1, p0.s2(), p0.tau());
    CHECK(std::abs(discriminant(p.flat())) < 1e-10);

    oracle::Rng rng(8);
    double worst = 0;
    std::vector<cplx> ratios;
    for (int i = 0; i < 50; ++i) {
        const ModuliPoint q = random_point(rng);
        const FlatPoint t = q.flat();
        const Triple u = canonical_coordinates(q);
        worst = std::max(worst, oracle::rel(euler_multiplication_det(t), u[0] * u[1] * u[2]));
        if (i < 10) ratios.push_back(intersection_form(t).determinant() / (u[0] * u[1] * u[2]));
    }
    CHECK(worst < 1e-8);
    for (const cplx r : ratios) CHECK(oracle::rel(r, ratios[0]) < 1e-6);
    CHECK(std::abs(ratios[0]) > 1e-3);
}

TEST_CASE("Lyashko-Looijenga inversion") {
    const ModuliPoint p(0.3, 1.2, cplx(0.1, 1.3));
    const Triple u = lyashko_looijenga(p);
    const ModuliPoint q = ll_inverse(u);
    CHECK(multiset_distance(lyashko_looijenga(q), u) < 1e-6);
    CHECK(std::abs(q.s1() - (u[0] + u[1] + u[2]) / 3.0) < 1e-12);
    for (const Triple& perm : {Triple{u[1], u[0], u[2]}, Triple{u[2], u[1], u[0]}, Triple{u[1], u[2], u[0]}})
        CHECK(multiset_distance(lyashko_looijenga(ll_inverse(perm)), u) < 1e-6);

    // u = (c, -c r, c (r - 1)) from a known forward evaluation with s1 = 0
    const ModuliPoint p0(0.0, cplx(0.8, 0.3), cplx(-0.3, 0.9));
    const Triple u0 = lyashko_looijenga(p0);
    const cplx c = u0[0], r = -u0[1] / c;
    CHECK(std::abs(u0[2] - c * (r - 1.0)) < 1e-10);
    const ModuliPoint q0 = ll_inverse({c, -c * r, c * (r - 1.0)});
    CHECK(multiset_distance(lyashko_looijenga(q0), u0) < 1e-6);
    const ModuliPoint rep = canonical_representative(p0);
    CHECK(std::abs(rep.tau().tau() - q0.tau().tau()) < 1e-6);
    CHECK(std::abs(rep.s2() - q0.s2()) < 1e-6);

    CHECK_THROWS_AS(ll_inverse({1.0, 1.0, 2.0}), DegenerateInput);
}
