#include "ellfrob/modular_forms.hpp"

#include "ellfrob/errors.hpp"

#include <cmath>
#include <string>

namespace ellfrob {

cplx e_of(cplx x) { return std::exp(kTwoPiI * x); }

void SeriesConfig::validate() const {
    if (max_terms < 8) throw std::invalid_argument("SeriesConfig: max_terms must be >= 8");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("SeriesConfig: tail_tol must be > 0");
    if (!(im_min > 0.0)) throw std::invalid_argument("SeriesConfig: im_min must be > 0");
}

HalfPlanePoint::HalfPlanePoint(cplx tau) : tau_(tau) {
    if (!(tau.imag() > 0.0))
        throw std::domain_error("HalfPlanePoint: Im(tau) must be positive");
}

std::int64_t divisor_sigma(int k, std::int64_t n) {
    if (k != 1 && k != 3 && k != 5) throw std::invalid_argument("divisor_sigma: k must be 1, 3 or 5");
    if (n < 1) throw std::invalid_argument("divisor_sigma: n must be positive");
    auto power = [&](std::int64_t d) {
        std::int64_t r = 1;
        for (int i = 0; i < k; ++i)
            if (__builtin_mul_overflow(r, d, &r)) throw Overflow("divisor_sigma(" + std::to_string(k) + ", " + std::to_string(n) + ")");
        return r;
    };
    std::int64_t s = 0;
    for (std::int64_t d = 1; d <= n / d; ++d) {
        if (n % d != 0) continue;
        if (__builtin_add_overflow(s, power(d), &s)) throw Overflow("divisor_sigma");
        std::int64_t e = n / d;
        if (e != d && __builtin_add_overflow(s, power(e), &s)) throw Overflow("divisor_sigma");
    }
    return s;
}

namespace {

double sigma_real(int k, long n) {
    double s = 0.0;
    for (long d = 1; d <= n / d; ++d) {
        if (n % d != 0) continue;
        s += std::pow(static_cast<double>(d), k);
        long e = n / d;
        if (e != d) s += std::pow(static_cast<double>(e), k);
    }
    return s;
}

void check_domain(HalfPlanePoint tau, const SeriesConfig& cfg) {
    cfg.validate();
    if (tau.tau().imag() < cfg.im_min)
        throw std::domain_error("Im(tau) = " + std::to_string(tau.tau().imag()) +
                                " is below im_min = " + std::to_string(cfg.im_min));
}

double coefficient(int weight) {
    switch (weight) {
    case 2: return -24.0;
    case 4: return 240.0;
    case 6: return -504.0;
    default: throw std::invalid_argument("eisenstein: weight must be 2, 4 or 6");
    }
}

// c * sum sigma_{w-1}(n) n^order q^n, plus 1 when order == 0
cplx q_series(int weight, int order, HalfPlanePoint tau, const SeriesConfig& cfg) {
    const double c = coefficient(weight);
    check_domain(tau, cfg);
    const cplx q = tau.nome();
    cplx sum = order == 0 ? cplx(1.0) : cplx(0.0);
    cplx qn = 1.0;
    int small = 0;
    for (long n = 1; n <= cfg.max_terms; ++n) {
        qn *= q;
        cplx term = c * sigma_real(weight - 1, n) * std::pow(static_cast<double>(n), order) * qn;
        sum += term;
        if (std::abs(term) <= cfg.tail_tol * std::abs(sum)) {
            if (++small == 2) return sum;
        } else {
            small = 0;
        }
    }
    throw NonConvergence("Eisenstein series of weight " + std::to_string(weight) +
                         " did not converge within max_terms");
}

} // namespace

cplx eisenstein(int weight, HalfPlanePoint tau, const SeriesConfig& cfg) {
    return q_series(weight, 0, tau, cfg);
}

DerivativeValue eisenstein_derivative(int weight, int order, HalfPlanePoint tau,
                                      const SeriesConfig& cfg) {
    coefficient(weight);
    if (order < 0 || order > 3 || (order == 3 && weight != 2))
        throw UnsupportedOrder("order " + std::to_string(order) + " for weight " + std::to_string(weight));
    DerivativeValue out;
    out.series = q_series(weight, order, tau, cfg);

    const cplx e2 = eisenstein(2, tau, cfg), e4 = eisenstein(4, tau, cfg), e6 = eisenstein(6, tau, cfg);
    const cplx de2 = (e2 * e2 - e4) / 12.0;
    const cplx de4 = (e2 * e4 - e6) / 3.0;
    const cplx de6 = (e2 * e6 - e4 * e4) / 2.0;
    const cplx d2e2 = (2.0 * e2 * de2 - de4) / 12.0;
    const cplx d2e4 = (de2 * e4 + e2 * de4 - de6) / 3.0;
    const cplx d2e6 = (de2 * e6 + e2 * de6 - 2.0 * e4 * de4) / 2.0;
    const cplx d3e2 = (2.0 * de2 * de2 + 2.0 * e2 * d2e2 - d2e4) / 12.0;

    const cplx table[3][4] = {{e2, de2, d2e2, d3e2}, {e4, de4, d2e4, 0.0}, {e6, de6, d2e6, 0.0}};
    out.ring = table[weight / 2 - 1][order];
    return out;
}

cplx eisenstein_tau_derivative(int weight, int order, HalfPlanePoint tau, const SeriesConfig& cfg) {
    if (order < 0 || order > 3 || (order == 3 && weight != 2))
        throw UnsupportedOrder("order " + std::to_string(order) + " for weight " + std::to_string(weight));
    return q_series(weight, order, tau, cfg);
}

cplx dedekind_eta(HalfPlanePoint tau, const SeriesConfig& cfg) {
    check_domain(tau, cfg);
    const cplx q = tau.nome();
    cplx prod = 1.0, qn = 1.0;
    int small = 0;
    for (int n = 1; n <= cfg.max_terms; ++n) {
        qn *= q;
        prod *= 1.0 - qn;
        if (std::abs(qn) <= cfg.tail_tol * std::abs(prod)) {
            if (++small == 2) return e_of(tau.tau() / 24.0) * prod;
        } else {
            small = 0;
        }
    }
    throw NonConvergence("eta product did not converge within max_terms");
}

ModularReduction reduce_modular(cplx tau) {
    if (!(tau.imag() > 0.0)) throw std::domain_error("reduce_modular: Im(tau) must be positive");
    ModularReduction r;
    r.tau = tau;
    for (int iter = 0; iter < 10000; ++iter) {
        const long k = std::lround(r.tau.real());
        if (k != 0) {
            r.tau -= static_cast<double>(k);
            r.a -= k * r.c;
            r.b -= k * r.d;
        }
        if (std::norm(r.tau) < 1.0 - 1e-14) {
            r.tau = -1.0 / r.tau;
            const long a = r.a, b = r.b;
            r.a = -r.c;
            r.b = -r.d;
            r.c = a;
            r.d = b;
        } else {
            return r;
        }
    }
    throw NonConvergence("reduce_modular did not terminate");
}

EisensteinJet eisenstein_jet(HalfPlanePoint tau, const SeriesConfig& cfg) {
    EisensteinJet j;
    j.e2 = q_series(2, 0, tau, cfg);
    j.e4 = q_series(4, 0, tau, cfg);
    j.e6 = q_series(6, 0, tau, cfg);
    j.de2 = q_series(2, 1, tau, cfg);
    j.d2e2 = q_series(2, 2, tau, cfg);
    j.d3e2 = q_series(2, 3, tau, cfg);
    return j;
}

} // namespace ellfrob
