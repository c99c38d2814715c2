#include "hardy/timespace.hpp"

#include <cmath>

namespace hardy::timespace {

using expfam::ExpPoly;
using expfam::Term;

namespace {

double factorial_d(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

ExpPoly w_minus_once(const ExpPoly& f) {
    std::vector<Term> out;
    for (const Term& x : f.terms()) {
        cplx lp = 1.0 / x.lambda;  // lambda^{-1}
        double kf = factorial_d(x.k);
        for (int i = 0; i <= x.k; ++i) {
            cplx c = x.a * (kf / factorial_d(i)) * std::pow(lp, x.k - i + 1);
            out.push_back({c, i, x.lambda});
        }
    }
    return ExpPoly(std::move(out));
}

}  // namespace

ExpPoly w_minus(const ExpPoly& f, int n) {
    if (n < 0) throw std::invalid_argument("w_minus: n must be nonnegative");
    ExpPoly r = f;
    for (int i = 0; i < n; ++i) r = w_minus_once(r);
    return r;
}

cplx w_minus(const ExpPoly& f, int n, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("w_minus: t must be nonnegative");
    return w_minus(f, n)(t);
}

cplx w_minus(const std::function<cplx(double)>& f, int n, double t, double decay_scale, const quad::QuadConfig& cfg) {
    if (n < 1) throw std::invalid_argument("w_minus: n must be at least 1");
    if (!(t >= 0.0)) throw std::invalid_argument("w_minus: t must be nonnegative");
    const double nf = factorial_d(n - 1);
    auto integrand = [&](double u) { return std::pow(u, n - 1) * f(t + u); };
    auto r = quad::integrate_halfline(integrand, decay_scale, cfg);
    if (!r.converged) throw NumericalError("w_minus: integral from t to infinity did not converge");
    return r.value / nf;
}

double hardy_constant(int m) {
    if (m < 1) throw std::invalid_argument("hardy_constant: m must be at least 1");
    return std::tgamma(0.5) / std::tgamma(m + 0.5);
}

HardyCheck hardy_inequality(const ExpPoly& phi, int m) {
    ExpPoly w = w_minus(phi, m);
    ExpPoly tm = phi.times_power(m);
    double c = hardy_constant(m);
    return {expfam::l2_inner_product(w, w).real(), c * c * expfam::l2_inner_product(tm, tm).real()};
}

cplx truncated_exponential_integral(int n, cplx a) {
    if (n < 1) throw std::invalid_argument("truncated_exponential_integral: n must be at least 1");
    if (std::abs(a) <= n + 1.0) {
        // (n-1)! sum_m (-a)^m/(n+m)!
        cplx term = 1.0 / double(n);  // (n-1)!/n!
        cplx sum = term;
        for (int m = 1; m < 200; ++m) {
            term *= -a / double(n + m);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    // E_1 = (1 - e^{-a})/a, E_j = (1 - (j-1) E_{j-1})/a; contracting when |a| > n
    cplx e = (1.0 - std::exp(-a)) / a;
    for (int j = 2; j <= n; ++j) e = (1.0 - double(j - 1) * e) / a;
    return e;
}

GFunction::GFunction(cplx w, int n) : w_(w), n_(n) {
    require_right_half_plane(w, "GFunction: w");
    if (n < 1) throw std::invalid_argument("GFunction: n must be at least 1");
}

cplx g_weighted_derivative(const GFunction& g, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("g_weighted_derivative: t must be positive");
    cplx e = truncated_exponential_integral(g.n(), g.w() * t) / factorial_d(g.n() - 1);
    return (g.n() % 2 == 0) ? e : -e;
}

cplx g_eval(const GFunction& g, double t, const quad::QuadConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("g_eval: t must be positive");
    const int n = g.n();
    const double norm = factorial_d(n - 1) * factorial_d(n - 1);
    // g(t) = int_0^inf u^{n-1}/(t+u)^n E_n(w(t+u)) du / ((n-1)!)^2
    auto integrand = [&](double u) {
        double s = t + u;
        return std::pow(u / s, n - 1) / s * truncated_exponential_integral(n, g.w() * s);
    };
    auto r = quad::integrate_halfline(integrand, t + 1.0 / std::abs(g.w()), cfg);
    if (!r.converged) throw NumericalError("g_eval: outer quadrature did not converge");
    return r.value / norm;
}

double g_norm(const GFunction& g, const quad::QuadConfig& cfg) {
    auto integrand = [&](double t) { return cplx{std::norm(g_weighted_derivative(g, t))}; };
    auto r = quad::integrate_halfline(integrand, 1.0 / std::abs(g.w()), cfg);
    if (!r.converged) throw NumericalError("g_norm: quadrature did not converge");
    return std::sqrt(r.value.real());
}

double point_estimate_constant(int n, int k) {
    if (n < 1 || k < 0 || k > n - 1) throw std::invalid_argument("point_estimate_constant: need 0 <= k <= n-1");
    const double a = 2.0 * (n - k) - 1.0, b = 2.0 * k + 1.0;
    const double beta = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return std::sqrt(beta) / factorial_d(n - k - 1);
}

PointEstimate point_estimate_check(const ExpPoly& f, int n, int k, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("point_estimate_check: t must be positive");
    double c = point_estimate_constant(n, k);
    double lhs = std::abs(expfam::derivative(f, k)(t));
    double rhs = c * std::pow(t, -k - 0.5) * expfam::norm_n(f, n);
    return {lhs, rhs};
}

}  // namespace hardy::timespace
