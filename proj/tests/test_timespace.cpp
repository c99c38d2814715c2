#include <cmath>

#include "doctest.h"
#include "hardy/sampling.hpp"
#include "hardy/timespace.hpp"
#include "oracles.hpp"

using hardy::cplx;
using hardy::expfam::ExpPoly;
using namespace hardy::timespace;

TEST_CASE("W^{-n} on exponentials") {
    auto e1 = ExpPoly::exponential(1.0);
    for (double t : {0.0, 0.3, 2.0})
        CHECK(std::abs(w_minus(e1, 1, t) - std::exp(-t)) < 1e-15);
    CHECK(std::abs(w_minus(e1, 2, 0.0) - 1.0) < 1e-15);
    // (W^{-2} f)' = -W^{-1} f, checked on the exact representation
    hardy::sampling::Rng rng(21);
    for (int s = 0; s < 10; ++s) {
        ExpPoly f = hardy::sampling::random_exppoly(rng);
        ExpPoly d = hardy::expfam::derivative(w_minus(f, 2)) + w_minus(f, 1);
        for (double t : {0.1, 1.0, 4.0}) CHECK(std::abs(d(t)) < 1e-12);
    }
}

TEST_CASE("(-1)^n (W^{-n} phi)^{(n)} = phi inside the algebra") {
    hardy::sampling::Rng rng(22);
    for (int s = 0; s < 20; ++s) {
        ExpPoly f = hardy::sampling::random_exppoly(rng);
        for (int n = 0; n <= 4; ++n) {
            ExpPoly back = hardy::expfam::derivative(w_minus(f, n), n) * ((n % 2 == 0) ? 1.0 : -1.0);
            ExpPoly diff = back - f;
            double worst = 0;
            for (const auto& term : diff.terms()) worst = std::max(worst, std::abs(term.a));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("W^{-n} for callables matches the exact algebra") {
    hardy::sampling::Rng rng(23);
    for (int s = 0; s < 5; ++s) {
        ExpPoly f = hardy::sampling::random_exppoly(rng);
        std::function<cplx(double)> fn = [&](double t) { return f(t); };
        for (int n = 1; n <= 3; ++n)
            for (double t : {0.0, 0.5, 3.0}) {
                cplx exact = w_minus(f, n, t);
                cplx num = w_minus(fn, n, t, f.decay_scale());
                CHECK(std::abs(num - exact) < 1e-9 * std::max(1.0, std::abs(exact)));
            }
    }
    // 1/t does not decay fast enough for a single integration
    std::function<cplx(double)> slow = [](double t) { return cplx{1.0 / (1.0 + t)}; };
    hardy::quad::QuadConfig cfg;
    cfg.max_subdiv = 200;
    CHECK_THROWS_AS(w_minus(slow, 1, 0.0, 1.0, cfg), hardy::NumericalError);
}

TEST_CASE("Hardy constants and inequality") {
    CHECK(hardy_constant(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(hardy_constant(2) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    auto h = hardy_inequality(ExpPoly::exponential(1.0), 1);
    CHECK(h.lhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h.rhs == doctest::Approx(1.0).epsilon(1e-15));
    hardy::sampling::Rng rng(24);
    for (int s = 0; s < 50; ++s) {
        ExpPoly phi = hardy::sampling::random_positive_exppoly(rng);
        for (int m = 1; m <= 3; ++m) {
            auto c = hardy_inequality(phi, m);
            CHECK(c.margin() >= 0.0);
            if (s < 5) {
                // both sides by quadrature of the exact functions
                ExpPoly w = w_minus(phi, m);
                double lq = oracle::exp_sinh([&](double t) { return cplx{std::norm(w(t))}; }).real();
                double rq = oracle::exp_sinh([&](double t) { return cplx{std::norm(std::pow(t, m) * phi(t))}; }).real();
                CHECK(lq == doctest::Approx(c.lhs).epsilon(1e-10));
                CHECK(hardy_constant(m) * hardy_constant(m) * rq == doctest::Approx(c.rhs).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("truncated exponential integral against quadrature") {
    for (int n = 1; n <= 10; ++n)
        for (cplx a : {cplx{0.0, 0.0}, cplx{1e-6, 0}, cplx{0.5, 0.2}, cplx{3.0, -4.0}, cplx{10.0, 0.0}, cplx{0.01, 40.0},
                       cplx{200.0, 5.0}}) {
            cplx ref = oracle::tanh_sinh([&](double x) { return std::pow(1 - x, n - 1) * std::exp(-a * x); }, 0, 1);
            CHECK(std::abs(truncated_exponential_integral(n, a) - ref) < 1e-13 * std::max(1.0, std::abs(ref)));
        }
}

TEST_CASE("g_{w,n} weighted derivative") {
    GFunction g(1.0, 1);
    CHECK(std::abs(g_weighted_derivative(g, 1.0) + (1 - std::exp(-1.0))) < 1e-15);
    // t g'(t) and t^2 g''(t) against centred differences of the double-integral definition
    const double t = 0.8;
    GFunction g1(cplx{1.5, 0.5}, 1);
    double h = 1e-4;
    cplx fd = (g_eval(g1, t + h) - g_eval(g1, t - h)) / (2 * h);
    CHECK(std::abs(t * fd - g_weighted_derivative(g1, t)) < 1e-6);
    GFunction g2(cplx{1.5, 0.5}, 2);
    h = 1e-3;
    cplx fd2 = (g_eval(g2, t + h) - 2.0 * g_eval(g2, t) + g_eval(g2, t - h)) / (h * h);
    CHECK(std::abs(t * t * fd2 - g_weighted_derivative(g2, t)) < 1e-4);
    CHECK_THROWS_AS(GFunction(cplx{0.0, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(GFunction(1.0, 0), std::invalid_argument);
}

TEST_CASE("g_{w,n} norm bound on a log-polar grid") {
    GFunction g11(1.0, 1);
    double n11 = g_norm(g11);
    CHECK(n11 <= 2 * std::log(2.0));
    // ||g_{1,1}||^2 = int (1-e^{-t})^2/t^2 dt = 2 ln 2
    CHECK(n11 * n11 == doctest::Approx(2 * std::log(2.0)).epsilon(1e-9));
    for (int n = 1; n <= 4; ++n)
        for (double r : {0.01, 1.0, 100.0})
            for (double th : {-1.2, 0.0, 0.7}) {
                cplx w = std::polar(r, th);
                double v = g_norm(GFunction(w, n)) * std::sqrt(w.real());
                CHECK(v <= 2 * std::log(2.0));
            }
}

TEST_CASE("point estimates") {
    auto e1 = ExpPoly::exponential(1.0);
    for (double t : {0.1, 1.0, 10.0}) CHECK(point_estimate_check(e1, 1, 0, t).holds());
    CHECK(point_estimate_check(ExpPoly::monomial(1.0, 1, 2.0), 2, 1, 0.5).holds());
    // n=1, k=0: C = B(1,1)^{1/2} = 1
    CHECK(point_estimate_constant(1, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(point_estimate_constant(2, 2), std::invalid_argument);
    // the bound scales exactly like t^{-k-1/2}
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < n; ++k) {
            auto a = point_estimate_check(e1, n, k, 1.0), b = point_estimate_check(e1, n, k, 100.0);
            double slope = std::log(b.rhs / a.rhs) / std::log(100.0);
            CHECK(slope == doctest::Approx(-k - 0.5).epsilon(1e-12));
        }
    hardy::sampling::Rng rng(25);
    for (int s = 0; s < 30; ++s) {
        ExpPoly f = hardy::sampling::random_exppoly(rng);
        for (int n = 1; n <= 4; ++n)
            for (int k = 0; k < n; ++k)
                for (double t : {0.01, 0.3, 1.0, 5.0, 40.0}) CHECK(point_estimate_check(f, n, k, t).holds());
    }
}
