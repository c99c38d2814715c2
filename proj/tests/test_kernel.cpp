#include <cmath>
#include <map>

#include "doctest.h"
#include "hardy/kernel.hpp"
#include "hardy/sampling.hpp"
#include "hardy/timespace.hpp"
#include "oracles.hpp"

using hardy::cplx;
using namespace hardy::kernel;

namespace {

// coefficient lookup as an exact fraction (num, den) reduced
std::map<std::pair<LogFactor, int>, std::pair<long, long>> coeffs(int n) {
    std::map<std::pair<LogFactor, int>, std::pair<long, long>> m;
    for (const auto& c : closed_form_coefficients(n)) m[{c.factor, c.alpha}] = {long(c.num), long(c.den)};
    return m;
}

bool frac_eq(std::pair<long, long> a, long p, long q) { return a.first * q == a.second * p; }

// K_n by iterated tanh-sinh on the defining double integral
cplx kernel_oracle(int n, cplx z, cplx w) {
    double f = std::tgamma(n);
    return oracle::square(
               [&](double t, double s) {
                   return std::pow(1 - t, n - 1) * std::pow(1 - s, n - 1) / (z * t + s * std::conj(w));
               },
               1e-12) /
           (f * f);
}

}  // namespace

TEST_CASE("closed-form coefficients for n = 1, 2, 3") {
    auto k1 = coeffs(1);
    CHECK(k1.size() == 2);
    CHECK(frac_eq(k1[{LogFactor::log_w, -1}], 1, 1));
    CHECK(frac_eq(k1[{LogFactor::log_z, 0}], 1, 1));

    auto k2 = coeffs(2);
    CHECK(k2.size() == 6);
    CHECK(frac_eq(k2[{LogFactor::none, -1}], -1, 6));
    CHECK(frac_eq(k2[{LogFactor::none, 0}], -1, 6));
    CHECK(frac_eq(k2[{LogFactor::log_w, -1}], 1, 2));
    CHECK(frac_eq(k2[{LogFactor::log_w, -2}], 1, 6));
    CHECK(frac_eq(k2[{LogFactor::log_z, 0}], 1, 2));
    CHECK(frac_eq(k2[{LogFactor::log_z, 1}], 1, 6));

    auto k3 = coeffs(3);
    CHECK(k3.size() == 10);
    CHECK(frac_eq(k3[{LogFactor::none, -1}], -9, 240));
    CHECK(frac_eq(k3[{LogFactor::none, -2}], -2, 240));
    CHECK(frac_eq(k3[{LogFactor::none, 0}], -9, 240));
    CHECK(frac_eq(k3[{LogFactor::none, 1}], -2, 240));
    CHECK(frac_eq(k3[{LogFactor::log_w, -1}], 10, 120));
    CHECK(frac_eq(k3[{LogFactor::log_w, -2}], 5, 120));
    CHECK(frac_eq(k3[{LogFactor::log_w, -3}], 1, 120));
    CHECK(frac_eq(k3[{LogFactor::log_z, 0}], 10, 120));
    CHECK(frac_eq(k3[{LogFactor::log_z, 1}], 5, 120));
    CHECK(frac_eq(k3[{LogFactor::log_z, 2}], 1, 120));

    CHECK_THROWS_AS(closed_form_coefficients(9), std::out_of_range);
}

TEST_CASE("closed-form coefficients are symmetric under z <-> conj(w)") {
    // K(z, b) = K(b, z): z^a b^{-1-a} Lz <-> z^{-1-a} b^a Lb
    for (int n = 1; n <= kMaxClosedForm; ++n) {
        auto m = coeffs(n);
        for (const auto& [key, v] : m) {
            LogFactor mirror = key.first == LogFactor::log_z   ? LogFactor::log_w
                               : key.first == LogFactor::log_w ? LogFactor::log_z
                                                               : LogFactor::none;
            auto it = m.find({mirror, -1 - key.second});
            REQUIRE(it != m.end());
            CHECK(frac_eq(it->second, v.first, v.second));
        }
    }
}

TEST_CASE("anchor values") {
    const double l2 = std::log(2.0);
    CHECK(std::abs(kernel_eval_closed(1, 1.0, 1.0) - 2 * l2) < 1e-15);
    CHECK(std::abs(kernel_eval_closed(2, 1.0, 1.0) - (4 * l2 - 1) / 3) < 1e-15);
    CHECK(std::abs(kernel_eval_closed(3, 1.0, 1.0) - (-11.0 / 120 + 4 * l2 / 15)) < 1e-15);
    CHECK(kernel_eval_closed(1, 2.0, 1.0).real() == doctest::Approx(0.9547712).epsilon(1e-7));
    // K1(2,1) = log(3/2) + (1/2) log 3
    CHECK(std::abs(kernel_eval_closed(1, 2.0, 1.0) - (std::log(1.5) + 0.5 * std::log(3.0))) < 1e-15);
    CHECK(std::abs(kernel_eval_closed(0, 1.0, 2.0) - 1.0 / 3.0) < 1e-16);

    KernelPoint p{1, 1.0, 1.0, Method::quadrature};
    auto q = kernel_eval(p);
    CHECK(q.method == Method::quadrature);
    CHECK(q.converged);
    CHECK(std::abs(q.value - 2 * l2) < 1e-9);
}

TEST_CASE("closed form, quadrature and oracle agree") {
    hardy::sampling::Rng rng(41);
    for (int n = 1; n <= kMaxClosedForm; ++n)
        for (int s = 0; s < 4; ++s) {
            auto pts = hardy::sampling::random_halfplane_points(rng, 2, 0.2, 5.0, 0.1);
            cplx z = pts[0], w = pts[1];
            cplx ref = kernel_oracle(n, z, w);
            auto c = kernel_closed_form(n, z, w);
            cplx q = kernel_eval({n, z, w, Method::quadrature}).value;
            double scale = std::abs(ref);
            CHECK(std::abs(c.value - ref) <= 1e-9 * scale + 1e-13 * c.condition * scale);
            // quadrature meets abs_tol 1e-10 or rel_tol 1e-9
            CHECK(std::abs(q - ref) <= 1e-8 * scale + 2e-10);
            cplx a = kernel_eval({n, z, w}).value;
            CHECK(std::abs(a - ref) <= 1e-8 * scale + 2e-10);
        }
}

TEST_CASE("closed form stays accurate for widely separated arguments") {
    for (int n = 1; n <= kMaxClosedForm; ++n)
        for (auto [z, w] : {std::pair<cplx, cplx>{1e-3, 1.0}, {1.0, 1e-3}, {cplx{0.01, 0.5}, cplx{3, -2}}}) {
            cplx ref = kernel_oracle(n, z, w);
            auto c = kernel_closed_form(n, z, w);
            CHECK(c.condition < 1e3);
            CHECK(std::abs(c.value - ref) <= 1e-9 * std::abs(ref));
        }
    CHECK(kernel_closed_form(2, 1e-9, 10.0).cancellation_warning);
}

TEST_CASE("Hermitian symmetry and conjugation") {
    hardy::sampling::Rng rng(42);
    for (int n = 0; n <= 6; ++n)
        for (int s = 0; s < 10; ++s) {
            auto pts = hardy::sampling::random_halfplane_points(rng, 2);
            cplx a = kernel_eval({n, pts[0], pts[1]}).value;
            cplx b = kernel_eval({n, pts[1], pts[0]}).value;
            CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a));
        }
}

TEST_CASE("method selection") {
    CHECK(kernel_eval({9, 1.0, 1.0}).method == Method::quadrature);
    CHECK(kernel_eval({3, 1.0, 2.0}).method == Method::closed_form);
    CHECK_THROWS_AS(kernel_eval({9, 1.0, 1.0, Method::closed_form}), std::out_of_range);
    CHECK_THROWS_AS(kernel_eval({1, cplx{-1, 0}, 1.0}), std::invalid_argument);
    CHECK(method_from_string("quadrature") == Method::quadrature);
    CHECK(std::string(to_string(Method::closed_form)) == "closed_form");
    CHECK_THROWS_AS(method_from_string("magic"), std::invalid_argument);
}

TEST_CASE("I(theta) against quadrature") {
    for (int k = 0; k < 50; ++k) {
        double theta = -1.5 + 3.0 * k / 49;
        cplx q = oracle::tanh_sinh(
            [&](double t) { return cplx{std::cos(theta) / (t * t + 1 + 2 * t * std::cos(2 * theta))}; }, 0.0, 1.0, 1e-14);
        CHECK(i_theta(theta) == doctest::Approx(q.real()).epsilon(1e-10));
        CHECK(i_theta(theta) == i_theta(-theta));
        CHECK(0.5 <= i_theta(theta));
        CHECK(i_theta(theta) <= hardy::pi / 4);
    }
    CHECK(i_theta(0.0) == 0.5);
    CHECK(i_theta(1e-4) == doctest::Approx(0.5 * 1e-4 / std::sin(1e-4)).epsilon(1e-15));
    CHECK_THROWS_AS(i_theta(hardy::pi / 2), std::domain_error);
}

TEST_CASE("diagonal: trig form, closed form and bounds") {
    hardy::sampling::Rng rng(43);
    for (int n = 1; n <= 5; ++n)
        for (cplx z : hardy::sampling::random_halfplane_points(rng, 20, 0.01, 100.0, 0.01)) {
            double d = kernel_diagonal(n, z);
            cplx c = kernel_eval_closed(n, z, z);
            CHECK(std::abs(c.imag()) <= 1e-12 * d);
            CHECK(d == doctest::Approx(c.real()).epsilon(1e-9));
            auto b = norm_bounds(n, z);
            double nm = kernel_norm(n, z);
            CHECK(b.lower <= nm * (1 + 1e-12));
            CHECK(nm <= b.upper * (1 + 1e-12));
        }
    // n = 1, z = r e^{i theta}: K1(z,z) = (2/r)(cos theta log(2 cos theta) + theta sin theta)
    cplx z = std::polar(2.0, 0.7);
    double k1 = (std::cos(0.7) * std::log(2 * std::cos(0.7)) + 0.7 * std::sin(0.7));
    CHECK(kernel_diagonal(1, z) == doctest::Approx(k1).epsilon(1e-10));
    CHECK(kernel_diagonal(0, z) == doctest::Approx(1 / (2 * z.real())).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_diagonal(2, std::polar(1.0, hardy::pi / 2 - 1e-5)), std::domain_error);
}

TEST_CASE("diagonal is ray invariant after scaling by |z|") {
    for (int n = 1; n <= 4; ++n)
        for (double th : {0.0, 0.4, -1.1}) {
            double base = kernel_diagonal(n, std::polar(1.0, th));
            for (double r : {1e-3, 0.5, 7.0, 1e4})
                CHECK(kernel_diagonal(n, std::polar(r, th)) * r == doctest::Approx(base).epsilon(1e-10));
        }
}

TEST_CASE("diagonal decreases with the order") {
    for (int n = 2; n <= 8; ++n)
        for (cplx z : {cplx{1, 0}, cplx{0.2, 3}, cplx{5, -1}})
            CHECK(kernel_diagonal(n, z) <= kernel_diagonal(n - 1, z) / double((n - 1) * (n - 1)));
}

TEST_CASE("Gram matrices") {
    hardy::sampling::Rng rng(44);
    auto pts = hardy::sampling::random_halfplane_points(rng, 8);
    for (int n = 0; n <= 4; ++n) {
        auto g = gram_matrix(n, pts);
        CHECK((g - g.adjoint()).norm() == 0.0);
        CHECK(min_eigenvalue(g) >= -1e-12 * g.norm());
        auto s = serial::gram_matrix(n, pts);
        CHECK((g - s).norm() == 0.0);
    }
    auto q = gram_matrix(2, pts, Method::quadrature);
    auto qs = serial::gram_matrix(2, pts, Method::quadrature);
    CHECK((q - qs).norm() == 0.0);
    std::vector<cplx> dup{cplx{1, 1}, cplx{2, 0}, cplx{1, 1}};
    auto d = gram_matrix(2, dup);
    CHECK(std::abs(min_eigenvalue(d)) <= 1e-12 * d.norm());
    CHECK_THROWS_AS(min_eigenvalue(Eigen::MatrixXcd(0, 0)), std::invalid_argument);
}

TEST_CASE("the kernel is the Laplace transform of g") {
    // L(g_{w,1})(1) at w = 1 is K1(1,1) = 2 log 2
    hardy::timespace::GFunction g(1.0, 1);
    auto r = hardy::quad::integrate_halfline(
        [&](double t) { return hardy::timespace::g_eval(g, t) * std::exp(-t); }, 1.0);
    CHECK(std::abs(r.value - 2 * std::log(2.0)) < 1e-8);
}

TEST_CASE("reproducing property") {
    using hardy::expfam::ExpPoly;
    CHECK(reproduce_check(1, ExpPoly::exponential(1.0), 1.0) < 1e-8);
    CHECK(reproduce_check(2, ExpPoly({{1.0, 0, 1.0}, {cplx{0, 1}, 1, 2.0}}), cplx{0.5, 1}) < 1e-8);
    hardy::sampling::Rng rng(45);
    for (int s = 0; s < 10; ++s) {
        ExpPoly f = hardy::sampling::random_exppoly(rng);
        for (int n = 1; n <= 3; ++n) {
            cplx w = hardy::sampling::random_halfplane_points(rng, 1, 0.3, 3.0)[0];
            double scale = std::abs(hardy::expfam::laplace(f)(w)) + 1e-3;
            CHECK(reproduce_check(n, f, w) <= 1e-7 * scale);
        }
    }
    CHECK(reproduce_check(2, ExpPoly{}, 1.0) == 0.0);
}
