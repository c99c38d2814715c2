#include <cmath>

#include "doctest.h"
#include "hardy/cayley.hpp"
#include "hardy/freqspace.hpp"
#include "hardy/sampling.hpp"

using hardy::cplx;
using namespace hardy::cayley;
using hardy::expfam::RationalComb;

TEST_CASE("Cayley map and inverse") {
    CHECK(cayley(0.0) == cplx{1.0, 0.0});
    CHECK(cayley_inverse(1.0) == cplx{0.0, 0.0});
    CHECK(std::abs(cayley(0.5) - 3.0) < 1e-15);
    CHECK_THROWS_AS(cayley(1.0), std::invalid_argument);
    CHECK_THROWS_AS(cayley_inverse(cplx{-0.1, 0}), std::invalid_argument);
    hardy::sampling::Rng rng(51);
    for (cplx z : hardy::sampling::random_halfplane_points(rng, 50)) {
        cplx l = cayley_inverse(z);
        CHECK(std::abs(l) < 1.0);
        CHECK(std::abs(cayley(l) - z) <= 1e-13 * std::abs(z));
    }
}

TEST_CASE("disc function derivatives match finite differences") {
    RationalComb F({{1.0, 0, 2.0}, {cplx{0.5, 1}, 2, cplx{1, 3}}});
    DiscFunction FD(F);
    const double h = 1e-4;
    for (cplx l : {cplx{0.1, 0.2}, cplx{-0.5, 0.3}, cplx{0.7, -0.1}}) {
        cplx d1 = (FD(l + h) - FD(l - h)) / (2 * h);
        cplx d2 = (FD(l + h) - 2.0 * FD(l) + FD(l - h)) / (h * h);
        CHECK(std::abs(FD.derivative(l) - d1) <= 1e-7 * std::abs(d1));
        CHECK(std::abs(FD.second_derivative(l) - d2) <= 1e-5 * std::abs(d2));
    }
}

TEST_CASE("disc norms of polynomials") {
    CHECK(disc_h2_norm([](cplx) { return cplx{1.0}; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(disc_h2_norm([](cplx l) { return 1.0 + l; }) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (int n = 1; n <= 6; ++n)
        CHECK(disc_h2_norm([n](cplx l) { return std::pow(l, n); }) == doctest::Approx(1.0).epsilon(1e-10));
    // 1/(1 - l/2) has coefficients 2^{-k}: norm^2 = 4/3
    CHECK(disc_h2_norm([](cplx l) { return 1.0 / (1.0 - 0.5 * l); }) == doctest::Approx(std::sqrt(4.0 / 3)).epsilon(1e-10));
}

TEST_CASE("norm equality") {
    auto r = norm_equality_check(RationalComb({{1.0, 0, 1.0}}));
    CHECK(r.lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(r.rhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.residual <= 1e-12);
    CHECK(norm_equality_check(RationalComb({{1.0, 0, 2.0}})).residual <= 1e-8);
    auto z = norm_equality_check(RationalComb{});
    CHECK((z.lhs == 0.0 && z.rhs == 0.0 && z.residual == 0.0));
    hardy::sampling::Rng rng(52);
    for (int s = 0; s < 20; ++s) {
        RationalComb F = hardy::expfam::laplace(hardy::sampling::random_exppoly(rng));
        CHECK(norm_equality_check(F).residual <= 1e-7);
    }
}

TEST_CASE("membership transfer") {
    hardy::sampling::Rng rng(53);
    for (int s = 0; s < 10; ++s) {
        RationalComb F = hardy::expfam::laplace(hardy::sampling::random_exppoly(rng));
        double q = quotient_membership_norm(F);
        CHECK(q * std::sqrt(2.0) == doctest::Approx(hardy::freq::h2_norm(F)).epsilon(1e-7));
        double s2 = second_order_membership_norm(F);
        CHECK(std::isfinite(s2));
        CHECK(s2 > 0.0);
    }
    CHECK(quotient_membership_norm(RationalComb{}) == 0.0);
}
