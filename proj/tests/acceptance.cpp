// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hardy/cayley.hpp"
#include "hardy/expfamily.hpp"
#include "hardy/freqspace.hpp"
#include "hardy/kernel.hpp"
#include "hardy/sampling.hpp"
#include "hardy/special.hpp"
#include "hardy/symbols.hpp"
#include "hardy/timespace.hpp"
#include "oracles.hpp"

using namespace hardy;
using expfam::ExpPoly;
using sampling::Rng;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// The seeded sample set shared by the isometry and inner-product criteria.
std::vector<ExpPoly> exppoly_samples() {
    Rng rng(1001);
    std::vector<ExpPoly> v;
    for (int s = 0; s < 100; ++s) v.push_back(sampling::random_exppoly(rng));
    return v;
}

Outcome paley_wiener() {
    double worst = 0.0;
    for (const auto& f : exppoly_samples())
        for (int n = 0; n <= 4; ++n) {
            auto r = freq::hn_norm(expfam::laplace(f), n);
            worst = std::max(worst, std::abs(r.norm_time - r.norm_boundary) / r.norm_time);
        }
    const double e1 = expfam::norm_n(ExpPoly::exponential(1.0), 1);
    return {worst <= 1e-6 && e1 == 0.5, fmt("max rel residual %.3g, ||e1||_(1) = %.17g", worst, e1)};
}

Outcome inner_product() {
    const auto fs = exppoly_samples();
    double worst = 0.0;
    for (std::size_t s = 0; s + 1 < fs.size(); s += 2)
        for (const auto* pair : {&fs[s], &fs[s + 1]}) {
            const ExpPoly& f = *pair;
            const ExpPoly& g = pair == &fs[s] ? fs[s + 1] : fs[s];
            for (int n = 0; n <= 4; ++n) {
                cplx lhs = expfam::inner_product_n(f, g, n);
                cplx rhs = expfam::l2_inner_product(expfam::derivative(f.times_power(n), n),
                                                    expfam::derivative(g.times_power(n), n));
                worst = std::max(worst, std::abs(lhs - rhs) / (expfam::norm_n(f, n) * expfam::norm_n(g, n)));
            }
        }
    const ExpPoly e1 = ExpPoly::exponential(1.0);
    const cplx anchor = expfam::inner_product_n(e1, e1, 1);
    return {worst <= 1e-9 && std::abs(anchor - 0.25) <= 1e-16,
            fmt("max rel residual %.3g, <e1,e1>_(1) = %.17g", worst, anchor.real())};
}

Outcome reproducing() {
    Rng rng(1003);
    std::vector<ExpPoly> fs;
    for (int s = 0; s < 10; ++s) fs.push_back(sampling::random_exppoly(rng));
    const auto ws = sampling::random_halfplane_points(rng, 20, 0.2, 5.0);
    double worst = 0.0;
    for (const auto& f : fs)
        for (cplx w : ws)
            for (int n = 1; n <= 4; ++n)
                worst = std::max(worst, kernel::reproduce_check(n, f, w) / (1 + std::abs(expfam::laplace(f)(w))));
    return {worst <= 1e-6, fmt("max scaled residual %.3g over 800 cases", worst)};
}

Outcome closed_vs_quadrature() {
    quad::QuadConfig tight;
    tight.abs_tol = 1e-300;  // relative control only
    tight.rel_tol = 1e-10;
    double worst = 0.0;
    const double third = pi / 3;
    for (int n = 1; n <= 3; ++n)
        for (double rz : {0.01, 1.0, 100.0})
            for (double rw : {0.01, 1.0, 100.0})
                for (double aw : {third, -third}) {
                    cplx z = std::polar(rz, third), w = std::polar(rw, aw);
                    cplx c = kernel::kernel_eval_closed(n, z, w);
                    auto q = kernel::kernel_eval({n, z, w, kernel::Method::quadrature, tight});
                    worst = std::max(worst, std::abs(c - q.value) / std::abs(c));
                }
    const double l2 = std::log(2.0);
    const double a1 = std::abs(kernel::kernel_eval_closed(1, 1.0, 1.0) - 2 * l2);
    const double a2 = std::abs(kernel::kernel_eval_closed(2, 1.0, 1.0) - (4 * l2 - 1) / 3);
    return {worst <= 1e-7 && a1 <= 1e-15 && a2 <= 1e-15,
            fmt("max rel disagreement %.3g, anchor errors %.2g, %.2g", worst, a1, a2)};
}

Outcome norm_bounds() {
    bool strict = true;
    double min_gap = INFINITY, worst_ray = 0.0;
    for (int n = 1; n <= 5; ++n)
        for (int it = 0; it < 9; ++it) {
            const double th = -(pi / 2 - 0.05) + it * (pi - 0.1) / 8;
            const double base = kernel::kernel_diagonal(n, std::polar(1.0, th));
            for (int ir = 0; ir < 13; ++ir) {
                const double r = std::pow(10.0, -3.0 + ir * 0.5);
                const cplx z = std::polar(r, th);
                const double d = kernel::kernel_diagonal(n, z);
                const double scaled = std::sqrt(r * d);
                const double lo = 1 / (std::tgamma(n) * std::sqrt(2.0 * n - 1));
                const double hi = std::sqrt(pi) / (std::tgamma(n) * std::sqrt(double(n)));
                strict = strict && lo < scaled && scaled < hi;
                min_gap = std::min({min_gap, scaled - lo, hi - scaled});
                // the library's own bounds must be the same sandwich
                auto b = kernel::norm_bounds(n, z);
                strict = strict && std::abs(b.lower * std::sqrt(r) - lo) <= 1e-14 * lo &&
                         std::abs(b.upper * std::sqrt(r) - hi) <= 1e-14 * hi;
                worst_ray = std::max(worst_ray, std::abs(r * d - base) / base);
            }
        }
    return {strict && worst_ray <= 1e-6, fmt("min margin %.3g, max ray deviation %.3g", min_gap, worst_ray)};
}

Outcome i_theta() {
    double worst = 0.0;
    bool range = true;
    for (int k = 0; k < 50; ++k) {
        const double th = -1.5 + 3.0 * k / 49;
        const double q = oracle::tanh_sinh(
                             [&](double t) { return cplx{std::cos(th) / (t * t + 1 + 2 * t * std::cos(2 * th))}; }, 0.0,
                             1.0, 1e-14)
                             .real();
        const double v = kernel::i_theta(th);
        worst = std::max(worst, std::abs(v - q) / q);
        range = range && 0.5 <= v && v <= pi / 4;
    }
    const bool zero = kernel::i_theta(0.0) == 0.5;
    return {worst <= 1e-10 && range && zero, fmt("max rel error %.3g, I(0) = %.17g", worst, kernel::i_theta(0.0))};
}

Outcome cn_algebra() {
    bool ok = true;
    for (int n = 0; n <= 12; ++n)
        ok = ok && special::multiply(special::cn_matrix(n), special::cn_inverse(n)) == special::IntMatrix::identity(n + 1);
    const std::vector<std::int64_t> want{1, 2, 7, 34, 209, 1546};
    const bool sums = special::cn_matrix(5).row_sums() == want;
    return {ok && sums, std::string("identity for n <= 12: ") + (ok ? "yes" : "no") + ", row sums " +
                            (sums ? "1,2,7,34,209,1546" : "mismatch")};
}

std::string random_rational_text(Rng& rng) {
    std::uniform_real_distribution<double> u(0.3, 2.0);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f*z + %.6f + (%.6f+%.6fi)/(z + %.6f)^%d", u(rng), u(rng), u(rng), u(rng), u(rng),
                  1 + int(u(rng) * 2));
    return buf;
}

Outcome faa_di_bruno() {
    Rng rng(1008);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        auto f = symbols::parse(random_rational_text(rng)), phi = symbols::parse(random_rational_text(rng));
        const cplx z = sampling::random_halfplane_points(rng, 1, 0.5, 3.0)[0];
        for (int n = 1; n <= 6; ++n) {
            auto pj = symbols::eval_jet(phi, z, n);
            auto fj = f.root().jet(pj.value(), n);
            const cplx a = symbols::faa_di_bruno(fj, pj, n), b = symbols::compose(fj, pj).derivative(n);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
    }
    bool constraints = true;
    for (int n = 1; n <= 6; ++n)
        for (const auto& t : special::bell_partitions(n).terms) {
            int weight = 0, count = 0;
            for (int j = 1; j <= n; ++j) {
                weight += j * t.multiplicity[j - 1];
                count += t.multiplicity[j - 1];
            }
            constraints = constraints && weight == n && count == t.k;
        }
    return {worst <= 1e-9 && constraints,
            fmt("max rel disagreement %.3g", worst) + (constraints ? ", partition constraints exact" : ", constraint violated")};
}

Outcome cayley_norm() {
    auto F = expfam::laplace(ExpPoly::exponential(1.0));  // 1/(z+1)
    auto e = cayley::norm_equality_check(F);
    const double s = 1 / std::sqrt(2.0);
    const bool anchor = std::abs(e.lhs - s) <= 1e-12 && std::abs(e.rhs - s) <= 1e-12 && e.residual <= 1e-12;
    Rng rng(1009);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k)
        worst = std::max(worst, cayley::norm_equality_check(expfam::laplace(sampling::random_exppoly(rng))).residual);
    return {anchor && worst <= 1e-7, fmt("1/(z+1): residual %.3g; random max residual %.3g", e.residual, worst)};
}

Outcome gram_psd() {
    Rng rng(1010);
    double worst = INFINITY;
    for (int s = 0; s < 20; ++s) {
        const auto pts = sampling::random_halfplane_points(rng, 8);
        for (int n = 0; n <= 3; ++n) worst = std::min(worst, kernel::min_eigenvalue(kernel::gram_matrix(n, pts)));
    }
    return {worst >= -1e-8, fmt("smallest eigenvalue %.3g", worst)};
}

Outcome jury() {
    Rng rng(1011);
    double worst_ok = INFINITY, worst_bad = -INFINITY;
    for (double a : {0.5, 1.0, 4.0})
        for (const char* b : {"1", "1+0.5i", "0.2-3i"}) {
            auto mu = symbols::parse(std::to_string(a) + "*z + (" + b + ")");
            for (int s = 0; s < 5; ++s)
                worst_ok = std::min(worst_ok, symbols::jury_min_eig(mu, 0, 1 / std::sqrt(a),
                                                                   sampling::random_halfplane_points(rng, 6, 1e-2, 1e2)));
            worst_bad = std::max(worst_bad, symbols::jury_witness_search(mu, 0, 0.9 / std::sqrt(a), 11).min_eig);
        }
    return {worst_ok >= -1e-8 && worst_bad < 0.0,
            fmt("M = 1/sqrt(a): min eig %.3g; M = 0.9/sqrt(a): largest witness eig %.3g", worst_ok, worst_bad)};
}

Outcome classification() {
    using symbols::VerdictH2;
    using symbols::VerdictHn;
    bool ok = true;
    for (int n = 0; n <= 4; ++n) {
        auto r = symbols::classify(symbols::parse("2*z+1"), n);
        ok = ok && r.verdict_H2 == VerdictH2::bounded && std::abs(r.phi_prime_infinity - 0.5) <= 1e-6 &&
             r.verdict_Hn == VerdictHn::sufficient_passed;
    }
    for (int n = 1; n <= 4; ++n) {
        auto r = symbols::classify(symbols::parse("z+i"), n);
        ok = ok && r.verdict_H2 == VerdictH2::bounded && std::isinf(r.radial_sup) &&
             r.verdict_Hn == VerdictHn::necessary_failed;
    }
    auto q = symbols::classify(symbols::parse("z+sqrt(z)+1"), 2);
    ok = ok && std::abs(q.phi_prime_infinity - 1.0) <= 1e-6 && q.verdict_Hn == VerdictHn::sufficient_passed;
    ok = ok && symbols::classify(symbols::parse("z+log1p(z)"), 2).verdict_Hn == VerdictHn::sufficient_passed;
    ok = ok && symbols::classify(symbols::parse("sqrt(z)"), 1).verdict_H2 == VerdictH2::unbounded;
    ok = ok && symbols::classify(symbols::parse("1/(z+1)"), 1).verdict_H2 == VerdictH2::unbounded;
    return {ok, "2z+1, z+i, z+sqrt(z)+1, z+log1p(z), sqrt(z), 1/(z+1)"};
}

Outcome hardy_and_point() {
    Rng rng(1013);
    double min_hardy = INFINITY, min_point = INFINITY;
    for (int s = 0; s < 20; ++s) {
        const ExpPoly f = sampling::random_positive_exppoly(rng);
        for (int m = 1; m <= 4; ++m) min_hardy = std::min(min_hardy, timespace::hardy_inequality(f, m).margin());
        const auto F = expfam::laplace(sampling::random_exppoly(rng));
        for (int n = 1; n <= 4; ++n)
            for (cplx z : sampling::random_halfplane_points(rng, 5, 1e-2, 1e2))
                min_point = std::min(min_point, freq::point_bound_check(F, n, z));
    }
    return {min_hardy >= 0.0 && min_point >= 0.0,
            fmt("min Hardy margin %.3g, min point-bound margin %.3g", min_hardy, min_point)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Paley-Wiener isometry", paley_wiener},
        {"inner-product identity", inner_product},
        {"kernel reproducing property", reproducing},
        {"kernel closed form vs quadrature", closed_vs_quadrature},
        {"kernel norm bounds", norm_bounds},
        {"I(theta)", i_theta},
        {"C_n algebra", cn_algebra},
        {"Faa di Bruno", faa_di_bruno},
        {"Cayley norm equality", cayley_norm},
        {"Gram PSD", gram_psd},
        {"Jury certificate", jury},
        {"symbol classification", classification},
        {"Hardy inequality and point bound", hardy_and_point},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
