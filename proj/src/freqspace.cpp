#include "hardy/freqspace.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/special.hpp"

namespace hardy::freq {

using expfam::ExpPoly;
using expfam::RationalComb;

double h2_norm(const std::function<cplx(double)>& boundary, double scale, const quad::QuadConfig& cfg) {
    auto folded = [&](double t) { return cplx{std::norm(boundary(t)) + std::norm(boundary(-t))}; };
    auto r = quad::integrate_halfline(folded, std::max(scale, 1e-300), cfg);
    if (!r.converged) throw NumericalError("h2_norm: boundary integral did not converge");
    return std::sqrt(std::max(0.0, r.value.real()) / (2 * pi));
}

double h2_norm(const RationalComb& F, const quad::QuadConfig& cfg) {
    if (F.is_zero()) return 0.0;
    return h2_norm([&](double t) { return F(cplx{0.0, t}); }, F.frequency_scale(), cfg);
}

HnNormReport hn_norm(const RationalComb& F, int n, const quad::QuadConfig& cfg) {
    if (n < 0) throw std::invalid_argument("hn_norm: n must be nonnegative");
    HnNormReport rep;
    rep.n = n;
    if (F.is_zero()) return rep;
    const ExpPoly f = expfam::inverse_laplace(F);
    rep.norm_exact = expfam::norm_n(f, n);

    const RationalComb Fn = expfam::derivative(F, n);
    rep.norm_boundary = h2_norm(
        [&](double t) {
            cplx z{0.0, t};
            return std::pow(z, n) * Fn(z);
        },
        F.frequency_scale(), cfg);

    const ExpPoly fn = expfam::derivative(f, n);
    auto r = quad::integrate_halfline([&](double t) { return cplx{std::norm(std::pow(t, n) * fn(t))}; },
                                      f.decay_scale(), cfg);
    if (!r.converged) throw NumericalError("hn_norm: time-side integral did not converge");
    rep.norm_time = std::sqrt(std::max(0.0, r.value.real()));

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::max(a, b), 1e-300); };
    rep.max_pairwise_rel_err = std::max({rel(rep.norm_exact, rep.norm_boundary), rel(rep.norm_exact, rep.norm_time),
                                         rel(rep.norm_boundary, rep.norm_time)});
    return rep;
}

LaplaceIdentityResidual laplace_derivative_identity_check(const ExpPoly& f, int n, int k, cplx z) {
    if (k < 0 || k > n) throw std::invalid_argument("laplace_derivative_identity_check: need 0 <= k <= n");
    require_right_half_plane(z, "laplace_derivative_identity_check: z");
    const auto c = special::cn_matrix(k);
    const RationalComb F = expfam::laplace(f);

    // A_j = (-1)^j z^j F^{(j)},  B_j = L(t^j f^{(j)})
    auto A = [&](int j) {
        RationalComb a = expfam::derivative(F, j);
        for (int i = 0; i < j; ++i) a = a.times_z();
        return (j % 2 == 0) ? a : a * -1.0;
    };
    auto B = [&](int j) { return expfam::laplace(expfam::derivative(f, j).times_power(j)); };

    RationalComb fwd = A(k);
    for (int j = 0; j <= k; ++j) fwd = fwd - B(j) * double(c(k, j));

    // B_k = (-1)^k sum_j c_{kj} z^j F^{(j)} = (-1)^k sum_j c_{kj} (-1)^j A_j
    RationalComb inv = B(k);
    const double sk = (k % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j <= k; ++j) {
        double sj = (j % 2 == 0) ? 1.0 : -1.0;
        inv = inv - A(j) * (sk * sj * double(c(k, j)));
    }
    return {std::abs(fwd(z)), std::abs(inv(z))};
}

double paley_wiener_residual(const ExpPoly& f, int n, const quad::QuadConfig& cfg) {
    if (f.is_zero()) return 0.0;
    auto rep = hn_norm(expfam::laplace(f), n, cfg);
    if (rep.norm_time == 0.0) return rep.norm_boundary == 0.0 ? 0.0 : INFINITY;
    return std::abs(rep.norm_time - rep.norm_boundary) / rep.norm_time;
}

double point_bound_check(const RationalComb& F, int n, cplx z) {
    if (n < 1) throw std::invalid_argument("point_bound_check: n must be at least 1");
    require_right_half_plane(z, "point_bound_check: z");
    const double norm = expfam::norm_n(expfam::inverse_laplace(F), n);
    const double g = std::tgamma(n);
    return pi * norm * norm / (g * g * n * std::abs(z)) - std::norm(F(z));
}

}  // namespace hardy::freq
