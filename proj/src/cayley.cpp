#include "hardy/cayley.hpp"

#include <cmath>

#include "hardy/expfamily.hpp"

namespace hardy::cayley {

namespace {

void require_disc(cplx lambda, const char* what) {
    if (!(std::abs(lambda) < 1.0)) throw std::invalid_argument(std::string(what) + ": point must lie in the open unit disc");
}

constexpr double kStep = 1e-6;
constexpr int kMinNodes = 16;
constexpr int kMaxNodes = 1 << 22;
// fixed rotation keeps nodes nested under doubling and away from lambda = 1
constexpr double kPhase = 0.1234;

struct CircleMean {
    double mean;
    int nodes;
    bool converged;
};

CircleMean circle_mean(const std::function<cplx(cplx)>& g, double r, const quad::QuadConfig& cfg) {
    auto sample = [&](int k, int n) { return std::norm(g(std::polar(r, kPhase + 2 * pi * k / n))); };
    int n = kMinNodes;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += sample(k, n);
    double prev = sum / n;
    while (n < kMaxNodes) {
        // the new nodes are the odd indices of the doubled grid
        for (int k = 1; k < 2 * n; k += 2) sum += sample(k, 2 * n);
        n *= 2;
        double cur = sum / n;
        if (!std::isfinite(cur)) throw NumericalError("disc_h2_norm: non-finite circle mean");
        // trapezoid errors decay geometrically, so a small step means the new value is far better
        if (std::abs(cur - prev) <= 0.1 * (cfg.rel_tol * std::abs(cur) + cfg.abs_tol * cfg.abs_tol)) return {cur, n, true};
        prev = cur;
    }
    return {prev, n, false};
}

}  // namespace

cplx cayley(cplx lambda) {
    require_disc(lambda, "cayley");
    return (1.0 + lambda) / (1.0 - lambda);
}

cplx cayley_inverse(cplx z) {
    require_right_half_plane(z, "cayley_inverse");
    return (z - 1.0) / (z + 1.0);
}

DiscFunction::DiscFunction(expfam::RationalComb F)
    : F_(std::move(F)), dF_(expfam::derivative(F_)), d2F_(expfam::derivative(F_, 2)) {}

cplx DiscFunction::operator()(cplx lambda) const { return F_(cayley(lambda)); }

cplx DiscFunction::derivative(cplx lambda) const {
    cplx u = 1.0 - lambda;
    return dF_(cayley(lambda)) * 2.0 / (u * u);
}

cplx DiscFunction::second_derivative(cplx lambda) const {
    cplx u = 1.0 - lambda, z = cayley(lambda);
    return d2F_(z) * 4.0 / (u * u * u * u) + dF_(z) * 4.0 / (u * u * u);
}

DiscNorm disc_h2_norm_report(const std::function<cplx(cplx)>& g, const quad::QuadConfig& cfg) {
    CircleMean m1 = circle_mean(g, 1.0 - kStep, cfg);
    CircleMean m2 = circle_mean(g, 1.0 - 2 * kStep, cfg);
    CircleMean m3 = circle_mean(g, 1.0 - 3 * kStep, cfg);
    // quadratic through (1-h, m1), (1-2h, m2), (1-3h, m3) evaluated at r = 1
    double limit = 3 * m1.mean - 3 * m2.mean + m3.mean;
    return {std::sqrt(std::max(0.0, limit)), m1.nodes, m1.converged && m2.converged && m3.converged};
}

double disc_h2_norm(const std::function<cplx(cplx)>& g, const quad::QuadConfig& cfg) {
    DiscNorm r = disc_h2_norm_report(g, cfg);
    if (!r.converged) throw NumericalError("disc_h2_norm: circle quadrature did not converge");
    return r.norm;
}

NormEquality norm_equality_check(const expfam::RationalComb& F, const quad::QuadConfig& cfg) {
    if (F.is_zero()) return {};
    const DiscFunction FD(F);
    NormEquality r;
    r.lhs = std::sqrt(2.0) * expfam::norm_n(expfam::inverse_laplace(F), 1);
    r.rhs = disc_h2_norm([&](cplx l) { return (1.0 + l) * FD.derivative(l); }, cfg);
    r.residual = std::abs(r.lhs - r.rhs) / std::max(r.lhs, 1e-300);
    return r;
}

double quotient_membership_norm(const expfam::RationalComb& F, const quad::QuadConfig& cfg) {
    if (F.is_zero()) return 0.0;
    const DiscFunction FD(F);
    return disc_h2_norm([&](cplx l) { return FD(l) / (1.0 - l); }, cfg);
}

double second_order_membership_norm(const expfam::RationalComb& F, const quad::QuadConfig& cfg) {
    if (F.is_zero()) return 0.0;
    const DiscFunction FD(F);
    return disc_h2_norm([&](cplx l) { return (1.0 + l) * (1.0 + l) * (1.0 - l) * FD.second_derivative(l); }, cfg);
}

}  // namespace hardy::cayley
