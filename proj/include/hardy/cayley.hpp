#pragma once

#include <functional>

#include "hardy/expfamily.hpp"
#include "hardy/quadrature.hpp"

namespace hardy::cayley {

// gamma(lambda) = (1+lambda)/(1-lambda), unit disc onto the right half-plane.
cplx cayley(cplx lambda);
cplx cayley_inverse(cplx z);

// F_D(lambda) = F(gamma(lambda)) for F in the rational class on the half-plane.
class DiscFunction {
public:
    explicit DiscFunction(expfam::RationalComb F);
    const expfam::RationalComb& underlying() const { return F_; }
    cplx operator()(cplx lambda) const;
    // F'(gamma) * 2/(1-lambda)^2
    cplx derivative(cplx lambda) const;
    // F''(gamma) * 4/(1-lambda)^4 + F'(gamma) * 4/(1-lambda)^3
    cplx second_derivative(cplx lambda) const;

private:
    expfam::RationalComb F_;
    expfam::RationalComb dF_;
    expfam::RationalComb d2F_;
};

// sup_r (1/2pi int |g(r e^{i theta})|^2 d theta)^{1/2}. The circle mean of |g|^2 grows with r,
// so the sup is the r -> 1 limit: trapezoid means at r = 1-h, 1-2h, 1-3h (h = 1e-6), each
// doubled until stable, then extrapolated quadratically to r = 1.
struct DiscNorm {
    double norm = 0.0;
    int nodes = 0;  // trapezoid nodes on the finest circle
    bool converged = true;
};
DiscNorm disc_h2_norm_report(const std::function<cplx(cplx)>& g, const quad::QuadConfig& cfg = {});
double disc_h2_norm(const std::function<cplx(cplx)>& g, const quad::QuadConfig& cfg = {});

// sqrt(2) ||F||_(1) against ||(1+lambda) F_D'||_{2,D}; residual relative to lhs.
struct NormEquality {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};
NormEquality norm_equality_check(const expfam::RationalComb& F, const quad::QuadConfig& cfg = {});

// ||F_D/(1-lambda)||_{2,D}; finite exactly when F is in H2, and equal to ||F||_2 / sqrt(2).
double quotient_membership_norm(const expfam::RationalComb& F, const quad::QuadConfig& cfg = {});
// ||(1+lambda)^2 (1-lambda) F_D''||_{2,D}; finite for F in H2^(2).
double second_order_membership_norm(const expfam::RationalComb& F, const quad::QuadConfig& cfg = {});

}  // namespace hardy::cayley
