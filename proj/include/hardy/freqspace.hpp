#pragma once

#include <functional>

#include "hardy/expfamily.hpp"
#include "hardy/quadrature.hpp"

namespace hardy::freq {

// (1/2pi int_R |F(it)|^2 dt)^{1/2}, folding t and -t onto the half-line.
double h2_norm(const expfam::RationalComb& F, const quad::QuadConfig& cfg = {});
// `boundary(t)` returns F(it); `scale` is the frequency scale of F.
double h2_norm(const std::function<cplx(double)>& boundary, double scale, const quad::QuadConfig& cfg = {});

// ||F||_{2,(n)} = ||z^n F^{(n)}||_2 by three independent routes.
struct HnNormReport {
    int n = 0;
    double norm_exact = 0.0;     // closed-form inner product of the time-domain preimage
    double norm_boundary = 0.0;  // imaginary-axis quadrature of z^n F^{(n)}
    double norm_time = 0.0;      // half-line quadrature of t^n f^{(n)}
    double max_pairwise_rel_err = 0.0;
};
HnNormReport hn_norm(const expfam::RationalComb& F, int n, const quad::QuadConfig& cfg = {});

// Residuals of  (-1)^k z^k (Lf)^{(k)} = sum_j c_{kj} L(t^j f^{(j)})  and of its inverse
// L(t^k f^{(k)}) = (-1)^k sum_j c_{kj} z^j (Lf)^{(j)}, both sides built as RationalComb.
struct LaplaceIdentityResidual {
    double forward = 0.0;
    double inverse = 0.0;
    double max() const { return forward > inverse ? forward : inverse; }
};
LaplaceIdentityResidual laplace_derivative_identity_check(const expfam::ExpPoly& f, int n, int k, cplx z);

// |norm_time - norm_boundary| / norm_time; zero for the zero function.
double paley_wiener_residual(const expfam::ExpPoly& f, int n, const quad::QuadConfig& cfg = {});

// pi ||F||_(n)^2 / (Gamma(n)^2 n |z|) - |F(z)|^2, nonnegative when the point bound holds.
double point_bound_check(const expfam::RationalComb& F, int n, cplx z);

}  // namespace hardy::freq
