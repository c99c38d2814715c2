#pragma once

#include <functional>

#include "hardy/expfamily.hpp"
#include "hardy/quadrature.hpp"

namespace hardy::timespace {

// W^{-n} f, the n-fold integral from t to infinity, kept inside the algebra:
// int_t^inf s^k e^{-lambda s} ds = e^{-lambda t} sum_{i<=k} k!/i! t^i / lambda^{k-i+1}.
expfam::ExpPoly w_minus(const expfam::ExpPoly& f, int n);
cplx w_minus(const expfam::ExpPoly& f, int n, double t);
// 1/(n-1)! int_0^inf u^{n-1} f(t+u) du by half-line quadrature. Throws
// NumericalError when the quadrature does not converge (insufficient decay).
cplx w_minus(const std::function<cplx(double)>& f, int n, double t, double decay_scale,
             const quad::QuadConfig& cfg = {});

// Gamma(1/2)/Gamma(m+1/2); the squared value bounds int|W^{-m} phi|^2 by int|t^m phi|^2.
double hardy_constant(int m);

struct HardyCheck {
    double lhs;  // int_0^inf |W^{-m} phi|^2
    double rhs;  // hardy_constant(m)^2 int_0^inf |t^m phi|^2
    double margin() const { return rhs - lhs; }
};
HardyCheck hardy_inequality(const expfam::ExpPoly& phi, int m);

// E_n(a) = int_0^1 (1-x)^{n-1} e^{-a x} dx; series for |a| <= n+1, forward recurrence beyond.
cplx truncated_exponential_integral(int n, cplx a);

// The function g_{w,n} whose Laplace transform is the kernel K_{n,conj(w)}.
class GFunction {
public:
    GFunction(cplx w, int n);
    cplx w() const { return w_; }
    int n() const { return n_; }

private:
    cplx w_;
    int n_;
};

// Double-integral definition; outer integral over [t, inf) by quadrature.
cplx g_eval(const GFunction& g, double t, const quad::QuadConfig& cfg = {});
// t^n g^{(n)}(t) = (-1)^n E_n(w t)/(n-1)!
cplx g_weighted_derivative(const GFunction& g, double t);
double g_norm(const GFunction& g, const quad::QuadConfig& cfg = {});

// B(2(n-k)-1, 2k+1)^{1/2}/(n-k-1)!, from Cauchy-Schwarz on f^{(k)} = (-1)^{n-k} W^{-(n-k)} f^{(n)}.
double point_estimate_constant(int n, int k);

struct PointEstimate {
    double lhs;  // |f^{(k)}(t)|
    double rhs;  // C_{n,k} t^{-k-1/2} ||f||_(n)
    bool holds() const { return lhs <= rhs * (1 + 1e-12); }
};
PointEstimate point_estimate_check(const expfam::ExpPoly& f, int n, int k, double t);

}  // namespace hardy::timespace
