#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardy/expfamily.hpp"
#include "hardy/quadrature.hpp"

namespace hardy::kernel {

enum class Method { quadrature, closed_form, automatic };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

// K_n(z, w) = 1/((n-1)!)^2 int_0^1 int_0^1 (1-t)^{n-1} (1-s)^{n-1} / (z t + s conj(w)) ds dt,
// and K_0(z, w) = 1/(z + conj(w)).
struct KernelPoint {
    int n = 1;
    cplx z{1.0, 0.0};
    cplx w{1.0, 0.0};
    Method method = Method::automatic;
    quad::QuadConfig cfg{};
};

struct KernelValue {
    cplx value;
    Method method;       // the path actually taken
    double error = 0.0;  // quadrature estimate, or condition * eps for the closed form
    bool converged = true;
};

KernelValue kernel_eval(const KernelPoint& p);
namespace serial {
KernelValue kernel_eval(const KernelPoint& p);
}

inline constexpr int kMaxClosedForm = 8;

// Exact expansion K_n = sum c * z^alpha * conj(w)^{-1-alpha} * L, with L one of
// 1, log((conj(w)+z)/z), log((conj(w)+z)/conj(w)).
enum class LogFactor { none, log_z, log_w };
struct ClosedFormCoefficient {
    LogFactor factor;
    int alpha;
    std::int64_t num;
    std::int64_t den;
};
std::vector<ClosedFormCoefficient> closed_form_coefficients(int n);

struct ClosedFormValue {
    cplx value;
    // sum of |terms| / |value|; large values mean cancellation.
    double condition;
    // |z|/|w| outside [1e-8, 1e8]
    bool cancellation_warning;
};
ClosedFormValue kernel_closed_form(int n, cplx z, cplx w);
cplx kernel_eval_closed(int n, cplx z, cplx w);

// (1/2) theta / sin theta for |theta| < pi/2.
double i_theta(double theta);

// K_n(z, z) from the trigonometric double integral; inner polynomial integral exact.
double kernel_diagonal(int n, cplx z, const quad::QuadConfig& cfg = {});
double kernel_norm(int n, cplx z, const quad::QuadConfig& cfg = {});

struct NormBounds {
    double lower;
    double upper;
};
NormBounds norm_bounds(int n, cplx z);

Eigen::MatrixXcd gram_matrix(int n, std::span<const cplx> points, Method method = Method::automatic,
                             const quad::QuadConfig& cfg = {});
namespace serial {
Eigen::MatrixXcd gram_matrix(int n, std::span<const cplx> points, Method method = Method::automatic,
                             const quad::QuadConfig& cfg = {});
}
double min_eigenvalue(const Eigen::MatrixXcd& m);

// |(Lf)(w) - <f, g_{conj(w),n}>_(n)|, the inner product by time-side quadrature.
double reproduce_check(int n, const expfam::ExpPoly& f, cplx w, const quad::QuadConfig& cfg = {});

}  // namespace hardy::kernel
