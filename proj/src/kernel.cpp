#include "hardy/kernel.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <map>

#include "hardy/timespace.hpp"

namespace hardy::kernel {

const char* to_string(Method m) {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::closed_form: return "closed_form";
        case Method::automatic: return "auto";
    }
    return "auto";
}

Method method_from_string(const std::string& s) {
    if (s == "quadrature") return Method::quadrature;
    if (s == "closed_form" || s == "closed") return Method::closed_form;
    if (s == "auto" || s == "automatic") return Method::automatic;
    throw std::invalid_argument("unknown kernel method '" + s + "'");
}

namespace {

using Rational = boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

// Keys (factor, alpha) for the monomial z^alpha b^{-1-alpha}, b = conj(w).
using RawExpansion = std::map<std::pair<int, int>, Rational>;
constexpr int kNone = 0, kLogZ = 1, kLogB = 2, kRem = 3;

Rational frac(long long p, long long q) { return Rational(cpp_int(p), cpp_int(q)); }

long long binom_ll(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long fact_ll(int n) {
    long long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

int sgn(int p) { return (p % 2 == 0) ? 1 : -1; }

// Integrate s first, then t, over each term of the binomial expansion of
// (1-t)^{n-1} (1-s)^{n-1}. With Lz = log((b+z)/z), Lb = log((b+z)/b):
//   M_ij = int t^i s^j/(zt+bs)
//        = sum_{m<j} (-1)^m z^m b^{-m-1}/((j-m)(i+m+1)) + (-1)^j z^j b^{-j-1} L_{i+j},
//   L_p  = int_0^1 t^p log((zt+b)/(zt)) dt = Lz/(p+1) + 1/(p+1)^2 - z/(p+1) H_{p+1},
//   H_q  = int_0^1 t^q/(zt+b) dt = sum_{m<q} (-1)^m b^m z^{-m-1}/(q-m) + (-1)^q b^q z^{-q-1} Lb.
RawExpansion derive_raw(int n) {
    RawExpansion K;
    const long long nf = fact_ll(n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational c0 = frac(binom_ll(n - 1, i) * binom_ll(n - 1, j) * sgn(i + j), nf * nf);
            for (int m = 0; m < j; ++m) K[{kNone, m}] += c0 * frac(sgn(m), (long long)(j - m) * (i + m + 1));
            const int p = i + j, q = p + 1;
            Rational cj = c0 * sgn(j);
            K[{kLogZ, j}] += cj * frac(1, p + 1);
            K[{kNone, j}] += cj * frac(1, (long long)(p + 1) * (p + 1));
            for (int m = 0; m < q; ++m) K[{kNone, j - m}] -= cj * frac(sgn(m), (long long)(p + 1) * (q - m));
            K[{kLogB, j - q}] -= cj * frac(sgn(q), p + 1);
        }
    std::erase_if(K, [](const auto& kv) { return kv.second == 0; });
    return K;
}

// For |z/b| <= 1 write Lb = log1p(x), x = z/b, and split off its first d Taylor terms so
// that x^{-d} Lb = x^{-d} R_d(x) + (polynomial in 1/x). The polynomial parts cancel
// against the rational terms, leaving only bounded pieces.
RawExpansion stabilize(const RawExpansion& raw) {
    RawExpansion out;
    for (const auto& [key, c] : raw) {
        auto [factor, alpha] = key;
        if (factor != kLogB) {
            out[key] += c;
            continue;
        }
        const int d = -alpha;  // alpha <= -1 for every Lb term
        out[{kRem, alpha}] += c;
        for (int m = 1; m <= d; ++m) out[{kNone, m - d}] += c * frac(sgn(m + 1), m);
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

struct DoubleTerm {
    int factor;
    int alpha;
    double c;
};

struct ClosedTable {
    RawExpansion raw;
    std::vector<DoubleTerm> stable;
};

const ClosedTable& table(int n) {
    static const std::array<ClosedTable, kMaxClosedForm + 1> tables = [] {
        std::array<ClosedTable, kMaxClosedForm + 1> t;
        for (int k = 1; k <= kMaxClosedForm; ++k) {
            t[k].raw = derive_raw(k);
            for (const auto& [key, c] : stabilize(t[k].raw))
                t[k].stable.push_back({key.first, key.second, static_cast<double>(c)});
        }
        return t;
    }();
    return tables[n];
}

cplx log1p_c(cplx x) {
    cplx u = 1.0 + x;
    if (u == cplx{1.0, 0.0}) return x;
    return std::log(u) * x / (u - 1.0);
}

// x^{-d} (log1p(x) - sum_{m<=d} (-1)^{m+1} x^m/m) = sum_{m>d} (-1)^{m+1} x^{m-d}/m
cplx log1p_remainder(int d, cplx x) {
    const double ax = std::abs(x);
    if (ax < 0.9) {
        cplx p = x;  // x^{m-d}
        cplx s{};
        for (int m = d + 1; m < d + 2000; ++m) {
            cplx term = double(sgn(m + 1)) * p / double(m);
            s += term;
            if (std::abs(term) <= 1e-18 * std::abs(s)) break;
            p *= x;
        }
        return s;
    }
    cplx partial{};
    cplx p = 1.0;
    for (int m = 1; m <= d; ++m) {
        p *= x;
        partial += double(sgn(m + 1)) * p / double(m);
    }
    return (log1p_c(x) - partial) / std::pow(x, d);
}

void check_closed_order(int n) {
    if (n < 0 || n > kMaxClosedForm)
        throw std::out_of_range("closed-form kernel available for 0 <= n <= " + std::to_string(kMaxClosedForm));
}

}  // namespace

std::vector<ClosedFormCoefficient> closed_form_coefficients(int n) {
    check_closed_order(n);
    if (n == 0) throw std::out_of_range("closed_form_coefficients: n = 0 is 1/(z+conj(w))");
    std::vector<ClosedFormCoefficient> out;
    for (const auto& [key, c] : table(n).raw) {
        cpp_int num = boost::multiprecision::numerator(c), den = boost::multiprecision::denominator(c);
        if (abs(num) > std::numeric_limits<std::int64_t>::max() || den > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("closed_form_coefficients: coefficient exceeds int64");
        LogFactor f = key.first == kNone ? LogFactor::none : key.first == kLogZ ? LogFactor::log_z : LogFactor::log_w;
        out.push_back({f, key.second, static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)});
    }
    return out;
}

ClosedFormValue kernel_closed_form(int n, cplx z, cplx w) {
    check_closed_order(n);
    require_right_half_plane(z, "kernel: z");
    require_right_half_plane(w, "kernel: w");
    const cplx b = std::conj(w);
    const double ratio = std::abs(z) / std::abs(w);
    const bool warn = ratio < 1e-8 || ratio > 1e8;
    if (n == 0) return {1.0 / (z + b), 1.0, warn};
    // K is symmetric under z <-> b, so evaluate with |x| <= 1.
    const bool swap = std::abs(z) > std::abs(b);
    const cplx p = swap ? z : b;
    const cplx x = swap ? b / z : z / b;
    const cplx lz = log1p_c(1.0 / x);  // log((p + q)/q) with q the smaller argument
    cplx sum{};
    double mag = 0.0;
    for (const DoubleTerm& t : table(n).stable) {
        cplx v;
        switch (t.factor) {
            case kNone: v = std::pow(x, t.alpha); break;
            case kLogZ: v = std::pow(x, t.alpha) * lz; break;
            default: v = log1p_remainder(-t.alpha, x); break;
        }
        v *= t.c;
        sum += v;
        mag += std::abs(v);
    }
    const double cond = (sum == cplx{}) ? INFINITY : mag / std::abs(sum);
    return {sum / p, cond, warn};
}

cplx kernel_eval_closed(int n, cplx z, cplx w) { return kernel_closed_form(n, z, w).value; }

namespace {

double factorial_d(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

template <bool Parallel>
KernelValue eval_impl(const KernelPoint& p) {
    if (p.n < 0) throw std::invalid_argument("kernel: n must be nonnegative");
    require_right_half_plane(p.z, "kernel: z");
    require_right_half_plane(p.w, "kernel: w");
    const cplx b = std::conj(p.w);
    if (p.n == 0) return {1.0 / (p.z + b), p.method == Method::automatic ? Method::closed_form : p.method, 0.0, true};

    if (p.method != Method::quadrature && p.n <= kMaxClosedForm) {
        ClosedFormValue c = kernel_closed_form(p.n, p.z, p.w);
        // Roughly cond * eps relative error; 1e5 keeps it below 1e-10.
        if (p.method == Method::closed_form || (c.condition < 1e5 && !c.cancellation_warning))
            return {c.value, Method::closed_form, c.condition * 1e-16 * std::abs(c.value), true};
    }
    if (p.method == Method::closed_form) check_closed_order(p.n);

    const int n = p.n;
    const double scale = 1.0 / (factorial_d(n - 1) * factorial_d(n - 1));
    auto g = [&](double t, double s) {
        double wt = 1.0, ws = 1.0;
        for (int i = 1; i < n; ++i) {
            wt *= 1.0 - t;
            ws *= 1.0 - s;
        }
        return (wt * ws) / (p.z * t + s * b);
    };
    quad::QuadConfig cfg = p.cfg;
    cfg.abs_tol = p.cfg.abs_tol / scale;
    auto r = Parallel ? quad::integrate_square_corner(g, cfg) : quad::serial::integrate_square_corner(g, cfg);
    return {r.value * scale, Method::quadrature, r.error * scale, r.converged};
}

}  // namespace

KernelValue kernel_eval(const KernelPoint& p) { return eval_impl<true>(p); }
namespace serial {
KernelValue kernel_eval(const KernelPoint& p) { return eval_impl<false>(p); }
}  // namespace serial

double i_theta(double theta) {
    if (!(std::abs(theta) < pi / 2)) throw std::domain_error("i_theta: requires |theta| < pi/2");
    if (std::abs(theta) < 1e-3) {
        double t2 = theta * theta;
        return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
    }
    return 0.5 * theta / std::sin(theta);
}

double kernel_diagonal(int n, cplx z, const quad::QuadConfig& cfg) {
    if (n < 0) throw std::invalid_argument("kernel_diagonal: n must be nonnegative");
    require_right_half_plane(z, "kernel_diagonal: z");
    if (n == 0) return 1.0 / (2.0 * z.real());
    const double theta = std::arg(z);
    if (std::abs(theta) > pi / 2 - cfg.theta_margin)
        throw std::domain_error("kernel_diagonal: |arg z| exceeds pi/2 minus the safety margin");
    const double c2 = std::cos(2 * theta);
    // inner integral over y is a polynomial of degree 2n-2: n Gauss nodes are exact
    const auto& rule = quad::gauss_legendre(n);
    auto outer = [&](double t) {
        double inner = 0.0;
        for (int i = 0; i < n; ++i) {
            double y = 0.5 * (1.0 + rule.nodes[i]);
            inner += 0.5 * rule.weights[i] * std::pow(1.0 - y * t, n - 1) * std::pow(1.0 - y, n - 1);
        }
        return cplx{(1.0 + t) * inner / (t * t + 1.0 + 2.0 * t * c2)};
    };
    auto r = quad::integrate_interval(outer, 0.0, 1.0, cfg);
    if (!r.converged) throw NumericalError("kernel_diagonal: quadrature did not converge");
    const double g = factorial_d(n - 1);
    // cos(theta) = Re z/|z| avoids cancellation near the axis
    return 2.0 * (z.real() / std::abs(z)) / (g * g * std::abs(z)) * r.value.real();
}

double kernel_norm(int n, cplx z, const quad::QuadConfig& cfg) { return std::sqrt(kernel_diagonal(n, z, cfg)); }

NormBounds norm_bounds(int n, cplx z) {
    if (n < 1) throw std::invalid_argument("norm_bounds: n must be at least 1");
    require_right_half_plane(z, "norm_bounds: z");
    const double g = factorial_d(n - 1), r = std::sqrt(std::abs(z));
    return {1.0 / (g * std::sqrt(2.0 * n - 1.0) * r), std::sqrt(pi) / (g * std::sqrt(double(n)) * r)};
}

namespace {

template <bool Parallel>
Eigen::MatrixXcd gram_impl(int n, std::span<const cplx> pts, Method method, const quad::QuadConfig& cfg) {
    const long m = static_cast<long>(pts.size());
    Eigen::MatrixXcd g(m, m);
    // upper triangle in row-major pair order
    const long pairs = m * (m + 1) / 2;
    std::exception_ptr failure;
    auto entry = [&](long idx) {
        long i = 0, rem = idx;
        while (rem >= m - i) {
            rem -= m - i;
            ++i;
        }
        long j = i + rem;
        KernelPoint p{n, pts[i], pts[j], method, cfg};
        cplx v = Parallel ? kernel_eval(p).value : serial::kernel_eval(p).value;
        if (i == j) v = {v.real(), 0.0};
        g(i, j) = v;
        g(j, i) = std::conj(v);
    };
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long idx = 0; idx < pairs; ++idx) {
            try {
                entry(idx);
            } catch (...) {
#pragma omp critical(hardy_gram_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (long idx = 0; idx < pairs; ++idx) entry(idx);
    }
    return g;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(int n, std::span<const cplx> points, Method method, const quad::QuadConfig& cfg) {
    return gram_impl<true>(n, points, method, cfg);
}
namespace serial {
Eigen::MatrixXcd gram_matrix(int n, std::span<const cplx> points, Method method, const quad::QuadConfig& cfg) {
    return gram_impl<false>(n, points, method, cfg);
}
}  // namespace serial

double min_eigenvalue(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0) throw std::invalid_argument("min_eigenvalue: empty matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("min_eigenvalue: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

double reproduce_check(int n, const expfam::ExpPoly& f, cplx w, const quad::QuadConfig& cfg) {
    if (n < 1) throw std::invalid_argument("reproduce_check: n must be at least 1");
    require_right_half_plane(w, "reproduce_check: w");
    if (f.is_zero()) return 0.0;
    const timespace::GFunction g(std::conj(w), n);
    const expfam::ExpPoly fn = expfam::derivative(f, n);
    auto integrand = [&](double t) {
        if (t == 0.0) return cplx{};
        return std::pow(t, n) * fn(t) * std::conj(timespace::g_weighted_derivative(g, t));
    };
    auto r = quad::integrate_halfline(integrand, f.decay_scale(), cfg);
    if (!r.converged) throw NumericalError("reproduce_check: quadrature did not converge");
    return std::abs(expfam::laplace(f)(w) - r.value);
}

}  // namespace hardy::kernel
