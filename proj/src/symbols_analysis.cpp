#include <algorithm>
#include <cmath>
#include <exception>

#include "hardy/kernel.hpp"
#include "hardy/sampling.hpp"
#include "hardy/special.hpp"
#include "hardy/symbols.hpp"

namespace hardy::symbols {

void GridSpec::validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("grid: need 0 < r_min < r_max");
    if (n_r < 2 || n_theta < 2) throw std::invalid_argument("grid: need at least 2 radii and 2 angles");
    if (!(theta_margin > 0.0) || !(theta_margin < pi / 2)) throw std::invalid_argument("grid: theta_margin in (0, pi/2)");
    if (refinement_passes < 0) throw std::invalid_argument("grid: refinement_passes must be nonnegative");
    if (!(infinity_threshold > 0.0)) throw std::invalid_argument("grid: infinity_threshold must be positive");
}

std::vector<cplx> GridSpec::points() const {
    validate();
    std::vector<cplx> pts;
    pts.reserve(std::size_t(n_r) * n_theta);
    const double l0 = std::log10(r_min), l1 = std::log10(r_max), tmax = pi / 2 - theta_margin;
    for (int i = 0; i < n_r; ++i) {
        double r = std::pow(10.0, l0 + (l1 - l0) * i / (n_r - 1));
        for (int j = 0; j < n_theta; ++j) pts.push_back(std::polar(r, -tmax + 2 * tmax * j / (n_theta - 1)));
    }
    return pts;
}

namespace {

constexpr double kRayCapHigh = 1e30;
constexpr double kRayCapLow = 1e-30;
constexpr long kSearchBudget = 4000;

struct Tracker {
    const std::function<double(cplx)>& f;
    double best = -INFINITY;
    cplx arg{};
    long evals = 0;
    bool hit_inf = false;

    double operator()(cplx z) {
        ++evals;
        double v = f(z);
        consider(z, v);
        return v;
    }
    void consider(cplx z, double v) {
        if (std::isnan(v)) return;
        if (std::isinf(v)) hit_inf = true;
        if (v > best) {
            best = v;
            arg = z;
        }
    }
};

// March each ray outward and inward by decades while the value keeps increasing.
// Returns true if some ray was still increasing at the cap where the running max sits.
bool extend_rays(Tracker& tr, const GridSpec& g, const std::vector<double>& grid_vals) {
    const double tmax = pi / 2 - g.theta_margin;
    bool growing_at_cap = false;
    for (int j = 0; j < g.n_theta; ++j) {
        const double th = -tmax + 2 * tmax * j / (g.n_theta - 1);
        for (int dir : {+1, -1}) {
            double prev = grid_vals[std::size_t(dir > 0 ? g.n_r - 1 : 0) * g.n_theta + j];
            double r = dir > 0 ? g.r_max : g.r_min;
            for (;;) {
                r = dir > 0 ? r * 10 : r / 10;
                double v = tr(std::polar(r, th));
                if (std::isnan(v) || !(v > prev * (1 + 1e-12))) break;
                prev = v;
                if (dir > 0 ? r >= kRayCapHigh : r <= kRayCapLow) {
                    if (v >= tr.best) growing_at_cap = true;
                    break;
                }
            }
        }
    }
    return growing_at_cap;
}

// Coordinate search in (log Re z, Im z) with per-coordinate expanding/shrinking steps.
void pattern_search(Tracker& tr) {
    double u = std::log(tr.arg.real()), y = tr.arg.imag();
    double du = std::log(10.0) / 4, dy = 0.05 * std::abs(tr.arg);
    double cur = tr.best;
    const long stop = tr.evals + kSearchBudget;
    while (tr.evals < stop && (du > 1e-10 || dy > 1e-15 * (1 + std::abs(y)))) {
        bool moved = false;
        for (int s : {-1, +1}) {
            double v = tr(cplx{std::exp(u + s * du), y});
            if (v > cur) {
                cur = v;
                u += s * du;
                moved = true;
                break;
            }
        }
        du = moved ? du * 2 : du / 2;
        if (tr.hit_inf) return;
        moved = false;
        for (int s : {-1, +1}) {
            double v = tr(cplx{std::exp(u), y + s * dy});
            if (v > cur) {
                cur = v;
                y += s * dy;
                moved = true;
                break;
            }
        }
        dy = moved ? dy * 2 : dy / 2;
        if (tr.hit_inf) return;
        if (!std::isfinite(std::exp(u))) return;
    }
}

template <bool Parallel>
SupEstimate supremum_impl(const std::function<double(cplx)>& f, const GridSpec& g) {
    const std::vector<cplx> pts = g.points();
    std::vector<double> vals(pts.size());
    const long m = static_cast<long>(pts.size());
    std::exception_ptr failure;
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < m; ++i) {
            try {
                vals[i] = f(pts[i]);
            } catch (...) {
#pragma omp critical(hardy_sup_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (long i = 0; i < m; ++i) vals[i] = f(pts[i]);
    }

    Tracker tr{f};
    tr.evals = m;
    for (long i = 0; i < m; ++i) tr.consider(pts[i], vals[i]);

    SupEstimate out;
    auto finish = [&](bool infinite) {
        out.infinite = infinite || tr.hit_inf;
        out.value = out.infinite ? INFINITY : std::max(tr.best, 0.0);
        out.argmax = tr.arg;
        out.evaluations = tr.evals;
        return out;
    };
    if (tr.hit_inf) return finish(true);
    if (!(tr.best > -INFINITY)) throw NumericalError("grid_supremum: no finite sample");

    bool growing = extend_rays(tr, g, vals);
    for (int pass = 0; pass < g.refinement_passes && !tr.hit_inf; ++pass) {
        const double before = tr.best;
        pattern_search(tr);
        growing = growing || tr.best > before * (1 + 1e-9);
    }
    return finish(tr.best > g.infinity_threshold && growing);
}

double safe(const std::function<double()>& f) {
    try {
        return f();
    } catch (const std::domain_error&) {
        return NAN;
    } catch (const std::invalid_argument&) {
        return NAN;
    }
}

}  // namespace

SupEstimate grid_supremum(const std::function<double(cplx)>& f, const GridSpec& grid) {
    return supremum_impl<true>(f, grid);
}
namespace serial {
SupEstimate grid_supremum(const std::function<double(cplx)>& f, const GridSpec& grid) {
    return supremum_impl<false>(f, grid);
}
}  // namespace serial

SelfmapWitness selfmap_witness(const SymbolExpr& e, const GridSpec& grid) {
    SelfmapWitness w;
    double best_dist = INFINITY;
    for (cplx z : grid.points()) {
        bool bad;
        try {
            cplx v = e(z);
            bad = !(v.real() > 0.0);
        } catch (const std::domain_error&) {
            bad = true;
        }
        if (!bad) continue;
        double d = std::abs(std::log(std::abs(z))) + std::abs(std::arg(z));
        if (d < best_dist) {
            best_dist = d;
            w.ok = false;
            w.counterexample = z;
        }
    }
    return w;
}

SupEstimate angular_derivative(const SymbolExpr& e, const GridSpec& grid) {
    return grid_supremum([&](cplx z) { return safe([&] { return z.real() / e(z).real(); }); }, grid);
}

SupEstimate radial_sup(const SymbolExpr& e, const GridSpec& grid) {
    return grid_supremum([&](cplx z) { return safe([&] { return std::abs(z) / std::abs(e(z)); }); }, grid);
}

std::vector<SupEstimate> nbc_suprema(const SymbolExpr& e, int n, const GridSpec& grid) {
    if (n < 1 || n > kMaxJetOrder) throw std::out_of_range("nbc_suprema: n must lie in 1.." + std::to_string(kMaxJetOrder));
    std::vector<SupEstimate> out;
    for (int k = 1; k <= n; ++k)
        out.push_back(grid_supremum(
            [&](cplx z) {
                return safe([&] {
                    Jet j = e.root().jet(z, k);
                    return std::abs(std::pow(z, k) * j.derivative(k) / j.value());
                });
            },
            grid));
    return out;
}

cplx faa_di_bruno(const Jet& fjet, const Jet& phijet, int n) {
    if (n < 1) throw std::invalid_argument("faa_di_bruno: n must be at least 1");
    if (fjet.order() < n || phijet.order() < n) throw std::invalid_argument("faa_di_bruno: order mismatch");
    const cplx v = phijet.value();
    if (std::abs(fjet.base() - v) > 1e-12 * (1.0 + std::abs(v)))
        throw std::invalid_argument("faa_di_bruno: f jet must be based at phi(z)");
    const auto table = special::bell_partitions(n);
    std::vector<cplx> dphi(n + 1);
    for (int j = 1; j <= n; ++j) dphi[j] = phijet.derivative(j);
    cplx sum{};
    for (const auto& t : table.terms) {
        cplx p = double(t.coefficient) * fjet.derivative(t.k);
        for (int j = 1; j <= n; ++j)
            for (int r = 0; r < t.multiplicity[j - 1]; ++r) p *= dphi[j];
        sum += p;
    }
    return sum;
}

Eigen::MatrixXcd jury_matrix(const SymbolExpr& e, int n, double M, const std::vector<cplx>& points,
                             const std::function<cplx(cplx)>& psi) {
    if (!(M >= 0.0)) throw std::invalid_argument("jury: M must be nonnegative");
    std::vector<cplx> img;
    img.reserve(points.size());
    for (cplx z : points) {
        require_right_half_plane(z, "jury: point");
        cplx v = e(z);
        require_right_half_plane(v, "jury: phi(point)");
        img.push_back(v);
    }
    Eigen::MatrixXcd A = M * M * kernel::gram_matrix(n, points);
    const Eigen::MatrixXcd B = kernel::gram_matrix(n, img);
    const long m = static_cast<long>(points.size());
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) {
            cplx w = psi ? std::conj(psi(points[i])) * psi(points[j]) : cplx{1.0};
            A(i, j) -= w * B(i, j);
        }
    for (long i = 0; i < m; ++i) A(i, i) = A(i, i).real();
    return A;
}

double jury_min_eig(const SymbolExpr& e, int n, double M, const std::vector<cplx>& points,
                    const std::function<cplx(cplx)>& psi) {
    return kernel::min_eigenvalue(jury_matrix(e, n, M, points, psi));
}

JuryWitness jury_witness_search(const SymbolExpr& e, int n, double M, std::uint64_t seed, int set_size, int rounds) {
    if (set_size < 1 || rounds < 1) throw std::invalid_argument("jury_witness_search: need set_size, rounds >= 1");
    sampling::Rng rng(seed);
    const std::vector<cplx> base = sampling::random_halfplane_points(rng, set_size);
    JuryWitness best{INFINITY, {}, 0};
    const double tmax = pi / 2 - 1e-3;
    for (int r = 0; r < rounds; ++r) {
        // scale outward by decades and rotate halfway to the axis each round
        const double scale = std::pow(10.0, r), squeeze = 1.0 - std::pow(0.5, r);
        std::vector<cplx> pts;
        for (cplx z : base) {
            double th = std::arg(z);
            th += (th >= 0 ? 1 : -1) * (tmax - std::abs(th)) * squeeze;
            pts.push_back(std::polar(std::abs(z) * scale, th));
        }
        double v = jury_min_eig(e, n, M, pts);
        if (v < best.min_eig) best = {v, pts, r + 1};
    }
    return best;
}

double caughran_schwartz_bound(const SymbolExpr& e, int n, const std::vector<cplx>& points) {
    double sup = 0.0;
    for (cplx x : points) {
        cplx px = e(x);
        double kx = kernel::kernel_eval({n, x, x}).value.real();
        double kp = kernel::kernel_eval({n, px, px}).value.real();
        sup = std::max(sup, std::sqrt(kp / kx));
    }
    return sup;
}

const char* to_string(VerdictH2 v) { return v == VerdictH2::bounded ? "bounded" : "unbounded"; }

const char* to_string(VerdictHn v) {
    switch (v) {
        case VerdictHn::necessary_failed: return "necessary-failed";
        case VerdictHn::sufficient_passed: return "sufficient-passed";
        case VerdictHn::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

SymbolReport classify(const SymbolExpr& e, int n, const GridSpec& grid) {
    if (n < 0 || n > kMaxJetOrder) throw std::out_of_range("classify: n must lie in 0.." + std::to_string(kMaxJetOrder));
    SymbolReport rep;
    rep.n = n;
    rep.grid = grid;
    SelfmapWitness w = selfmap_witness(e, grid);
    rep.selfmap_witnessed = w.ok;
    rep.selfmap_counterexample = w.counterexample;

    SupEstimate ang = angular_derivative(e, grid);
    SupEstimate rad = radial_sup(e, grid);
    rep.phi_prime_infinity = ang.value;
    // a finite radial sup forces a finite angular derivative, so an infinite one forces infinity here
    rep.radial_sup = ang.infinite ? INFINITY : rad.value;
    rep.verdict_H2 = ang.infinite ? VerdictH2::unbounded : VerdictH2::bounded;
    rep.h2_norm = ang.infinite ? INFINITY : std::sqrt(ang.value);

    if (n == 0) {
        rep.verdict_Hn =
            rep.verdict_H2 == VerdictH2::bounded ? VerdictHn::sufficient_passed : VerdictHn::necessary_failed;
        return rep;
    }
    for (const SupEstimate& s : nbc_suprema(e, n, grid)) rep.nbc.push_back(s.value);
    const bool nbc_finite = std::all_of(rep.nbc.begin(), rep.nbc.end(), [](double v) { return std::isfinite(v); });
    if (std::isinf(rep.radial_sup)) rep.verdict_Hn = VerdictHn::necessary_failed;
    else if (std::isfinite(rep.phi_prime_infinity) && nbc_finite) rep.verdict_Hn = VerdictHn::sufficient_passed;
    else rep.verdict_Hn = VerdictHn::inconclusive;
    return rep;
}

}  // namespace hardy::symbols
