#include "hardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

namespace hardy::quad {

void QuadConfig::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(std::string("QuadConfig: ") + msg); };
    if (!(abs_tol > 0.0)) fail("abs_tol must be positive");
    if (!(rel_tol > 0.0)) fail("rel_tol must be positive");
    if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) fail("grading_ratio must lie in (0,1)");
    if (grading_levels < 0) fail("grading_levels must be nonnegative");
    if (nodes_per_cell < 2) fail("nodes_per_cell must be at least 2");
    if (max_subdiv < 1) fail("max_subdiv must be at least 1");
    if (!(halfline_truncation > 0.0)) fail("halfline_truncation must be positive");
    if (!(theta_margin > 0.0 && theta_margin < pi / 2)) fail("theta_margin must lie in (0, pi/2)");
}

double QuadConfig::target(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    std::istringstream is(text);
    T v{};
    is >> v;
    if (!is || !is.eof()) throw std::invalid_argument("config: bad value for '" + key + "': " + text);
    return v;
}

}  // namespace

QuadConfig parse_quad_config(std::istream& in, QuadConfig cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "abs_tol") cfg.abs_tol = parse_value<double>(key, val);
        else if (key == "rel_tol") cfg.rel_tol = parse_value<double>(key, val);
        else if (key == "max_subdiv") cfg.max_subdiv = parse_value<int>(key, val);
        else if (key == "grading_ratio") cfg.grading_ratio = parse_value<double>(key, val);
        else if (key == "grading_levels") cfg.grading_levels = parse_value<int>(key, val);
        else if (key == "halfline_truncation") cfg.halfline_truncation = parse_value<double>(key, val);
        else if (key == "nodes_per_cell") cfg.nodes_per_cell = parse_value<int>(key, val);
        else if (key == "theta_margin") cfg.theta_margin = parse_value<double>(key, val);
        else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

const GaussRule& gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[m];
    if (slot) return *slot;
    auto rule = std::make_unique<GaussRule>();
    rule->nodes.resize(m);
    rule->weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[m - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) rule->nodes[m / 2] = 0.0;
    slot = std::move(rule);
    return *slot;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

cplx checked(cplx v, double t) {
    if (std::isnan(v.real()) || std::isnan(v.imag())) {
        std::ostringstream os;
        os << "integrand returned NaN at t = " << t;
        throw NumericalError(os.str());
    }
    return v;
}

struct Segment {
    double a, b;
    cplx value;
    double error;
};

Segment gk15(const Integrand1D& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = checked(f(c), c);
    cplx kron = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        cplx f1 = checked(f(c - dx), c - dx);
        cplx f2 = checked(f(c + dx), c + dx);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_interval(const Integrand1D& f, double a, double b, const QuadConfig& cfg) {
    cfg.validate();
    if (!(a < b)) throw std::invalid_argument("integrate_interval: require a < b");
    std::vector<Segment> segs{gk15(f, a, b)};
    std::priority_queue<std::pair<double, std::size_t>> heap;
    heap.push({segs[0].error, 0});
    QuadResult r;
    r.evaluations = 15;
    auto resum = [&] {
        r.value = {};
        r.error = 0.0;
        for (const Segment& s : segs) {
            r.value += s.value;
            r.error += s.error;
        }
    };
    resum();
    while (r.error > cfg.target(std::abs(r.value))) {
        if (static_cast<int>(segs.size()) >= cfg.max_subdiv) {
            r.converged = false;
            break;
        }
        std::size_t idx = heap.top().second;
        Segment worst = segs[idx];
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            r.converged = false;
            break;
        }
        heap.pop();
        segs[idx] = gk15(f, worst.a, mid);
        segs.push_back(gk15(f, mid, worst.b));
        heap.push({segs[idx].error, idx});
        heap.push({segs.back().error, segs.size() - 1});
        r.evaluations += 30;
        r.value += segs[idx].value + segs.back().value - worst.value;
        r.error += segs[idx].error + segs.back().error - worst.error;
        // Running sums drift; refresh them exactly every so often.
        if (segs.size() % 64 == 0) resum();
    }
    resum();
    r.subdivisions = static_cast<long>(segs.size());
    return r;
}

QuadResult integrate_halfline(const Integrand1D& f, double decay_scale, const QuadConfig& cfg) {
    cfg.validate();
    if (!(decay_scale > 0.0)) throw std::invalid_argument("integrate_halfline: decay_scale must be positive");
    const double T = cfg.halfline_truncation * decay_scale;
    QuadResult head = integrate_interval(f, 0.0, T, cfg);
    auto tail_f = [&](double u) -> cplx {
        double s = 1.0 - u;
        double t = T + u / s;
        cplx v = f(t);
        if (v == cplx{}) return v;
        return v / (s * s);
    };
    QuadResult tail = integrate_interval(tail_f, 0.0, 1.0, cfg);
    if (!std::isfinite(std::abs(tail.value)))
        throw NumericalError("integrate_halfline: tail integral is not finite; decay assumption violated");
    QuadResult r;
    r.value = head.value + tail.value;
    r.error = head.error + tail.error;
    r.converged = head.converged && tail.converged;
    r.evaluations = head.evaluations + tail.evaluations;
    r.subdivisions = head.subdivisions + tail.subdivisions;
    return r;
}

namespace {

struct Cell {
    double x0, x1, y0, y1;
    cplx value;
    double error;
    bool split_x;
};

cplx tensor_rule(const Integrand2D& g, const GaussRule& rule, double x0, double x1, double y0, double y1) {
    const int m = static_cast<int>(rule.nodes.size());
    double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    cplx sum{};
    for (int i = 0; i < m; ++i) {
        double x = cx + hx * rule.nodes[i];
        cplx row{};
        for (int j = 0; j < m; ++j) {
            double y = cy + hy * rule.nodes[j];
            cplx v = g(x, y);
            if (std::isnan(v.real()) || std::isnan(v.imag())) {
                std::ostringstream os;
                os << "integrand returned NaN at (" << x << ", " << y << ")";
                throw NumericalError(os.str());
            }
            row += rule.weights[j] * v;
        }
        sum += rule.weights[i] * row;
    }
    return sum * (hx * hy);
}

bool touches_corner(const Cell& c) { return c.x0 == 0.0 && c.y0 == 0.0; }

void evaluate_cell(const Integrand2D& g, const GaussRule& rule, Cell& c) {
    double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
    cplx coarse = tensor_rule(g, rule, c.x0, c.x1, c.y0, c.y1);
    if (touches_corner(c)) {
        // Kept square: for a degree -1 singularity the quadrant refinement
        // halves the error, so |coarse - refined| tracks the refined error.
        cplx quads = tensor_rule(g, rule, c.x0, xm, c.y0, ym) + tensor_rule(g, rule, xm, c.x1, c.y0, ym) +
                     tensor_rule(g, rule, c.x0, xm, ym, c.y1) + tensor_rule(g, rule, xm, c.x1, ym, c.y1);
        c.value = quads;
        c.error = std::abs(quads - coarse);
        return;
    }
    cplx xs = tensor_rule(g, rule, c.x0, xm, c.y0, c.y1) + tensor_rule(g, rule, xm, c.x1, c.y0, c.y1);
    cplx ys = tensor_rule(g, rule, c.x0, c.x1, c.y0, ym) + tensor_rule(g, rule, c.x0, c.x1, ym, c.y1);
    double ex = std::abs(xs - coarse), ey = std::abs(ys - coarse);
    c.value = 0.5 * (xs + ys);
    c.error = std::max(ex, ey);
    c.split_x = ex >= ey;
}

std::vector<Cell> initial_mesh(const QuadConfig& cfg) {
    std::vector<Cell> cells;
    double hi = 1.0;
    for (int l = 0; l < cfg.grading_levels; ++l) {
        double lo = hi * cfg.grading_ratio;
        cells.push_back({lo, hi, 0.0, lo, {}, 0.0, true});
        cells.push_back({0.0, lo, lo, hi, {}, 0.0, true});
        cells.push_back({lo, hi, lo, hi, {}, 0.0, true});
        hi = lo;
    }
    cells.push_back({0.0, hi, 0.0, hi, {}, 0.0, true});
    return cells;
}

template <bool Parallel>
QuadResult corner_impl(const Integrand2D& g, const QuadConfig& cfg) {
    cfg.validate();
    const GaussRule& rule = gauss_legendre(cfg.nodes_per_cell);
    const long per_cell = 5L * cfg.nodes_per_cell * cfg.nodes_per_cell;  // corner cells also use five rules
    std::vector<Cell> cells = initial_mesh(cfg);
    std::vector<std::size_t> pending(cells.size());
    std::iota(pending.begin(), pending.end(), std::size_t{0});
    QuadResult r;

    auto evaluate_pending = [&] {
        const long count = static_cast<long>(pending.size());
        if constexpr (Parallel) {
            // Exceptions cannot cross the parallel region; capture the first one.
            std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
            for (long i = 0; i < count; ++i) {
                try {
                    evaluate_cell(g, rule, cells[pending[i]]);
                } catch (...) {
#pragma omp critical(hardy_corner_failure)
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
        } else {
            for (long i = 0; i < count; ++i) evaluate_cell(g, rule, cells[pending[i]]);
        }
        r.evaluations += count * per_cell;
        pending.clear();
    };

    evaluate_pending();
    std::vector<std::size_t> order;
    for (;;) {
        cplx total{};
        double err = 0.0;
        for (const Cell& c : cells) {
            total += c.value;
            err += c.error;
        }
        r.value = total;
        r.error = err;
        if (err <= cfg.target(std::abs(total))) break;
        if (static_cast<long>(cells.size()) >= cfg.max_subdiv) {
            r.converged = false;
            break;
        }
        order.resize(cells.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (cells[a].error != cells[b].error) return cells[a].error > cells[b].error;
            return a < b;
        });
        const std::size_t budget = static_cast<std::size_t>(cfg.max_subdiv) - cells.size();
        double picked = 0.0;
        std::vector<std::size_t> chosen;
        for (std::size_t idx : order) {
            if (chosen.size() >= budget) break;
            if (!chosen.empty() && picked >= 0.5 * err) break;
            chosen.push_back(idx);
            picked += cells[idx].error;
        }
        bool progressed = false;
        for (std::size_t idx : chosen) {
            Cell c = cells[idx];
            Cell a = c, b = c;
            if (touches_corner(c)) {
                double xm = 0.5 * c.x1, ym = 0.5 * c.y1;
                if (!(xm > 0.0 && ym > 0.0)) continue;
                cells[idx] = {0.0, xm, 0.0, ym, {}, 0.0, true};
                pending.push_back(idx);
                for (Cell q : {Cell{xm, c.x1, 0.0, ym, {}, 0.0, true}, Cell{0.0, xm, ym, c.y1, {}, 0.0, true},
                               Cell{xm, c.x1, ym, c.y1, {}, 0.0, true}}) {
                    cells.push_back(q);
                    pending.push_back(cells.size() - 1);
                }
                progressed = true;
                continue;
            }
            if (c.split_x) {
                double xm = 0.5 * (c.x0 + c.x1);
                if (!(xm > c.x0 && xm < c.x1)) continue;
                a.x1 = xm;
                b.x0 = xm;
            } else {
                double ym = 0.5 * (c.y0 + c.y1);
                if (!(ym > c.y0 && ym < c.y1)) continue;
                a.y1 = ym;
                b.y0 = ym;
            }
            cells[idx] = a;
            pending.push_back(idx);
            cells.push_back(b);
            pending.push_back(cells.size() - 1);
            progressed = true;
        }
        if (!progressed) {
            r.converged = false;
            break;
        }
        evaluate_pending();
    }
    r.subdivisions = static_cast<long>(cells.size());
    return r;
}

}  // namespace

QuadResult integrate_square_corner(const Integrand2D& g, const QuadConfig& cfg) {
    return corner_impl<true>(g, cfg);
}

namespace serial {
QuadResult integrate_square_corner(const Integrand2D& g, const QuadConfig& cfg) {
    return corner_impl<false>(g, cfg);
}
}  // namespace serial

}  // namespace hardy::quad
