#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <memory>
#include <regex>
#include <sstream>

#include "hardy/cayley.hpp"
#include "hardy/freqspace.hpp"
#include "hardy/kernel.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/sampling.hpp"
#include "hardy/symbols.hpp"
#include "hardy/timespace.hpp"

namespace hardy::cli {

using json = nlohmann::ordered_json;
using expfam::ExpPoly;
using expfam::RationalComb;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* const kDisclaimer =
    "Suprema are sampled estimates on a finite grid with ray extension and local refinement, not proofs.";

struct RunConfig {
    std::string command;
    int n = 1;
    std::string z = "1", w = "1";
    double tol = 0.0;  // 0: the command's default
    std::string grid;
    std::string format = "json";
    std::string out;
    std::string config;
    std::uint64_t seed = 0;
    int samples = 0;  // 0: the command's default
    std::string method = "auto";
    std::string points;
    std::string f;
    double M = 1.0;
    bool search = false;
    std::string expr;
};

// Options given on the executed subcommand.
struct Given {
    CLI::Option* n = nullptr;
    CLI::Option* tol = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* w = nullptr;
    CLI::Option* format = nullptr;
};

json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

json complex_json(cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw UsageError("expected a number or an [re, im] pair");
}

std::vector<cplx> parse_points(const std::string& s) {
    std::vector<cplx> pts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) pts.push_back(parse_complex(tok));
    if (pts.empty()) throw UsageError("--points: empty list");
    return pts;
}

symbols::GridSpec parse_grid(const std::string& s, symbols::GridSpec g) {
    if (s.empty()) return g;
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (tok.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("");
        } catch (const std::exception&) {
            throw UsageError("--grid: expected r_min,r_max,n_r,n_theta[,theta_margin]");
        }
    }
    if (v.size() < 4 || v.size() > 5) throw UsageError("--grid: expected r_min,r_max,n_r,n_theta[,theta_margin]");
    g.r_min = v[0];
    g.r_max = v[1];
    g.n_r = static_cast<int>(v[2]);
    g.n_theta = static_cast<int>(v[3]);
    if (v.size() == 5) g.theta_margin = v[4];
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    return g;
}

json grid_json(const symbols::GridSpec& g) {
    return json{{"r_min", g.r_min},       {"r_max", g.r_max},
                {"n_r", g.n_r},           {"n_theta", g.n_theta},
                {"theta_margin", g.theta_margin}, {"refinement_passes", g.refinement_passes},
                {"infinity_threshold", g.infinity_threshold}};
}

struct Context {
    RunConfig cfg;
    Given given;
    quad::QuadConfig quad;

    std::vector<int> orders(int lo, int hi) const {
        if (given.n && given.n->count()) return {cfg.n};
        std::vector<int> v;
        for (int k = lo; k <= hi; ++k) v.push_back(k);
        return v;
    }
    int samples(int def) const { return (given.samples && given.samples->count()) ? cfg.samples : def; }
    double tol(double def) const { return (given.tol && given.tol->count()) ? cfg.tol : def; }
    std::vector<ExpPoly> functions(sampling::Rng& rng, int def, bool positive = false) const {
        if (!cfg.f.empty()) return {parse_exppoly_json(cfg.f)};
        std::vector<ExpPoly> v;
        for (int s = 0, m = samples(def); s < m; ++s)
            v.push_back(positive ? sampling::random_positive_exppoly(rng) : sampling::random_exppoly(rng));
        return v;
    }
};

json header(const Context& c) { return json{{"schema", 1}, {"command", c.cfg.command}}; }

// ---- kernel

int kernel_eval_cmd(Context& c, json& r) {
    kernel::KernelPoint p{c.cfg.n, parse_complex(c.cfg.z), parse_complex(c.cfg.w), kernel::method_from_string(c.cfg.method), c.quad};
    auto v = kernel::kernel_eval(p);
    r["n"] = p.n;
    r["z"] = complex_json(p.z);
    r["w"] = complex_json(p.w);
    r["value_re"] = number(v.value.real());
    r["value_im"] = number(v.value.imag());
    r["method"] = kernel::to_string(v.method);
    r["error_estimate"] = number(v.error);
    r["converged"] = v.converged;
    return v.converged ? kExitOk : kExitVerificationFailed;
}

int kernel_norm_cmd(Context& c, json& r) {
    const cplx z = parse_complex(c.cfg.z);
    const int n = c.cfg.n;
    r["n"] = n;
    r["z"] = complex_json(z);
    const double diag = kernel::kernel_diagonal(n, z, c.quad);
    r["kernel_diag"] = diag;
    r["norm"] = std::sqrt(diag);
    if (n >= 1) {
        auto b = kernel::norm_bounds(n, z);
        r["lower_bound"] = b.lower;
        r["upper_bound"] = b.upper;
    }
    return kExitOk;
}

struct SweepRow {
    int n;
    double r, theta, diag, lower, norm, upper;
};

std::vector<SweepRow> sweep_rows(const Context& c, const std::vector<int>& ns, const symbols::GridSpec& g) {
    std::vector<SweepRow> rows;
    for (int n : ns)
        for (cplx z : g.points()) {
            const double d = kernel::kernel_diagonal(n, z, c.quad);
            auto b = kernel::norm_bounds(n, z);
            rows.push_back({n, std::abs(z), std::arg(z), d, b.lower, std::sqrt(d), b.upper});
        }
    return rows;
}

symbols::GridSpec bounds_grid() {
    symbols::GridSpec g;
    g.r_min = 1e-3;
    g.r_max = 1e3;
    g.n_r = 13;
    g.n_theta = 9;
    g.theta_margin = 0.05;
    return g;
}

int kernel_sweep_cmd(Context& c, json& r, std::string& csv) {
    const auto g = parse_grid(c.cfg.grid, bounds_grid());
    const auto ns = c.orders(1, 5);
    for (int n : ns)
        if (n < 1) throw UsageError("kernel sweep: --n must be at least 1");
    const auto rows = sweep_rows(c, ns, g);
    if (c.cfg.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "n,abs_z,arg_z,kernel_diag,lower_bound,norm,upper_bound\n";
        for (const auto& x : rows)
            os << x.n << ',' << x.r << ',' << x.theta << ',' << x.diag << ',' << x.lower << ',' << x.norm << ',' << x.upper << '\n';
        csv = os.str();
        return kExitOk;
    }
    r["grid"] = grid_json(g);
    json a = json::array();
    for (const auto& x : rows)
        a.push_back({{"n", x.n}, {"abs_z", x.r}, {"arg_z", x.theta}, {"kernel_diag", x.diag},
                     {"lower_bound", x.lower}, {"norm", x.norm}, {"upper_bound", x.upper}});
    r["rows"] = a;
    return kExitOk;
}

int kernel_gram_cmd(Context& c, json& r) {
    std::vector<cplx> pts;
    if (!c.cfg.points.empty()) {
        pts = parse_points(c.cfg.points);
    } else {
        sampling::Rng rng(c.cfg.seed);
        pts = sampling::random_halfplane_points(rng, c.samples(8));
    }
    const auto G = kernel::gram_matrix(c.cfg.n, pts, kernel::method_from_string(c.cfg.method), c.quad);
    r["n"] = c.cfg.n;
    json p = json::array();
    for (cplx z : pts) p.push_back(complex_json(z));
    r["points"] = p;
    json m = json::array();
    for (long i = 0; i < G.rows(); ++i) {
        json row = json::array();
        for (long j = 0; j < G.cols(); ++j) row.push_back(complex_json(G(i, j)));
        m.push_back(row);
    }
    r["matrix"] = m;
    const double mine = kernel::min_eigenvalue(G);
    r["min_eigenvalue"] = mine;
    const double tol = c.tol(1e-8);
    r["tolerance"] = tol;
    r["passed"] = mine >= -tol;
    return mine >= -tol ? kExitOk : kExitVerificationFailed;
}

// ---- verify

int finish_verify(json& r, double worst, double tol, bool ok) {
    r["tolerance"] = tol;
    r["max_residual"] = number(worst);
    r["passed"] = ok;
    return ok ? kExitOk : kExitVerificationFailed;
}

int verify_paley_wiener(Context& c, json& r) {
    sampling::Rng rng(c.cfg.seed);
    const auto fs = c.functions(rng, 100);
    const double tol = c.tol(1e-6);
    double worst = 0.0;
    json cases = json::array();
    for (std::size_t s = 0; s < fs.size(); ++s)
        for (int n : c.orders(0, 4)) {
            auto rep = freq::hn_norm(expfam::laplace(fs[s]), n, c.quad);
            double res = rep.norm_time == 0.0 ? 0.0 : std::abs(rep.norm_time - rep.norm_boundary) / rep.norm_time;
            worst = std::max(worst, res);
            cases.push_back({{"sample", s}, {"n", n}, {"norm_time", rep.norm_time}, {"norm_boundary", rep.norm_boundary},
                             {"norm_exact", rep.norm_exact}, {"residual", res}});
        }
    r["seed"] = c.cfg.seed;
    r["cases"] = cases;
    return finish_verify(r, worst, tol, worst <= tol);
}

int verify_inner_product(Context& c, json& r) {
    sampling::Rng rng(c.cfg.seed);
    const int m = c.samples(100);
    const double tol = c.tol(1e-9);
    double worst = 0.0;
    for (int s = 0; s < m; ++s) {
        ExpPoly f = sampling::random_exppoly(rng), g = sampling::random_exppoly(rng);
        for (int n : c.orders(0, 4)) {
            cplx lhs = expfam::inner_product_n(f, g, n);
            cplx rhs = expfam::l2_inner_product(expfam::derivative(f.times_power(n), n), expfam::derivative(g.times_power(n), n));
            double scale = expfam::norm_n(f, n) * expfam::norm_n(g, n);
            worst = std::max(worst, scale == 0.0 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / scale);
        }
    }
    r["seed"] = c.cfg.seed;
    r["samples"] = m;
    return finish_verify(r, worst, tol, worst <= tol);
}

int verify_bounds(Context& c, json& r) {
    const auto g = parse_grid(c.cfg.grid, bounds_grid());
    const auto ns = c.orders(1, 5);
    for (int n : ns)
        if (n < 1) throw UsageError("verify bounds: --n must be at least 1");
    double worst_lower = INFINITY, worst_upper = INFINITY;
    bool ok = true;
    for (const auto& x : sweep_rows(c, ns, g)) {
        worst_lower = std::min(worst_lower, x.norm - x.lower);
        worst_upper = std::min(worst_upper, x.upper - x.norm);
        ok = ok && x.lower < x.norm && x.norm < x.upper;
    }
    r["grid"] = grid_json(g);
    r["min_lower_margin"] = worst_lower;
    r["min_upper_margin"] = worst_upper;
    r["passed"] = ok;
    return ok ? kExitOk : kExitVerificationFailed;
}

int verify_reproduce(Context& c, json& r) {
    sampling::Rng rng(c.cfg.seed);
    const auto fs = c.functions(rng, 10);
    std::vector<cplx> ws;
    if (c.given.w && c.given.w->count()) ws = {parse_complex(c.cfg.w)};
    else ws = sampling::random_halfplane_points(rng, 20, 0.2, 5.0);
    const double tol = c.tol(1e-6);
    double worst = 0.0;
    for (const auto& f : fs)
        for (cplx w : ws)
            for (int n : c.orders(1, 4)) {
                double scale = 1.0 + std::abs(expfam::laplace(f)(w));
                worst = std::max(worst, kernel::reproduce_check(n, f, w, c.quad) / scale);
            }
    r["seed"] = c.cfg.seed;
    r["functions"] = fs.size();
    r["points"] = ws.size();
    return finish_verify(r, worst, tol, worst <= tol);
}

int verify_cayley(Context& c, json& r) {
    sampling::Rng rng(c.cfg.seed);
    const auto fs = c.functions(rng, 20);
    const double tol = c.tol(1e-7);
    double worst = 0.0;
    json cases = json::array();
    for (const auto& f : fs) {
        auto e = cayley::norm_equality_check(expfam::laplace(f), c.quad);
        worst = std::max(worst, e.residual);
        cases.push_back({{"lhs", e.lhs}, {"rhs", e.rhs}, {"residual", e.residual}});
    }
    r["seed"] = c.cfg.seed;
    r["cases"] = cases;
    return finish_verify(r, worst, tol, worst <= tol);
}

int verify_hardy(Context& c, json& r) {
    sampling::Rng rng(c.cfg.seed);
    const auto fs = c.functions(rng, 20, true);
    double min_margin = INFINITY;
    for (const auto& f : fs)
        for (int m : c.orders(1, 4)) min_margin = std::min(min_margin, timespace::hardy_inequality(f, m).margin());
    // point bound alongside, on the frequency side
    double min_point = INFINITY;
    for (const auto& f : fs)
        for (int n : c.orders(1, 4))
            for (cplx z : sampling::random_halfplane_points(rng, 5, 1e-2, 1e2))
                min_point = std::min(min_point, freq::point_bound_check(expfam::laplace(f), n, z));
    r["seed"] = c.cfg.seed;
    r["min_hardy_margin"] = number(min_margin);
    r["min_point_bound_margin"] = number(min_point);
    const bool ok = min_margin >= 0.0 && min_point >= 0.0;
    r["passed"] = ok;
    return ok ? kExitOk : kExitVerificationFailed;
}

// ---- symbol

int symbol_parse_cmd(Context& c, json& r) {
    auto e = symbols::parse(c.cfg.expr);
    r["text"] = e.text();
    r["ast"] = e.to_string();
    return kExitOk;
}

json report_json(const symbols::SymbolReport& s) {
    json nbc = json::array();
    for (double v : s.nbc) nbc.push_back(number(v));
    json j{{"n", s.n},
           {"selfmap_witnessed", s.selfmap_witnessed},
           {"phi_prime_infinity", number(s.phi_prime_infinity)},
           {"radial_sup", number(s.radial_sup)},
           {"nbc", nbc},
           {"verdict_H2", symbols::to_string(s.verdict_H2)},
           {"verdict_Hn", symbols::to_string(s.verdict_Hn)},
           {"h2_norm", number(s.h2_norm)}};
    if (s.selfmap_counterexample) j["selfmap_counterexample"] = complex_json(*s.selfmap_counterexample);
    j["grid"] = grid_json(s.grid);
    j["disclaimer"] = kDisclaimer;
    return j;
}

int symbol_classify_cmd(Context& c, json& r) {
    auto e = symbols::parse(c.cfg.expr);
    auto rep = symbols::classify(e, c.cfg.n, parse_grid(c.cfg.grid, {}));
    r["symbol"] = e.text();
    r.update(report_json(rep));
    return kExitOk;
}

int symbol_jury_cmd(Context& c, json& r) {
    auto e = symbols::parse(c.cfg.expr);
    r["symbol"] = e.text();
    r["n"] = c.cfg.n;
    r["M"] = c.cfg.M;
    if (c.cfg.search) {
        auto wit = symbols::jury_witness_search(e, c.cfg.n, c.cfg.M, c.cfg.seed, c.samples(6));
        r["min_eigenvalue"] = wit.min_eig;
        json p = json::array();
        for (cplx z : wit.points) p.push_back(complex_json(z));
        r["points"] = p;
        r["rounds"] = wit.rounds;
    } else {
        std::vector<cplx> pts;
        if (!c.cfg.points.empty()) {
            pts = parse_points(c.cfg.points);
        } else {
            sampling::Rng rng(c.cfg.seed);
            pts = sampling::random_halfplane_points(rng, c.samples(6));
        }
        r["min_eigenvalue"] = symbols::jury_min_eig(e, c.cfg.n, c.cfg.M, pts);
        json p = json::array();
        for (cplx z : pts) p.push_back(complex_json(z));
        r["points"] = p;
    }
    r["psd"] = r["min_eigenvalue"].get<double>() >= -c.tol(1e-8);
    return kExitOk;
}

std::string csv_of(const json& r) {
    std::ostringstream head, row;
    bool first = true;
    for (auto it = r.begin(); it != r.end(); ++it) {
        if (it->is_structured()) continue;
        if (!first) {
            head << ',';
            row << ',';
        }
        first = false;
        head << it.key();
        row << (it->is_string() ? it->get<std::string>() : it->dump());
    }
    return head.str() + "\n" + row.str() + "\n";
}

void add_common(CLI::App* sub, RunConfig& cfg, std::map<CLI::App*, Given>& given, const std::string& command) {
    Given g;
    g.n = sub->add_option("--n", cfg.n, "Order n of the space H2^(n)")->check(CLI::Range(0, 64));
    sub->add_option("--z", cfg.z, "Point z in the right half-plane, e.g. 1+2i");
    g.w = sub->add_option("--w", cfg.w, "Point w in the right half-plane");
    g.tol = sub->add_option("--tol", cfg.tol, "Tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "Grid r_min,r_max,n_r,n_theta[,theta_margin]");
    g.format = sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Write the report to this file");
    sub->add_option("--config", cfg.config, "File of key = value quadrature overrides");
    sub->add_option("--seed", cfg.seed, "Seed for random samples");
    g.samples = sub->add_option("--samples", cfg.samples, "Number of random samples")->check(CLI::PositiveNumber);
    sub->add_option("--method", cfg.method, "Kernel method")->check(CLI::IsMember({"auto", "closed_form", "quadrature"}));
    sub->add_option("--points", cfg.points, "Comma-separated complex points");
    sub->add_option("--f", cfg.f, "Exponential polynomial as JSON [[a, k, lambda], ...]");
    given[sub] = g;
    sub->callback([&cfg, command] { cfg.command = command; });
}

}  // namespace

cplx parse_complex(const std::string& text) {
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex real_only("^\\s*([+-]?" + num + ")\\s*$");
    static const std::regex imag_only("^\\s*([+-]?)\\s*(" + num + ")?\\s*i\\s*$");
    static const std::regex both("^\\s*([+-]?" + num + ")\\s*([+-])\\s*(" + num + ")?\\s*i\\s*$");
    std::smatch m;
    if (std::regex_match(text, m, real_only)) return std::stod(m[1]);
    if (std::regex_match(text, m, imag_only)) {
        double v = m[2].matched ? std::stod(m[2]) : 1.0;
        return {0.0, m[1] == "-" ? -v : v};
    }
    if (std::regex_match(text, m, both)) {
        double v = m[3].matched ? std::stod(m[3]) : 1.0;
        return {std::stod(m[1]), m[2] == "-" ? -v : v};
    }
    throw UsageError("malformed complex number '" + text + "'");
}

ExpPoly parse_exppoly_json(const std::string& s) {
    json j;
    try {
        j = json::parse(s);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("--f: ") + e.what());
    }
    if (!j.is_array()) throw UsageError("--f: expected an array of [a, k, lambda] triples");
    std::vector<expfam::Term> terms;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3 || !t[1].is_number_integer())
            throw UsageError("--f: each term must be [a, k, lambda] with integer k");
        terms.push_back({complex_from_json(t[0]), t[1].get<int>(), complex_from_json(t[2])});
    }
    try {
        return ExpPoly(terms);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--f: ") + e.what());
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::map<CLI::App*, Given> given;
    CLI::App app{"Hardy-Sobolev H2^(n) numerics: kernels, verification suites and symbol classification", "hardy"};
    app.require_subcommand(1);

    using Handler = std::function<int(Context&, json&, std::string&)>;
    std::map<std::string, Handler> handlers;
    auto plain = [](int (*fn)(Context&, json&)) { return [fn](Context& c, json& r, std::string&) { return fn(c, r); }; };

    auto* kernel_cmd = app.add_subcommand("kernel", "Reproducing kernel of H2^(n)")->require_subcommand(1);
    auto* verify_cmd = app.add_subcommand("verify", "Verification suites")->require_subcommand(1);
    auto* symbol_cmd = app.add_subcommand("symbol", "Composition-operator symbols")->require_subcommand(1);

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h) {
        auto* sub = parent->add_subcommand(name, desc);
        const std::string command = parent->get_name() + " " + name;
        add_common(sub, cfg, given, command);
        handlers[command] = std::move(h);
        return sub;
    };
    leaf(kernel_cmd, "eval", "Evaluate K_n(z, w)", plain(kernel_eval_cmd));
    leaf(kernel_cmd, "norm", "Norm of K_{n,z} with the sandwich bounds", plain(kernel_norm_cmd));
    leaf(kernel_cmd, "sweep", "Diagonal, norm and bounds over a log-polar grid", kernel_sweep_cmd);
    leaf(kernel_cmd, "gram", "Gram matrix and its minimum eigenvalue", plain(kernel_gram_cmd));
    leaf(verify_cmd, "paley-wiener", "Time and boundary norms agree", plain(verify_paley_wiener));
    leaf(verify_cmd, "inner-product", "Inner-product identity", plain(verify_inner_product));
    leaf(verify_cmd, "bounds", "Kernel norm sandwich bounds", plain(verify_bounds));
    leaf(verify_cmd, "reproduce", "Reproducing property of the kernel", plain(verify_reproduce));
    leaf(verify_cmd, "cayley", "Norm equality through the Cayley transform", plain(verify_cayley));
    leaf(verify_cmd, "hardy-ineq", "Hardy inequality and point bound", plain(verify_hardy));
    for (const char* name : {"parse", "classify", "jury"}) {
        Handler h = std::string(name) == "parse"      ? plain(symbol_parse_cmd)
                    : std::string(name) == "classify" ? plain(symbol_classify_cmd)
                                                      : plain(symbol_jury_cmd);
        auto* sub = leaf(symbol_cmd, name, std::string("Symbol ") + name, h);
        sub->add_option("expr", cfg.expr, "Symbol expression in z")->required();
        if (std::string(name) == "jury") {
            sub->add_option("--M", cfg.M, "Norm candidate M")->check(CLI::NonNegativeNumber);
            sub->add_flag("--search", cfg.search, "Search for a negative-eigenvalue witness");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    CLI::App* executed = nullptr;
    for (auto* group : {kernel_cmd, verify_cmd, symbol_cmd})
        for (auto* s : group->get_subcommands())
            if (s->parsed()) executed = s;
    Context ctx{cfg, executed ? given[executed] : Given{}, {}};
    if (ctx.cfg.command == "kernel sweep" && !(ctx.given.format && ctx.given.format->count())) ctx.cfg.format = "csv";

    json report = header(ctx);
    std::string csv;
    int code = kExitOk;
    try {
        apply_thread_env();
        if (!cfg.config.empty()) {
            std::ifstream in(cfg.config);
            if (!in) throw UsageError("cannot open config file '" + cfg.config + "'");
            ctx.quad = quad::parse_quad_config(in, ctx.quad);
        }
        if (given[executed].tol && given[executed].tol->count() && ctx.cfg.command.rfind("kernel", 0) == 0) {
            ctx.quad.rel_tol = cfg.tol;
            ctx.quad.abs_tol = cfg.tol;
        }
        ctx.quad.validate();
        code = handlers.at(ctx.cfg.command)(ctx, report, csv);
    } catch (const UsageError& e) {
        err << "hardy: " << e.what() << "\n";
        return kExitUsage;
    } catch (const symbols::SyntaxError& e) {
        err << "hardy " << ctx.cfg.command << ": syntax error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "hardy " << ctx.cfg.command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "hardy " << ctx.cfg.command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "hardy " << ctx.cfg.command << ": numerical failure: " << e.what() << "\n";
        return kExitVerificationFailed;
    }

    std::string text;
    if (!csv.empty()) text = csv;
    else if (ctx.cfg.format == "csv") text = csv_of(report);
    else text = report.dump(2) + "\n";

    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "hardy: cannot write '" << cfg.out << "'\n";
            return kExitUsage;
        }
        f << text;
    }
    return code;
}

}  // namespace hardy::cli
