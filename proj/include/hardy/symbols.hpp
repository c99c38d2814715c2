#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/common.hpp"

namespace hardy::symbols {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Truncated Taylor series at z0: c[k] = phi^{(k)}(z0)/k!.
class Jet {
public:
    Jet(cplx z0, std::vector<cplx> coefficients);
    static Jet constant(cplx z0, cplx value, int order);
    static Jet variable(cplx z0, int order);

    cplx base() const { return z0_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }
    cplx coefficient(int k) const { return c_.at(k); }
    const std::vector<cplx>& coefficients() const { return c_; }
    cplx value() const { return c_[0]; }
    // phi^{(k)}(z0) = k! c_k
    cplx derivative(int k) const;

    Jet operator+(const Jet& o) const;
    Jet operator-(const Jet& o) const;
    Jet operator*(const Jet& o) const;
    Jet operator/(const Jet& o) const;
    Jet operator-() const;

private:
    cplx z0_;
    std::vector<cplx> c_;
};

// outer(inner(z)), with outer based at inner.value(); the result is based at inner.base().
Jet compose(const Jet& outer, const Jet& inner);
// Principal branches; the argument must avoid the branch cut.
Jet pow(const Jet& u, double alpha);
Jet sqrt(const Jet& u);
Jet log1p(const Jet& u);

inline constexpr int kMaxJetOrder = 12;

class Expr {
public:
    enum class Kind { var, constant, add, sub, mul, div, neg, pow, sqrt, log1p };

    Kind kind() const { return kind_; }
    cplx operator()(cplx z) const;
    Jet jet(cplx z, int order) const;
    std::string to_string() const;

    static std::shared_ptr<const Expr> make_var();
    static std::shared_ptr<const Expr> make_constant(cplx c);
    static std::shared_ptr<const Expr> make_unary(Kind k, std::shared_ptr<const Expr> a, double alpha = 0.0);
    static std::shared_ptr<const Expr> make_binary(Kind k, std::shared_ptr<const Expr> a, std::shared_ptr<const Expr> b);

    cplx constant_value() const { return value_; }
    double exponent() const { return alpha_; }
    const Expr* left() const { return a_.get(); }
    const Expr* right() const { return b_.get(); }

private:
    Kind kind_ = Kind::var;
    cplx value_{};
    double alpha_ = 0.0;
    std::shared_ptr<const Expr> a_, b_;
};

// Immutable parsed symbol; cheap to copy.
class SymbolExpr {
public:
    explicit SymbolExpr(std::shared_ptr<const Expr> root, std::string text = {})
        : root_(std::move(root)), text_(std::move(text)) {}
    cplx operator()(cplx z) const { return (*root_)(z); }
    const Expr& root() const { return *root_; }
    const std::string& text() const { return text_; }
    std::string to_string() const { return root_->to_string(); }

private:
    std::shared_ptr<const Expr> root_;
    std::string text_;
};

// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := ['-'] atom ['^' real]; atom := 'z' | number ['i'] | 'i' | 'sqrt(' expr ')' | 'log1p(' expr ')' | '(' expr ')'
SymbolExpr parse(const std::string& text);

Jet eval_jet(const SymbolExpr& e, cplx z, int order);

// Log-polar grid |z| in [r_min, r_max] (geometric), arg z in [-(pi/2-margin), pi/2-margin].
struct GridSpec {
    double r_min = 1e-4;
    double r_max = 1e6;
    int n_r = 41;
    double theta_margin = 1e-3;
    int n_theta = 33;
    int refinement_passes = 2;
    double infinity_threshold = 1e8;
    void validate() const;
    std::vector<cplx> points() const;
};

struct SupEstimate {
    double value = 0.0;  // +inf when declared infinite
    cplx argmax{};
    bool infinite = false;
    long evaluations = 0;
};

// Sampled supremum of a nonnegative function on the half-plane: grid, ray extension to
// |z| -> 0 and |z| -> inf, then pattern-search passes around the argmax that may approach
// Re z -> 0+. Declared infinite once the running max exceeds the threshold and still grows.
SupEstimate grid_supremum(const std::function<double(cplx)>& f, const GridSpec& grid = {});
namespace serial {
SupEstimate grid_supremum(const std::function<double(cplx)>& f, const GridSpec& grid = {});
}

struct SelfmapWitness {
    bool ok = true;
    std::optional<cplx> counterexample;  // the violating grid point nearest z = 1
};
SelfmapWitness selfmap_witness(const SymbolExpr& e, const GridSpec& grid = {});

// sup Re z / Re phi(z)
SupEstimate angular_derivative(const SymbolExpr& e, const GridSpec& grid = {});
// sup |z| / |phi(z)|
SupEstimate radial_sup(const SymbolExpr& e, const GridSpec& grid = {});
// sup |z^k phi^{(k)}(z) / phi(z)|, k = 1..n
std::vector<SupEstimate> nbc_suprema(const SymbolExpr& e, int n, const GridSpec& grid = {});

// n-th derivative of f o phi at phijet.base() from the partition table.
cplx faa_di_bruno(const Jet& fjet, const Jet& phijet, int n);

// Minimum eigenvalue of [M^2 K_n(z_i,z_j) - conj(psi(z_i)) psi(z_j) K_n(phi(z_i),phi(z_j))].
double jury_min_eig(const SymbolExpr& e, int n, double M, const std::vector<cplx>& points,
                    const std::function<cplx(cplx)>& psi = {});
Eigen::MatrixXcd jury_matrix(const SymbolExpr& e, int n, double M, const std::vector<cplx>& points,
                             const std::function<cplx(cplx)>& psi = {});

struct JuryWitness {
    double min_eig = 0.0;
    std::vector<cplx> points;  // the set that produced min_eig
    int rounds = 0;
};
// Seeded random sets pushed outward in |z| and toward the imaginary axis; keeps the most negative.
JuryWitness jury_witness_search(const SymbolExpr& e, int n, double M, std::uint64_t seed, int set_size = 6,
                                int rounds = 8);

// sup_x ||K_{n,phi(x)}|| / ||K_{n,x}||, a lower bound for the norm of C_phi.
double caughran_schwartz_bound(const SymbolExpr& e, int n, const std::vector<cplx>& points);

enum class VerdictH2 { bounded, unbounded };
enum class VerdictHn { necessary_failed, sufficient_passed, inconclusive };
const char* to_string(VerdictH2 v);
const char* to_string(VerdictHn v);

struct SymbolReport {
    int n = 0;
    bool selfmap_witnessed = false;
    std::optional<cplx> selfmap_counterexample;
    double phi_prime_infinity = 0.0;
    double radial_sup = 0.0;
    std::vector<double> nbc;
    VerdictH2 verdict_H2 = VerdictH2::unbounded;
    VerdictHn verdict_Hn = VerdictHn::inconclusive;
    double h2_norm = INFINITY;
    GridSpec grid;
};
SymbolReport classify(const SymbolExpr& e, int n, const GridSpec& grid = {});

}  // namespace hardy::symbols
