#include <cctype>
#include <cmath>
#include <sstream>

#include "hardy/symbols.hpp"

namespace hardy::symbols {

namespace {

void require_compatible(const Jet& a, const Jet& b) {
    if (a.order() != b.order()) throw std::invalid_argument("jet: order mismatch");
    if (a.base() != b.base()) throw std::invalid_argument("jet: base point mismatch");
}

bool on_cut(cplx u) { return u.imag() == 0.0 && u.real() <= 0.0; }

bool small_integer(double a) { return a == std::floor(a) && a >= 1 && a <= 64; }

cplx int_pow(cplx u, int m) {
    cplx r = 1.0;
    for (int i = 0; i < m; ++i) r *= u;
    return r;
}

// sum_k g[k] (u - u0)^k, truncated at u's order
Jet apply_series(const Jet& u, const std::vector<cplx>& g) {
    std::vector<cplx> d = u.coefficients();
    d[0] = 0.0;
    const Jet delta(u.base(), d);
    Jet r = Jet::constant(u.base(), g.back(), u.order());
    for (int k = static_cast<int>(g.size()) - 2; k >= 0; --k) r = r * delta + Jet::constant(u.base(), g[k], u.order());
    return r;
}

}  // namespace

Jet::Jet(cplx z0, std::vector<cplx> coefficients) : z0_(z0), c_(std::move(coefficients)) {
    if (c_.empty()) throw std::invalid_argument("jet: needs at least one coefficient");
}

Jet Jet::constant(cplx z0, cplx value, int order) {
    std::vector<cplx> c(order + 1);
    c[0] = value;
    return Jet(z0, std::move(c));
}

Jet Jet::variable(cplx z0, int order) {
    std::vector<cplx> c(order + 1);
    c[0] = z0;
    if (order >= 1) c[1] = 1.0;
    return Jet(z0, std::move(c));
}

cplx Jet::derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c_.at(k);
}

Jet Jet::operator+(const Jet& o) const {
    require_compatible(*this, o);
    std::vector<cplx> r(c_);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += o.c_[k];
    return Jet(z0_, std::move(r));
}

Jet Jet::operator-(const Jet& o) const {
    require_compatible(*this, o);
    std::vector<cplx> r(c_);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= o.c_[k];
    return Jet(z0_, std::move(r));
}

Jet Jet::operator-() const {
    std::vector<cplx> r(c_);
    for (auto& v : r) v = -v;
    return Jet(z0_, std::move(r));
}

Jet Jet::operator*(const Jet& o) const {
    require_compatible(*this, o);
    const std::size_t m = c_.size();
    std::vector<cplx> r(m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j <= k; ++j) r[k] += c_[j] * o.c_[k - j];
    return Jet(z0_, std::move(r));
}

Jet Jet::operator/(const Jet& o) const {
    require_compatible(*this, o);
    if (o.c_[0] == cplx{}) throw std::domain_error("jet: division by a jet with zero value");
    const std::size_t m = c_.size();
    std::vector<cplx> q(m);
    for (std::size_t k = 0; k < m; ++k) {
        cplx s = c_[k];
        for (std::size_t j = 1; j <= k; ++j) s -= o.c_[j] * q[k - j];
        q[k] = s / o.c_[0];
    }
    return Jet(z0_, std::move(q));
}

Jet compose(const Jet& outer, const Jet& inner) {
    const cplx v = inner.value();
    if (std::abs(outer.base() - v) > 1e-12 * (1.0 + std::abs(v)))
        throw std::invalid_argument("compose: outer jet must be based at the inner value");
    if (outer.order() < inner.order()) throw std::invalid_argument("compose: outer jet order too low");
    std::vector<cplx> g(outer.coefficients().begin(), outer.coefficients().begin() + inner.order() + 1);
    return apply_series(inner, g);
}

Jet pow(const Jet& u, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("pow: exponent must be positive");
    if (small_integer(alpha)) {
        Jet r = Jet::constant(u.base(), 1.0, u.order());
        for (int i = 0; i < static_cast<int>(alpha); ++i) r = r * u;
        return r;
    }
    const cplx u0 = u.value();
    if (on_cut(u0)) throw std::domain_error("pow: argument on the branch cut");
    std::vector<cplx> g(u.order() + 1);
    g[0] = std::exp(alpha * std::log(u0));
    // binom(alpha, k) u0^{alpha-k}
    for (int k = 1; k <= u.order(); ++k) g[k] = g[k - 1] * (alpha - k + 1) / (double(k) * u0);
    return apply_series(u, g);
}

Jet sqrt(const Jet& u) {
    const cplx u0 = u.value();
    if (on_cut(u0)) throw std::domain_error("sqrt: argument on the branch cut");
    std::vector<cplx> g(u.order() + 1);
    g[0] = std::sqrt(u0);
    for (int k = 1; k <= u.order(); ++k) g[k] = g[k - 1] * (0.5 - k + 1) / (double(k) * u0);
    return apply_series(u, g);
}

Jet log1p(const Jet& u) {
    const cplx w = 1.0 + u.value();
    if (on_cut(w)) throw std::domain_error("log1p: argument on the branch cut");
    std::vector<cplx> g(u.order() + 1);
    g[0] = std::log(w);
    cplx p = 1.0;
    for (int k = 1; k <= u.order(); ++k) {
        p *= w;
        g[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (double(k) * p);
    }
    return apply_series(u, g);
}

// ---- expression tree

std::shared_ptr<const Expr> Expr::make_var() { return std::make_shared<const Expr>(); }

std::shared_ptr<const Expr> Expr::make_constant(cplx c) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::constant;
    e->value_ = c;
    return e;
}

std::shared_ptr<const Expr> Expr::make_unary(Kind k, std::shared_ptr<const Expr> a, double alpha) {
    if (k != Kind::neg && k != Kind::pow && k != Kind::sqrt && k != Kind::log1p)
        throw std::invalid_argument("make_unary: not a unary node");
    if (k == Kind::pow && !(alpha > 0.0)) throw std::domain_error("pow: exponent must be positive");
    auto e = std::make_shared<Expr>();
    e->kind_ = k;
    e->a_ = std::move(a);
    e->alpha_ = alpha;
    return e;
}

std::shared_ptr<const Expr> Expr::make_binary(Kind k, std::shared_ptr<const Expr> a, std::shared_ptr<const Expr> b) {
    if (k != Kind::add && k != Kind::sub && k != Kind::mul && k != Kind::div)
        throw std::invalid_argument("make_binary: not a binary node");
    auto e = std::make_shared<Expr>();
    e->kind_ = k;
    e->a_ = std::move(a);
    e->b_ = std::move(b);
    return e;
}

cplx Expr::operator()(cplx z) const {
    switch (kind_) {
        case Kind::var: return z;
        case Kind::constant: return value_;
        case Kind::add: return (*a_)(z) + (*b_)(z);
        case Kind::sub: return (*a_)(z) - (*b_)(z);
        case Kind::mul: return (*a_)(z) * (*b_)(z);
        case Kind::div: {
            cplx d = (*b_)(z);
            if (d == cplx{}) throw std::domain_error("symbol: division by zero");
            return (*a_)(z) / d;
        }
        case Kind::neg: return -(*a_)(z);
        case Kind::pow: {
            cplx u = (*a_)(z);
            if (small_integer(alpha_)) return int_pow(u, static_cast<int>(alpha_));
            if (on_cut(u)) throw std::domain_error("pow: argument on the branch cut");
            return std::exp(alpha_ * std::log(u));
        }
        case Kind::sqrt: {
            cplx u = (*a_)(z);
            if (u.imag() == 0.0 && u.real() < 0.0) throw std::domain_error("sqrt: argument on the branch cut");
            return std::sqrt(u);
        }
        case Kind::log1p: {
            cplx w = 1.0 + (*a_)(z);
            if (on_cut(w)) throw std::domain_error("log1p: argument on the branch cut");
            return std::log(w);
        }
    }
    return {};
}

Jet Expr::jet(cplx z, int order) const {
    switch (kind_) {
        case Kind::var: return Jet::variable(z, order);
        case Kind::constant: return Jet::constant(z, value_, order);
        case Kind::add: return a_->jet(z, order) + b_->jet(z, order);
        case Kind::sub: return a_->jet(z, order) - b_->jet(z, order);
        case Kind::mul: return a_->jet(z, order) * b_->jet(z, order);
        case Kind::div: return a_->jet(z, order) / b_->jet(z, order);
        case Kind::neg: return -a_->jet(z, order);
        case Kind::pow: return symbols::pow(a_->jet(z, order), alpha_);
        case Kind::sqrt: return symbols::sqrt(a_->jet(z, order));
        case Kind::log1p: return symbols::log1p(a_->jet(z, order));
    }
    throw std::logic_error("unreachable");
}

std::string Expr::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::var: return "z";
        case Kind::constant:
            if (value_.imag() == 0.0) os << value_.real();
            else if (value_.real() == 0.0) os << value_.imag() << "i";
            else os << "(" << value_.real() << (value_.imag() < 0 ? "-" : "+") << std::abs(value_.imag()) << "i)";
            return os.str();
        case Kind::add: return "(" + a_->to_string() + " + " + b_->to_string() + ")";
        case Kind::sub: return "(" + a_->to_string() + " - " + b_->to_string() + ")";
        case Kind::mul: return "(" + a_->to_string() + " * " + b_->to_string() + ")";
        case Kind::div: return "(" + a_->to_string() + " / " + b_->to_string() + ")";
        case Kind::neg: return "(-" + a_->to_string() + ")";
        case Kind::pow: os << a_->to_string() << "^" << alpha_; return os.str();
        case Kind::sqrt: return "sqrt(" + a_->to_string() + ")";
        case Kind::log1p: return "log1p(" + a_->to_string() + ")";
    }
    return {};
}

// ---- parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::shared_ptr<const Expr> run() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::shared_ptr<const Expr> expr() {
        auto e = term();
        for (;;) {
            if (accept('+')) e = Expr::make_binary(Expr::Kind::add, e, term());
            else if (accept('-')) e = Expr::make_binary(Expr::Kind::sub, e, term());
            else return e;
        }
    }

    std::shared_ptr<const Expr> term() {
        auto e = factor();
        for (;;) {
            if (accept('*')) e = Expr::make_binary(Expr::Kind::mul, e, factor());
            else if (accept('/')) e = Expr::make_binary(Expr::Kind::div, e, factor());
            else return e;
        }
    }

    std::shared_ptr<const Expr> factor() {
        if (accept('-')) return Expr::make_unary(Expr::Kind::neg, factor());
        auto e = atom();
        if (accept('^')) {
            skip();
            const std::size_t at = pos_;
            double sign = 1.0;
            if (accept('-')) sign = -1.0;
            else accept('+');
            skip();
            double alpha = sign * number();
            if (!(alpha > 0.0)) throw SyntaxError("exponent must be positive", at);
            e = Expr::make_unary(Expr::Kind::pow, e, alpha);
        }
        return e;
    }

    double number() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ > start) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        if (pos_ == start) fail("expected a number");
        const std::string tok = s_.substr(start, pos_ - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw SyntaxError("malformed number '" + tok + "'", start);
        return v;
    }

    std::shared_ptr<const Expr> atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = number();
            // imaginary literal: digits immediately followed by a lone 'i'
            if (pos_ < s_.size() && s_[pos_] == 'i' &&
                (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
                ++pos_;
                return Expr::make_constant({0.0, v});
            }
            return Expr::make_constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "z") return Expr::make_var();
            if (id == "i") return Expr::make_constant({0.0, 1.0});
            if (id == "sqrt" || id == "log1p") {
                expect('(');
                auto arg = expr();
                expect(')');
                return Expr::make_unary(id == "sqrt" ? Expr::Kind::sqrt : Expr::Kind::log1p, arg);
            }
            throw SyntaxError("unsupported construct '" + id + "'", start);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

SymbolExpr parse(const std::string& text) { return SymbolExpr(Parser(text).run(), text); }

Jet eval_jet(const SymbolExpr& e, cplx z, int order) {
    if (order < 0 || order > kMaxJetOrder)
        throw std::out_of_range("eval_jet: order must lie in 0.." + std::to_string(kMaxJetOrder));
    require_right_half_plane(z, "eval_jet: z");
    return e.root().jet(z, order);
}

}  // namespace hardy::symbols
