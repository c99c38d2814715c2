#include "hardy/expfamily.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hardy::expfam {

namespace {

void validate_terms(const std::vector<Term>& terms, const char* who) {
    for (const Term& t : terms) {
        if (t.k < 0) throw std::invalid_argument(std::string(who) + ": negative power of t");
        if (!(t.lambda.real() > 0.0)) {
            std::ostringstream os;
            os << who << ": rate must have positive real part, got (" << t.lambda.real() << ", " << t.lambda.imag()
               << ")";
            throw std::invalid_argument(os.str());
        }
        if (!std::isfinite(t.a.real()) || !std::isfinite(t.a.imag()))
            throw std::invalid_argument(std::string(who) + ": non-finite coefficient");
    }
}

bool term_less(const Term& x, const Term& y) {
    if (x.k != y.k) return x.k < y.k;
    if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
    return x.lambda.imag() < y.lambda.imag();
}

std::vector<Term> canonical(std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(), term_less);
    std::vector<Term> out;
    for (const Term& t : terms) {
        if (!out.empty() && out.back().k == t.k && out.back().lambda == t.lambda) out.back().a += t.a;
        else out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.a == cplx{}; });
    return out;
}

std::vector<Term> concat(const std::vector<Term>& a, const std::vector<Term>& b, cplx sb) {
    std::vector<Term> r = a;
    for (Term t : b) {
        t.a *= sb;
        r.push_back(t);
    }
    return r;
}

double factorial_d(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace

ExpPoly::ExpPoly(std::vector<Term> terms) {
    validate_terms(terms, "ExpPoly");
    terms_ = canonical(std::move(terms));
}

ExpPoly ExpPoly::exponential(cplx lambda, cplx a) { return ExpPoly({{a, 0, lambda}}); }
ExpPoly ExpPoly::monomial(cplx a, int k, cplx lambda) { return ExpPoly({{a, k, lambda}}); }

cplx ExpPoly::operator()(double t) const {
    cplx s{};
    for (const Term& x : terms_) s += x.a * std::pow(t, x.k) * std::exp(-x.lambda * t);
    return s;
}

double ExpPoly::decay_scale() const {
    double m = std::numeric_limits<double>::infinity();
    for (const Term& x : terms_) m = std::min(m, x.lambda.real());
    return terms_.empty() ? 1.0 : 1.0 / m;
}

ExpPoly ExpPoly::operator+(const ExpPoly& o) const { return ExpPoly(concat(terms_, o.terms_, 1.0)); }
ExpPoly ExpPoly::operator-(const ExpPoly& o) const { return ExpPoly(concat(terms_, o.terms_, -1.0)); }
ExpPoly ExpPoly::operator*(cplx s) const { return ExpPoly(concat({}, terms_, s)); }

ExpPoly ExpPoly::times_power(int m) const {
    if (m < 0) throw std::invalid_argument("times_power: negative exponent");
    std::vector<Term> r = terms_;
    for (Term& t : r) t.k += m;
    return ExpPoly(std::move(r));
}

RationalComb::RationalComb(std::vector<Term> terms) {
    validate_terms(terms, "RationalComb");
    terms_ = canonical(std::move(terms));
}

cplx RationalComb::operator()(cplx z) const {
    cplx s{};
    for (const Term& x : terms_) s += x.a * factorial_d(x.k) / std::pow(z + x.lambda, x.k + 1);
    return s;
}

double RationalComb::frequency_scale() const {
    double m = 0.0;
    for (const Term& x : terms_) m = std::max(m, std::abs(x.lambda));
    return terms_.empty() ? 1.0 : m;
}

RationalComb RationalComb::operator+(const RationalComb& o) const {
    return RationalComb(concat(terms_, o.terms_, 1.0));
}
RationalComb RationalComb::operator-(const RationalComb& o) const {
    return RationalComb(concat(terms_, o.terms_, -1.0));
}
RationalComb RationalComb::operator*(cplx s) const { return RationalComb(concat({}, terms_, s)); }

RationalComb RationalComb::times_z() const {
    // z k!/(z+l)^{k+1} = k (k-1)!/(z+l)^k - l k!/(z+l)^{k+1}
    std::vector<Term> r;
    for (const Term& t : terms_) {
        if (t.k == 0) throw std::domain_error("times_z: z/(z+lambda) is not in the rational class");
        r.push_back({t.a * double(t.k), t.k - 1, t.lambda});
        r.push_back({-t.lambda * t.a, t.k, t.lambda});
    }
    return RationalComb(std::move(r));
}

ExpPoly derivative(const ExpPoly& f, int m) {
    if (m < 0) throw std::invalid_argument("derivative: negative order");
    std::vector<Term> cur = f.terms();
    for (int step = 0; step < m; ++step) {
        std::vector<Term> next;
        for (const Term& t : cur) {
            if (t.k > 0) next.push_back({t.a * double(t.k), t.k - 1, t.lambda});
            next.push_back({-t.lambda * t.a, t.k, t.lambda});
        }
        cur = canonical(std::move(next));
    }
    return ExpPoly(std::move(cur));
}

RationalComb derivative(const RationalComb& f, int m) {
    if (m < 0) throw std::invalid_argument("derivative: negative order");
    std::vector<Term> r = f.terms();
    for (Term& t : r) {
        // d/dz k!/(z+l)^{k+1} = -(k+1)!/(z+l)^{k+2}
        if (m % 2 == 1) t.a = -t.a;
        t.k += m;
    }
    return RationalComb(std::move(r));
}

RationalComb laplace(const ExpPoly& f) { return RationalComb(f.terms()); }
ExpPoly inverse_laplace(const RationalComb& f) { return ExpPoly(f.terms()); }

namespace {

// (p)_m = p (p+1) ... (p+m-1)
double rising(double p, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= p + i;
    return r;
}

// n!/(n-a)!
double falling(int n, int a) {
    double r = 1.0;
    for (int i = 0; i < a; ++i) r *= n - i;
    return r;
}

double binom_d(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// <t^j e_lambda, t^k e_mu>_(n) with nu = conj(mu):
// (-1)^{j+k} d^j/dlambda^j d^k/dnu^k [ (2n)! lambda^n nu^n (lambda+nu)^{-(2n+1)} ].
cplx pair_product(int j, int k, cplx lambda, cplx nu, int n) {
    const int p = 2 * n + 1;
    const cplx s = lambda + nu;
    cplx acc{};
    for (int a = 0; a <= std::min(j, n); ++a) {
        cplx la = falling(n, a) * std::pow(lambda, n - a) * binom_d(j, a);
        for (int b = 0; b <= std::min(k, n); ++b) {
            cplx nb = falling(n, b) * std::pow(nu, n - b) * binom_d(k, b);
            const int r = (j - a) + (k - b);
            // d^r (lambda+nu)^{-p} = (-1)^r (p)_r (lambda+nu)^{-p-r}
            cplx d = rising(p, r) / std::pow(s, p + r);
            if (r % 2 == 1) d = -d;
            acc += la * nb * d;
        }
    }
    if ((j + k) % 2 == 1) acc = -acc;
    return factorial_d(2 * n) * acc;
}

}  // namespace

cplx inner_product_n(const ExpPoly& f, const ExpPoly& g, int n) {
    if (n < 0) throw std::invalid_argument("inner_product_n: n must be nonnegative");
    cplx s{};
    for (const Term& x : f.terms())
        for (const Term& y : g.terms()) s += x.a * std::conj(y.a) * pair_product(x.k, y.k, x.lambda, std::conj(y.lambda), n);
    return s;
}

double norm_n(const ExpPoly& f, int n) { return std::sqrt(std::max(0.0, inner_product_n(f, f, n).real())); }

cplx l2_inner_product(const ExpPoly& f, const ExpPoly& g) {
    cplx s{};
    for (const Term& x : f.terms())
        for (const Term& y : g.terms()) {
            const int m = x.k + y.k;
            s += x.a * std::conj(y.a) * factorial_d(m) / std::pow(x.lambda + std::conj(y.lambda), m + 1);
        }
    return s;
}

}  // namespace hardy::expfam
