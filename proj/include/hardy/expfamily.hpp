#pragma once

#include <vector>

#include "hardy/common.hpp"

namespace hardy::expfam {

// a * t^k * exp(-lambda t) in the time domain, a * k!/(z+lambda)^{k+1} in frequency.
struct Term {
    cplx a;
    int k;
    cplx lambda;
    bool operator==(const Term&) const = default;
};

// Terms are sorted by (k, lambda), equal (k, lambda) pairs merged and exact zeros dropped.
class ExpPoly {
public:
    ExpPoly() = default;
    explicit ExpPoly(std::vector<Term> terms);
    static ExpPoly exponential(cplx lambda, cplx a = 1.0);
    static ExpPoly monomial(cplx a, int k, cplx lambda);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    cplx operator()(double t) const;
    // 1 / min Re(lambda); the slowest exponential rate in the sum.
    double decay_scale() const;

    ExpPoly operator+(const ExpPoly& o) const;
    ExpPoly operator-(const ExpPoly& o) const;
    ExpPoly operator*(cplx s) const;
    friend ExpPoly operator*(cplx s, const ExpPoly& f) { return f * s; }
    bool operator==(const ExpPoly&) const = default;

    // t^m f(t)
    ExpPoly times_power(int m) const;

private:
    std::vector<Term> terms_;
};

// Sum of a * k!/(z+lambda)^{k+1}; same canonical form as ExpPoly.
class RationalComb {
public:
    RationalComb() = default;
    explicit RationalComb(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    cplx operator()(cplx z) const;
    // Largest |lambda|: the frequency scale of the boundary values.
    double frequency_scale() const;

    RationalComb operator+(const RationalComb& o) const;
    RationalComb operator-(const RationalComb& o) const;
    RationalComb operator*(cplx s) const;
    friend RationalComb operator*(cplx s, const RationalComb& f) { return f * s; }
    bool operator==(const RationalComb&) const = default;

    // z F(z). Requires every term to have k >= 1 so the result stays in the class.
    RationalComb times_z() const;

private:
    std::vector<Term> terms_;
};

ExpPoly derivative(const ExpPoly& f, int m = 1);
RationalComb derivative(const RationalComb& f, int m = 1);

// Termwise: t^k e^{-lambda t} maps to k!/(z+lambda)^{k+1}.
RationalComb laplace(const ExpPoly& f);
ExpPoly inverse_laplace(const RationalComb& f);

// <f,g>_(n) = int_0^inf f^{(n)} conj(g^{(n)}) t^{2n} dt, summed termwise from the
// parameter derivatives of (2n)! (lambda nu)^n / (lambda+nu)^{2n+1}, nu = conj(mu).
cplx inner_product_n(const ExpPoly& f, const ExpPoly& g, int n);
double norm_n(const ExpPoly& f, int n);

// Plain L^2(0,inf) product from the moments (j+k)!/(lambda+nu)^{j+k+1}.
cplx l2_inner_product(const ExpPoly& f, const ExpPoly& g);

}  // namespace hardy::expfam
