#include "hardy/special.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace hardy::special {

cplx laguerre(int n, cplx x) {
    if (n < 0) throw std::invalid_argument("laguerre: degree must be nonnegative");
    cplx p0 = 1.0;
    if (n == 0) return p0;
    cplx p1 = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        cplx p2 = ((2.0 * k + 1.0 - x) * p1 - double(k) * p0) / double(k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

cplx legendre(int n, cplx x) {
    if (n < 0) throw std::invalid_argument("legendre: degree must be nonnegative");
    cplx p0 = 1.0;
    if (n == 0) return p0;
    cplx p1 = x;
    for (int k = 1; k < n; ++k) {
        cplx p2 = ((2.0 * k + 1.0) * x * p1 - double(k) * p0) / double(k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_leading_coefficient(int n) {
    if (n < 0) throw std::invalid_argument("legendre_leading_coefficient: degree must be nonnegative");
    // prod_{k=1}^{n} (2k-1)/k, which equals (2n)!/(2^n (n!)^2)
    double c = 1.0;
    for (int k = 1; k <= n; ++k) c *= (2.0 * k - 1.0) / k;
    return c;
}

namespace {

__extension__ using i128 = __int128;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in exact arithmetic");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in exact arithmetic");
    return r;
}

}  // namespace

std::int64_t factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    std::int64_t r = 1;
    for (int k = 2; k <= n; ++k) r = checked_mul(r, k);
    return r;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n-k+i) / i is exact at every step
        i128 t = static_cast<i128>(r) * (n - k + i) / i;
        if (t > INT64_MAX) throw std::overflow_error("binomial: overflow");
        r = static_cast<std::int64_t>(t);
    }
    return r;
}

IntMatrix::IntMatrix(int size) : size_(size), a_(static_cast<std::size_t>(size) * size, 0) {
    if (size < 0) throw std::invalid_argument("IntMatrix: negative size");
}

IntMatrix IntMatrix::identity(int size) {
    IntMatrix m(size);
    for (int i = 0; i < size; ++i) m(i, i) = 1;
    return m;
}

std::vector<std::int64_t> IntMatrix::row_sums() const {
    std::vector<std::int64_t> s(size_, 0);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) s[i] = checked_add(s[i], (*this)(i, j));
    return s;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multiply: size mismatch");
    const int n = a.size();
    IntMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            i128 acc = 0;
            for (int k = 0; k < n; ++k) {
                i128 term = static_cast<i128>(a(i, k)) * b(k, j);
                acc += term;
                // a single int64 product fits in 127 bits; guard the running sum
                if (acc > (static_cast<i128>(1) << 125) || acc < -(static_cast<i128>(1) << 125))
                    throw std::overflow_error("multiply: accumulator overflow");
            }
            if (acc > INT64_MAX || acc < INT64_MIN) throw std::overflow_error("multiply: entry exceeds int64");
            c(i, j) = static_cast<std::int64_t>(acc);
        }
    return c;
}

namespace {

void check_cn_order(int n) {
    if (n < 0 || n > kMaxCnOrder)
        throw std::out_of_range("C_n matrix: order must lie in [0, " + std::to_string(kMaxCnOrder) + "]");
}

}  // namespace

CnMatrix cn_matrix(int n) {
    check_cn_order(n);
    CnMatrix c(n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j) {
            // i!/j! = (j+1)(j+2)...i
            std::int64_t ratio = 1;
            for (int k = j + 1; k <= i; ++k) ratio = checked_mul(ratio, k);
            c(i, j) = checked_mul(binomial(i, j), ratio);
        }
    return c;
}

CnMatrix cn_inverse(int n) {
    CnMatrix c = cn_matrix(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j)
            if ((i + j) % 2 == 1) c(i, j) = -c(i, j);
    return c;
}

BellPartitionTable bell_partitions(int n) {
    if (n < 1 || n > kMaxBellOrder)
        throw std::out_of_range("bell_partitions: n must lie in [1, " + std::to_string(kMaxBellOrder) + "]");
    BellPartitionTable table{n, {}};
    std::vector<int> m(n, 0);
    const std::int64_t nfact = factorial(n);
    // Enumerate multiplicities m_j for part sizes j = n..1.
    std::function<void(int, int)> rec = [&](int j, int remaining) {
        if (j == 0) {
            if (remaining != 0) return;
            std::int64_t denom = 1;
            int k = 0;
            for (int p = 1; p <= n; ++p) {
                int mp = m[p - 1];
                k += mp;
                denom = checked_mul(denom, factorial(mp));
                for (int r = 0; r < mp; ++r) denom = checked_mul(denom, factorial(p));
            }
            table.terms.push_back({nfact / denom, k, m});
            return;
        }
        for (int c = remaining / j; c >= 0; --c) {
            m[j - 1] = c;
            rec(j - 1, remaining - c * j);
        }
        m[j - 1] = 0;
    };
    rec(n, n);
    return table;
}

}  // namespace hardy::special
