#pragma once

#include <cstdint>
#include <vector>

#include "hardy/common.hpp"

namespace hardy::special {

// Three-term recurrences; stable for the moderate degrees used here.
cplx laguerre(int n, cplx x);
cplx legendre(int n, cplx x);
// (2n)! 2^{-n} (n!)^{-2}
double legendre_leading_coefficient(int n);

// Square integer matrix with overflow-checked arithmetic.
class IntMatrix {
public:
    explicit IntMatrix(int size);
    static IntMatrix identity(int size);

    int size() const { return size_; }
    std::int64_t operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * size_ + j]; }
    std::int64_t& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * size_ + j]; }

    std::vector<std::int64_t> row_sums() const;
    bool operator==(const IntMatrix& o) const = default;

private:
    int size_;
    std::vector<std::int64_t> a_;
};

// Throws std::overflow_error if any intermediate leaves int64.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Entries c_{i,j} = binom(i,j) i!/j! for 0 <= j <= i <= n.
// n = 19 already has entries past 2^63, so exact int64 storage stops at 18.
inline constexpr int kMaxCnOrder = 18;
using CnMatrix = IntMatrix;
CnMatrix cn_matrix(int n);
// Inverse has entries (-1)^{i+j} c_{i,j}.
CnMatrix cn_inverse(int n);

std::int64_t binomial(int n, int k);
std::int64_t factorial(int n);

// One Faa di Bruno term: coefficient * f^{(k)}(phi) * prod_j (phi^{(j)})^{m_j},
// with sum_j j m_j = n and sum_j m_j = k.
struct BellTerm {
    std::int64_t coefficient;
    int k;
    std::vector<int> multiplicity;  // multiplicity[j-1] = m_j, j = 1..n
};

struct BellPartitionTable {
    int n;
    std::vector<BellTerm> terms;
};

inline constexpr int kMaxBellOrder = 12;
BellPartitionTable bell_partitions(int n);

}  // namespace hardy::special
