#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hardy {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Raised when a numeric routine cannot produce a trustworthy value:
// NaN from an integrand, a singular jet, a branch-cut crossing.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Selects between the OpenMP kernels and the single-threaded references.
enum class Exec { parallel, serial };

// Thread count taken from HARDY_NUM_THREADS when set; otherwise the OpenMP default.
int configured_threads();
void apply_thread_env();

inline bool in_right_half_plane(cplx z) { return z.real() > 0.0; }

void require_right_half_plane(cplx z, const char* what);

}  // namespace hardy
