#include "hardy/common.hpp"

#include <omp.h>

#include <cstdlib>
#include <sstream>

namespace hardy {

int configured_threads() {
    if (const char* env = std::getenv("HARDY_NUM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return omp_get_max_threads();
}

void apply_thread_env() { omp_set_num_threads(configured_threads()); }

void require_right_half_plane(cplx z, const char* what) {
    if (!(z.real() > 0.0)) {
        std::ostringstream os;
        os << what << " must lie in the open right half-plane, got (" << z.real() << ", " << z.imag()
           << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace hardy
