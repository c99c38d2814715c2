#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hardy/expfamily.hpp"

namespace hardy::sampling {

using Rng = std::mt19937_64;

struct ExpPolySpec {
    int max_terms = 4;
    int max_power = 3;
    double min_rate_re = 0.5, max_rate_re = 3.0;
    double max_rate_im = 3.0;
};

// Coefficients uniform in the unit square of the complex plane.
expfam::ExpPoly random_exppoly(Rng& rng, const ExpPolySpec& spec = {});
// Positive coefficients and real rates, so the function is positive on (0, inf).
expfam::ExpPoly random_positive_exppoly(Rng& rng, const ExpPolySpec& spec = {});

// |z| log-uniform in [r_min, r_max], arg z uniform in [-(pi/2 - margin), pi/2 - margin].
std::vector<cplx> random_halfplane_points(Rng& rng, int count, double r_min = 0.1, double r_max = 10.0,
                                          double margin = 0.05);

}  // namespace hardy::sampling
