#include "hardy/sampling.hpp"

#include <cmath>

namespace hardy::sampling {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

expfam::ExpPoly random_exppoly(Rng& rng, const ExpPolySpec& spec) {
    const int count = uniform_int(rng, 1, spec.max_terms);
    std::vector<expfam::Term> terms;
    for (int i = 0; i < count; ++i) {
        cplx a{uniform(rng, -1, 1), uniform(rng, -1, 1)};
        int k = uniform_int(rng, 0, spec.max_power);
        cplx l{uniform(rng, spec.min_rate_re, spec.max_rate_re), uniform(rng, -spec.max_rate_im, spec.max_rate_im)};
        terms.push_back({a, k, l});
    }
    return expfam::ExpPoly(std::move(terms));
}

expfam::ExpPoly random_positive_exppoly(Rng& rng, const ExpPolySpec& spec) {
    const int count = uniform_int(rng, 1, spec.max_terms);
    std::vector<expfam::Term> terms;
    for (int i = 0; i < count; ++i) {
        double a = uniform(rng, 0.1, 1.0);
        int k = uniform_int(rng, 0, spec.max_power);
        double l = uniform(rng, spec.min_rate_re, spec.max_rate_re);
        terms.push_back({a, k, l});
    }
    return expfam::ExpPoly(std::move(terms));
}

std::vector<cplx> random_halfplane_points(Rng& rng, int count, double r_min, double r_max, double margin) {
    std::vector<cplx> pts;
    pts.reserve(count);
    const double amax = pi / 2 - margin;
    for (int i = 0; i < count; ++i) {
        double r = std::exp(uniform(rng, std::log(r_min), std::log(r_max)));
        double th = uniform(rng, -amax, amax);
        pts.push_back(std::polar(r, th));
    }
    return pts;
}

}  // namespace hardy::sampling
