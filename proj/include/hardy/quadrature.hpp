#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "hardy/common.hpp"

namespace hardy::quad {

struct QuadConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdiv = 20000;
    // Initial mesh for the corner rule: cells shrink by this ratio toward (0,0).
    double grading_ratio = 0.5;
    int grading_levels = 12;
    // Half-line split point, in units of the integrand's decay scale.
    double halfline_truncation = 30.0;
    // Gauss-Legendre nodes per direction in each corner cell.
    int nodes_per_cell = 10;
    // Minimum angular distance from the imaginary axis accepted by kernel routines.
    double theta_margin = 1e-3;

    void validate() const;
    double target(double magnitude) const;
};

// Overrides fields from `key = value` lines; '#' starts a comment.
// Unknown keys and malformed values raise std::invalid_argument.
QuadConfig parse_quad_config(std::istream& in, QuadConfig base = {});

// Error estimates are differences of successive refinements, not rigorous bounds.
struct QuadResult {
    cplx value{};
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
    long subdivisions = 0;
};

using Integrand1D = std::function<cplx(double)>;
using Integrand2D = std::function<cplx(double, double)>;

// Adaptive Gauss-Kronrod (7/15) on [a, b].
QuadResult integrate_interval(const Integrand1D& f, double a, double b, const QuadConfig& cfg = {});

// [0, T] with T = halfline_truncation * decay_scale, plus the tail mapped by t = T + u/(1-u).
QuadResult integrate_halfline(const Integrand1D& f, double decay_scale, const QuadConfig& cfg = {});

// Integral over (0,1)^2 of a function with at worst a 1/r singularity at the origin.
// Graded initial mesh, then anisotropic bisection of the cells with the largest error.
QuadResult integrate_square_corner(const Integrand2D& g, const QuadConfig& cfg = {});

namespace serial {
QuadResult integrate_square_corner(const Integrand2D& g, const QuadConfig& cfg = {});
}

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int m);

}  // namespace hardy::quad
