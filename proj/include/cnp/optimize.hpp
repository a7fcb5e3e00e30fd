#pragma once

// Thin wrappers over the GSL multidimensional minimizers.

#include <functional>
#include <span>
#include <vector>

namespace cnp {

struct Minimum {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

using Objective = std::function<double(std::span<const double>)>;
// Returns f(x) and writes the gradient into `grad`.
using ObjectiveWithGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Nelder-Mead simplex (nmsimplex2) with initial step `step` per coordinate.
/// Stops when the simplex size drops below `size_tol` or after `max_iter`.
Minimum nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter, double size_tol = 1e-10);

/// Limited-memory quasi-Newton descent (vector_bfgs2). Stops when the gradient
/// norm drops below `grad_tol`, the line search stalls, or after `max_iter`.
Minimum quasi_newton(const ObjectiveWithGradient& f, std::vector<double> x0, int max_iter, double grad_tol = 1e-9);

}  // namespace cnp
