#pragma once

#include <functional>

namespace vqeopt {

struct SubproblemResult {
    double alpha = 0.0;
    double beta = 0.0;
    bool success = false;
    int evals_used = 0;
};

/// Derivative-free local minimization of a two-variable objective by a
/// Nelder-Mead direct-search simplex, starting from (alpha0, beta0) and
/// limited to max_evals objective calls. Non-finite objective values are
/// treated as +infinity.
///
/// On success the returned point strictly improves on the start; otherwise
/// the start point is returned with success = false (never an error).
SubproblemResult solve_subproblem(
    const std::function<double(double, double)>& objective, double alpha0,
    double beta0, int max_evals);

} // namespace vqeopt
