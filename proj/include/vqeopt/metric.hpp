#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "vqeopt/circuit.hpp"

namespace vqeopt {

enum class MetricKind { full, block_diagonal };

/// Real symmetric m x m metric. Raw metrics are positive semidefinite;
/// regularize() shifts the spectrum by lambda to make them definite.
struct MetricMatrix {
    Eigen::MatrixXd entries;
    MetricKind kind = MetricKind::full;
    double lambda_applied = 0.0;
};

/// Full metric F_ij = Re<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>,
/// computed from exact state derivatives (occurrence branches summed per
/// parameter, angle_scale folded into each generator). Result symmetrized.
MetricMatrix full_metric(const Circuit& c, std::span<const double> params);

/// Per-layer generator covariance blocks on the state just before each
/// rotation layer; entries outside the diagonal blocks are exactly zero.
/// Errors if any parameterized layer is not a rotation layer (e.g.
/// controlled rotations), signalling the caller to fall back to the full
/// metric.
MetricMatrix block_diag_metric(const Circuit& c, std::span<const double> params);

/// F + lambda * I.
MetricMatrix regularize(const MetricMatrix& f, double lambda);

/// Solves F_reg * x = grad through a Cholesky factorization (no explicit
/// inverse). Reports the smallest eigenvalue if the factorization fails.
std::vector<double> natural_direction(const MetricMatrix& f_reg,
                                      std::span<const double> grad);

} // namespace vqeopt
