#pragma once

#include <array>
#include <vector>

#include "vqeopt/metric.hpp"
#include "vqeopt/pauli.hpp"
#include "vqeopt/state.hpp"

namespace vqeopt {

/// Exact minimum eigenpair from dense diagonalization. When the spectral
/// gap is below the degeneracy tolerance, `subspace` holds an orthonormal
/// basis of the (near-)degenerate ground space and fidelity comparisons
/// should use the projector overlap.
struct GroundTruth {
    double energy = 0.0;
    State state;
    bool degenerate = false;
    std::vector<State> subspace;
};

/// Dense symmetric eigensolve of the observable. Intended as the ground
/// truth oracle for small systems.
GroundTruth ground_state(const Observable& obs, int dense_limit = 14);

/// Projector overlap sum_k |<phi_k|psi>|^2 over the ground subspace.
double ground_space_fidelity(const GroundTruth& gt, const State& psi);

/// Closed-form 3x3 metric of the two-qubit example ansatz: unit diagonal on
/// the rotation pair, cross terms cos*sin, and corner
/// (1 - cos(2*t0)*cos(2*t1))/2. Independent of the third parameter.
MetricMatrix example1_metric_closed_form(const std::array<double, 3>& theta);

} // namespace vqeopt
