#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "vqeopt/deriv.hpp"
#include "vqeopt/harness.hpp"
#include "vqeopt/reference.hpp"

using namespace vqeopt;

TEST_CASE("ground state of the example Hamiltonian") {
    const Observable h = build_hamiltonian({});
    const GroundTruth gt = ground_state(h);
    CHECK(std::abs(gt.energy - (-std::sqrt(0.68))) < 1e-10);
    CHECK_FALSE(gt.degenerate);
    CHECK(std::abs(norm_sq(gt.state) - 1.0) < 1e-12);

    // Eigen-residual ||H psi - E psi||.
    const Eigen::MatrixXcd dense = to_dense(h);
    Eigen::VectorXcd v(4);
    for (int i = 0; i < 4; ++i) v(i) = gt.state.amps[static_cast<std::size_t>(i)];
    CHECK((dense * v - gt.energy * v).norm() < 1e-9);
}

TEST_CASE("ground state of the two-site Heisenberg model") {
    const Observable h = build_heisenberg(2, -1.0, -1.0);
    const GroundTruth gt = ground_state(h);
    CHECK(std::abs(gt.energy - (-3.0)) < 1e-10);
}

TEST_CASE("single-qubit Z ground state is |1>") {
    const Observable z(1, {{1.0, PauliWord("Z")}});
    const GroundTruth gt = ground_state(z);
    CHECK(gt.energy == doctest::Approx(-1.0));
    CHECK(fidelity(gt.state, init_basis_state(1, 1)) ==
          doctest::Approx(1.0));
}

TEST_CASE("degenerate ground spaces use the projector overlap") {
    // ZZ on two qubits: ground space spanned by |01> and |10>.
    const Observable zz(2, {{1.0, PauliWord("ZZ")}});
    const GroundTruth gt = ground_state(zz);
    CHECK(gt.energy == doctest::Approx(-1.0));
    CHECK(gt.degenerate);
    CHECK(gt.subspace.size() == 2);
    CHECK(ground_space_fidelity(gt, init_basis_state(2, 1)) ==
          doctest::Approx(1.0));
    CHECK(ground_space_fidelity(gt, init_basis_state(2, 2)) ==
          doctest::Approx(1.0));
    CHECK(ground_space_fidelity(gt, init_basis_state(2, 0)) ==
          doctest::Approx(0.0));
}

TEST_CASE("dense size limit is enforced") {
    const Observable big = testutil::random_observable(6, 2, 1);
    CHECK_THROWS_AS(ground_state(big, /*dense_limit=*/4),
                    std::invalid_argument);
}

TEST_CASE("variational bound holds at probe points") {
    const Observable h = build_hamiltonian({});
    const Circuit c = build_example1_ansatz();
    const GroundTruth gt = ground_state(h);
    CostFunction cost(c, h, ShotConfig::exact_mode());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto theta = testutil::random_params(3, 70 + seed, -3, 3);
        CHECK(cost.evaluate(theta) >= gt.energy - 1e-12);
    }
}

TEST_CASE("closed-form metric values") {
    constexpr double pi = std::numbers::pi;
    SUBCASE("zero angles") {
        const MetricMatrix f = example1_metric_closed_form({0.0, 0.0, 0.0});
        CHECK(f.entries(0, 0) == 1.0);
        CHECK(f.entries(1, 1) == 1.0);
        CHECK(f.entries(2, 2) == doctest::Approx(0.0));
        CHECK(f.entries(0, 2) == doctest::Approx(0.0));
        CHECK(f.entries(1, 2) == doctest::Approx(0.0));
    }
    SUBCASE("pi/4 angles") {
        const MetricMatrix f =
            example1_metric_closed_form({pi / 4.0, pi / 4.0, 123.0});
        CHECK(f.entries(0, 2) == doctest::Approx(0.5));
        CHECK(f.entries(1, 2) == doctest::Approx(-0.5));
        CHECK(f.entries(2, 2) == doctest::Approx(0.5));
    }
    SUBCASE("independent of the third parameter") {
        const MetricMatrix a = example1_metric_closed_form({0.3, -0.8, 0.0});
        const MetricMatrix b = example1_metric_closed_form({0.3, -0.8, 42.0});
        CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("symmetric") {
        const MetricMatrix f = example1_metric_closed_form({0.3, 0.5, 0.7});
        CHECK((f.entries - f.entries.transpose()).cwiseAbs().maxCoeff() ==
              0.0);
    }
}
