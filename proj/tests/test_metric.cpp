#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "vqeopt/metric.hpp"
#include "vqeopt/reference.hpp"
#include "vqeopt/simulator.hpp"

using namespace vqeopt;
using testutil::random_circuit;
using testutil::random_params;

namespace {

Circuit single_ry_layer(int n) {
    Circuit c;
    c.n_qubits = n;
    c.n_params = n;
    std::vector<LayerGenerator> gens;
    for (int q = 0; q < n; ++q) {
        c.gates.push_back({GateKind::RY, {q, -1}, q, 1.0});
        gens.push_back({q, 'Y', q, 1.0});
    }
    c.layers.push_back({0, n, true, true, std::move(gens)});
    validate_circuit(c);
    return c;
}

} // namespace

TEST_CASE("full metric of the example ansatz at a pinned point") {
    const Circuit c = build_example1_ansatz();
    const std::vector<double> theta{0.3, 0.5, 0.7};
    const MetricMatrix f = full_metric(c, theta);

    CHECK(f.entries(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.entries(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(f.entries(0, 1)) < 1e-9);
    CHECK(f.entries(0, 2) ==
          doctest::Approx(std::cos(0.5) * std::sin(0.5)).epsilon(1e-9));
    CHECK(f.entries(1, 2) ==
          doctest::Approx(-std::cos(0.3) * std::sin(0.3)).epsilon(1e-9));
    CHECK(f.entries(2, 2) ==
          doctest::Approx(0.5 * (1.0 - std::cos(0.6) * std::cos(1.0)))
              .epsilon(1e-9));
    // Six-figure values as commonly quoted.
    CHECK(f.entries(0, 2) == doctest::Approx(0.420735).epsilon(1e-6));
    CHECK(f.entries(1, 2) == doctest::Approx(-0.282321).epsilon(1e-6));
    CHECK(f.entries(2, 2) == doctest::Approx(0.277035).epsilon(1e-6));
}

TEST_CASE("full metric matches the closed form at random points") {
    const Circuit c = build_example1_ansatz();
    for (int trial = 0; trial < 25; ++trial) {
        const auto theta =
            random_params(3, 4000 + static_cast<std::uint64_t>(trial), -3, 3);
        const MetricMatrix f = full_metric(c, theta);
        const MetricMatrix ref =
            example1_metric_closed_form({theta[0], theta[1], theta[2]});
        CHECK((f.entries - ref.entries).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("first rotation layer on a basis state gives a scaled identity") {
    const Circuit c = single_ry_layer(3);
    const auto theta = random_params(3, 99);
    const MetricMatrix f = full_metric(c, theta);
    CHECK((f.entries - 0.25 * Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    const MetricMatrix b = block_diag_metric(c, theta);
    CHECK((b.entries - 0.25 * Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("one-parameter circuit yields the generator variance") {
    Circuit c;
    c.n_qubits = 1;
    c.n_params = 1;
    c.gates.push_back({GateKind::RX, {0, -1}, 0, 1.0});
    c.layers.push_back({0, 1, true, true, {{0, 'X', 0, 1.0}}});
    validate_circuit(c);
    const MetricMatrix f = full_metric(c, std::vector<double>{0.9});
    REQUIRE(f.entries.rows() == 1);
    CHECK(f.entries(0, 0) >= 0.0);
    // Var(X/2) on |0> is 1/4.
    CHECK(f.entries(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("block-diagonal metric matches full-metric sub-blocks") {
    const Circuit c = build_efficient_su2(4, 2);
    const auto theta = random_params(c.n_params, 321);
    const MetricMatrix full = full_metric(c, theta);
    const MetricMatrix block = block_diag_metric(c, theta);

    // Within-layer entries agree.
    for (const LayerSpec& layer : c.layers) {
        if (!layer.rotation_layer) continue;
        for (const LayerGenerator& a : layer.generators) {
            for (const LayerGenerator& b : layer.generators) {
                CHECK(std::abs(block.entries(a.param_index, b.param_index) -
                               full.entries(a.param_index, b.param_index)) <
                      1e-9);
            }
        }
    }
    // Entries outside the diagonal blocks are exactly zero.
    for (const LayerSpec& la : c.layers) {
        if (!la.rotation_layer) continue;
        for (const LayerSpec& lb : c.layers) {
            if (!lb.rotation_layer || &la == &lb) continue;
            for (const LayerGenerator& a : la.generators) {
                for (const LayerGenerator& b : lb.generators) {
                    CHECK(block.entries(a.param_index, b.param_index) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("block-diagonal metric rejects ineligible circuits") {
    const Circuit c = build_example1_ansatz();
    CHECK_THROWS_AS(block_diag_metric(c, std::vector<double>{0.1, 0.2, 0.3}),
                    std::runtime_error);

    // Shared slots across rotation layers are rejected too.
    const Circuit shared = random_circuit(
        {.n_qubits = 3, .rotation_layers = 2, .with_shared = true}, 5);
    CHECK_THROWS_AS(block_diag_metric(shared,
                                      random_params(shared.n_params, 6)),
                    std::runtime_error);
}

TEST_CASE("layer state convention is irrelevant for commuting generators") {
    // The covariance block is the same on the state before the rotation
    // layer and on the state after it, because the generators commute with
    // their own layer.
    const Circuit c = build_efficient_su2(3, 2);
    const auto theta = random_params(c.n_params, 888);
    const auto layers = layer_partition(c);
    for (std::size_t li = 0; li < layers.size(); ++li) {
        if (!layers[li].rotation_layer) continue;
        const State before =
            li == 0 ? init_basis_state(c.n_qubits, c.initial_basis_index)
                    : intermediate_state(c, theta, static_cast<int>(li));
        const State after =
            intermediate_state(c, theta, static_cast<int>(li) + 1);
        for (const LayerGenerator& a : layers[li].generators) {
            for (const LayerGenerator& b : layers[li].generators) {
                std::string wa(static_cast<std::size_t>(c.n_qubits), 'I');
                wa[static_cast<std::size_t>(a.qubit)] = a.axis;
                wa[static_cast<std::size_t>(b.qubit)] =
                    b.axis; // a == b overwrites to the same letter
                double cov_before, cov_after;
                if (a.qubit == b.qubit) {
                    const double m =
                        expectation(PauliWord(wa) /*P^2 = I*/, before);
                    (void)m;
                    const std::string single =
                        std::string(static_cast<std::size_t>(a.qubit), 'I') +
                        a.axis +
                        std::string(
                            static_cast<std::size_t>(c.n_qubits - a.qubit - 1),
                            'I');
                    const double eb = expectation(PauliWord(single), before);
                    const double ea = expectation(PauliWord(single), after);
                    cov_before = 1.0 - eb * eb;
                    cov_after = 1.0 - ea * ea;
                } else {
                    std::string sa(static_cast<std::size_t>(c.n_qubits), 'I');
                    sa[static_cast<std::size_t>(a.qubit)] = a.axis;
                    std::string sb(static_cast<std::size_t>(c.n_qubits), 'I');
                    sb[static_cast<std::size_t>(b.qubit)] = b.axis;
                    cov_before = expectation(PauliWord(wa), before) -
                                 expectation(PauliWord(sa), before) *
                                     expectation(PauliWord(sb), before);
                    cov_after = expectation(PauliWord(wa), after) -
                                expectation(PauliWord(sa), after) *
                                    expectation(PauliWord(sb), after);
                }
                CHECK(cov_before == doctest::Approx(cov_after).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("metrics are symmetric and positive semidefinite") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Circuit c = random_circuit(
            {.n_qubits = 3, .rotation_layers = 2,
             .with_controlled = seed % 2 == 1},
            6000 + seed);
        const auto theta = random_params(c.n_params, 6100 + seed);
        const MetricMatrix f = full_metric(c, theta);
        CHECK((f.entries - f.entries.transpose()).cwiseAbs().maxCoeff() <
              1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            f.entries, Eigen::EigenvaluesOnly);
        CHECK(eig.eigenvalues()(0) > -1e-8);
    }
}

TEST_CASE("rescaling a parameter rescales its metric row and column") {
    Circuit c = build_efficient_su2(3, 1);
    const auto theta = random_params(c.n_params, 777);
    const MetricMatrix base = full_metric(c, theta);

    const double scale = 2.5;
    const int p = 2;
    Circuit scaled = c;
    for (auto& g : scaled.gates) {
        if (g.param_index == p) g.angle_scale *= scale;
    }
    for (auto& l : scaled.layers) {
        for (auto& gen : l.generators) {
            if (gen.param_index == p) gen.angle_scale *= scale;
        }
    }
    // Evaluate the scaled circuit where the bound gate angles coincide.
    auto theta_scaled = theta;
    theta_scaled[p] /= scale;
    const MetricMatrix rescaled = full_metric(scaled, theta_scaled);

    for (int i = 0; i < base.entries.rows(); ++i) {
        for (int j = 0; j < base.entries.cols(); ++j) {
            const double factor =
                (i == p ? scale : 1.0) * (j == p ? scale : 1.0);
            CHECK(rescaled.entries(i, j) ==
                  doctest::Approx(factor * base.entries(i, j)).epsilon(1e-9));
        }
    }
}

TEST_CASE("regularization shifts the spectrum") {
    MetricMatrix zero;
    zero.entries = Eigen::MatrixXd::Zero(3, 3);
    const MetricMatrix r = regularize(zero, 0.01);
    CHECK((r.entries - 0.01 * Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(r.lambda_applied == 0.01);

    const Circuit c = build_example1_ansatz();
    const MetricMatrix f = full_metric(c, std::vector<double>{0.3, 0.5, 0.7});
    const MetricMatrix same = regularize(f, 0.0);
    CHECK((same.entries - f.entries).cwiseAbs().maxCoeff() == 0.0);

    const double lambda = 0.37;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> before(f.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> after(
        regularize(f, lambda).entries);
    for (int i = 0; i < 3; ++i) {
        CHECK(after.eigenvalues()(i) ==
              doctest::Approx(before.eigenvalues()(i) + lambda)
                  .epsilon(1e-12));
    }

    CHECK_THROWS_AS(regularize(f, -0.1), std::invalid_argument);
}

TEST_CASE("natural direction solves the regularized system") {
    MetricMatrix identity;
    identity.entries = Eigen::MatrixXd::Identity(2, 2);
    const auto x =
        natural_direction(identity, std::vector<double>{1.0, -2.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(-2.0));

    MetricMatrix twice;
    twice.entries = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    const auto half = natural_direction(twice, std::vector<double>{1.0, 0.0});
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.0));

    const Circuit c = build_example1_ansatz();
    const MetricMatrix f_reg = regularize(
        full_metric(c, std::vector<double>{0.3, 0.5, 0.7}), 0.01);
    const auto grad = random_params(3, 1234);
    const auto sol = natural_direction(f_reg, grad);
    Eigen::Vector3d residual;
    for (int i = 0; i < 3; ++i) {
        residual(i) = -grad[static_cast<std::size_t>(i)];
        for (int j = 0; j < 3; ++j) {
            residual(i) += f_reg.entries(i, j) * sol[static_cast<std::size_t>(j)];
        }
    }
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);

    SUBCASE("indefinite matrices are reported with the eigenvalue") {
        MetricMatrix bad;
        bad.entries = Eigen::MatrixXd::Identity(2, 2);
        bad.entries(1, 1) = -1.0;
        CHECK_THROWS_WITH_AS(
            natural_direction(bad, std::vector<double>{1.0, 1.0}),
            doctest::Contains("eigenvalue"), std::runtime_error);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(natural_direction(identity, std::vector<double>{1.0}),
                        std::invalid_argument);
    }
}
