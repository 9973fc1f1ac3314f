#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "routersim/engine.hpp"
#include "routersim/qstate.hpp"

using namespace routersim;
using qstate::BellOutcome;
using qstate::DensityMatrix;
using qstate::Matrix;

namespace {

DensityMatrix random_state(int n_qubits, std::mt19937_64& rng) {
    return DensityMatrix(n_qubits, test_oracles::random_density(1 << n_qubits, rng));
}

DensityMatrix pure_qubit(double theta, double phi) {
    Eigen::Vector2cd v;
    v << std::cos(theta / 2.0),
        std::exp(std::complex<double>(0, phi)) * std::sin(theta / 2.0);
    return DensityMatrix(1, v * v.adjoint());
}

}  // namespace

TEST_CASE("Bell bit encoding round-trips") {
    for (BellOutcome o : {BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
                          BellOutcome::PsiMinus}) {
        CHECK(qstate::bell_from_bits(qstate::bell_phase_bit(o), qstate::bell_parity_bit(o)) == o);
    }
    CHECK(qstate::bell_phase_bit(BellOutcome::PhiPlus) == 0);
    CHECK(qstate::bell_parity_bit(BellOutcome::PhiPlus) == 0);
    CHECK(qstate::bell_phase_bit(BellOutcome::PhiMinus) == 1);
    CHECK(qstate::bell_parity_bit(BellOutcome::PsiPlus) == 1);
}

TEST_CASE("Bell vectors are orthonormal") {
    const std::array<BellOutcome, 4> all = {BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                            BellOutcome::PsiPlus, BellOutcome::PsiMinus};
    for (BellOutcome a : all)
        for (BellOutcome b : all) {
            const auto overlap = qstate::bell_vector(a).dot(qstate::bell_vector(b));
            CHECK(std::abs(overlap - (a == b ? 1.0 : 0.0)) < 1e-14);
        }
}

TEST_CASE("bell_probabilities of each Bell state is a delta") {
    const std::array<BellOutcome, 4> all = {BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                            BellOutcome::PsiPlus, BellOutcome::PsiMinus};
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto probs = qstate::bell_probabilities(qstate::bell_state(all[i]), 0, 1);
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(probs[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("density matrix validation rejects malformed inputs") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;  // not Hermitian
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(DensityMatrix(1, bad).validate(), std::runtime_error);

    Matrix off_trace = Matrix::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix(1, off_trace).validate(), std::runtime_error);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(1, neg).validate(), std::runtime_error);

    CHECK_THROWS_AS(DensityMatrix(1, Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("applying X to one Bell half permutes the Bell basis") {
    qstate::KrausChannel x{{qstate::pauli_x()}};
    const auto psi_plus = qstate::apply_channel(qstate::bell_state(BellOutcome::PhiPlus), {1}, x);
    CHECK(qstate::fidelity(psi_plus, qstate::bell_state(BellOutcome::PsiPlus)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    qstate::KrausChannel z{{qstate::pauli_z()}};
    const auto phi_minus = qstate::apply_channel(qstate::bell_state(BellOutcome::PhiPlus), {1}, z);
    CHECK(qstate::fidelity(phi_minus, qstate::bell_state(BellOutcome::PhiMinus)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_channel preserves trace, Hermiticity and positivity") {
    std::mt19937_64 rng(11);
    qstate::KrausChannel depol{{std::sqrt(0.7) * qstate::pauli_i(), std::sqrt(0.1) * qstate::pauli_x(),
                                std::sqrt(0.1) * qstate::pauli_y(), std::sqrt(0.1) * qstate::pauli_z()}};
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = random_state(3, rng);
        for (int target = 0; target < 3; ++target) {
            const auto out = qstate::apply_channel(rho, {target}, depol);
            CHECK_NOTHROW(out.validate());
            CHECK(out.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("lift_operator places the channel on the stated qubits") {
    // X on qubit 0 of two qubits: |00><00| -> |10><10|.
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 1.0;
    const Matrix lifted = qstate::lift_operator(qstate::pauli_x(), std::array{0}, 2);
    const Matrix out = lifted * rho * lifted.adjoint();
    CHECK(std::abs(out(2, 2) - 1.0) < 1e-14);
}

TEST_CASE("teleportation with noiseless BSM and correction is the identity") {
    std::mt19937_64 pick(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    engine::RandomStream stream(99, "teleport-test");
    for (int trial = 0; trial < 40; ++trial) {
        const DensityMatrix input = pure_qubit(u(pick) * M_PI, u(pick) * 2.0 * M_PI);
        // Registers: 0 = input, 1 = Bell half A, 2 = Bell half B.
        const auto joint = qstate::tensor(input, qstate::bell_state(BellOutcome::PhiPlus));
        auto [outcome, rest] = qstate::bell_measure(joint, 0, 1, stream);
        const auto corrected = qstate::pauli_correct(rest, 0, outcome);
        CHECK(qstate::fidelity(corrected, input) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bell_measure sampling matches Born probabilities") {
    // Unbalanced Bell-diagonal state on qubits (0,1) with a spectator.
    const std::array<double, 4> weights = {0.55, 0.25, 0.15, 0.05};
    const std::array<BellOutcome, 4> all = {BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                            BellOutcome::PsiPlus, BellOutcome::PsiMinus};
    Matrix mix = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto v = qstate::bell_vector(all[i]);
        mix += weights[i] * (v * v.adjoint());
    }
    Matrix spectator = Matrix::Zero(2, 2);
    spectator(0, 0) = 1.0;
    const auto rho = qstate::tensor(DensityMatrix(2, mix), DensityMatrix(1, spectator));

    const auto probs = qstate::bell_probabilities(rho, 0, 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(probs[i] == doctest::Approx(weights[i]).epsilon(1e-10));

    engine::RandomStream stream(7, "born-test");
    const int n = 20000;
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) {
        auto [outcome, rest] = qstate::bell_measure(rho, 0, 1, stream);
        ++counts[static_cast<std::size_t>(outcome)];
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const double expected = n * weights[i];
        const double sigma = std::sqrt(n * weights[i] * (1.0 - weights[i]));
        CHECK(std::abs(counts[i] - expected) < 4.0 * sigma);
    }
}

TEST_CASE("bell_measure requires a spectator qubit") {
    engine::RandomStream stream(1, "guard");
    CHECK_THROWS_AS(qstate::bell_measure(qstate::bell_state(BellOutcome::PhiPlus), 0, 1, stream),
                    std::invalid_argument);
}

TEST_CASE("fidelity requires a pure target") {
    Matrix mixed = 0.5 * Matrix::Identity(2, 2);
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(qstate::fidelity(random_state(1, rng), DensityMatrix(1, mixed)),
                    std::invalid_argument);
}

TEST_CASE("tensor is limited to four qubits") {
    std::mt19937_64 rng(9);
    const auto three = random_state(3, rng);
    const auto two = random_state(2, rng);
    CHECK_THROWS_AS(qstate::tensor(three, two), std::invalid_argument);
}
