#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "routersim/engine.hpp"

namespace routersim::qstate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Two classical bits identifying a Bell outcome: (phase, parity).
// PhiPlus=(0,0), PhiMinus=(1,0), PsiPlus=(0,1), PsiMinus=(1,1).
int bell_phase_bit(BellOutcome o);
int bell_parity_bit(BellOutcome o);
BellOutcome bell_from_bits(int phase, int parity);
const char* bell_name(BellOutcome o);

// Dense density matrix on 1..4 qubits. Qubit 0 is the most significant
// bit of the computational basis index.
class DensityMatrix {
public:
    DensityMatrix(int n_qubits, Matrix entries);

    int n_qubits() const { return n_qubits_; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

    double trace_real() const { return entries_.trace().real(); }

    // Throws std::runtime_error when Hermiticity, unit trace, or
    // positivity is violated beyond the stated tolerances.
    void validate(double herm_tol = 1e-12, double trace_tol = 1e-10, double eig_tol = 1e-10) const;

private:
    int n_qubits_;
    Matrix entries_;
};

// CPTP map in Kraus form. All operators act on the same arity.
struct KrausChannel {
    std::vector<Matrix> operators;

    int arity() const;
    // Max-norm deviation of sum K_i^dag K_i from identity.
    double completeness_defect() const;
};

KrausChannel identity_channel(int arity = 1);

Eigen::Vector4cd bell_vector(BellOutcome kind);
DensityMatrix bell_state(BellOutcome kind);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// rho' = sum_i K_i rho K_i^dag with the channel lifted to the stated
// target qubits; targets[0] is the most significant index of the channel.
DensityMatrix apply_channel(const DensityMatrix& rho, std::span<const int> targets,
                            const KrausChannel& ch);
DensityMatrix apply_channel(const DensityMatrix& rho, std::initializer_list<int> targets,
                            const KrausChannel& ch);

// Overlap <psi|rho|psi> with a pure target state.
double fidelity(const DensityMatrix& rho, const DensityMatrix& pure_target);

// Born probabilities of the four Bell projectors on qubits (i, j).
std::array<double, 4> bell_probabilities(const DensityMatrix& rho, int i, int j);

// Samples a Bell outcome on qubits (i, j) and returns the renormalized
// post-measurement state on the remaining qubits. Requires at least one
// spectator qubit.
std::pair<BellOutcome, DensityMatrix> bell_measure(const DensityMatrix& rho, int i, int j,
                                                   engine::RandomStream& stream);

// Teleportation correction: PhiPlus -> I, PsiPlus -> X, PhiMinus -> Z,
// PsiMinus -> XZ on the stated qubit.
DensityMatrix pauli_correct(const DensityMatrix& rho, int qubit, BellOutcome outcome);

// Single-qubit Pauli matrices.
Matrix pauli_i();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Lifts a 2^a x 2^a operator to the full register.
Matrix lift_operator(const Matrix& op, std::span<const int> targets, int n_qubits);

}  // namespace routersim::qstate
