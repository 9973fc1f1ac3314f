#include "routersim/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <stdexcept>

namespace routersim::qstate {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int checked_log2(int dim) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw std::invalid_argument("matrix dimension is not a power of 2");
    return n;
}

int bit_of(int index, int qubit, int n) { return (index >> (n - 1 - qubit)) & 1; }

}  // namespace

int bell_phase_bit(BellOutcome o) {
    return (o == BellOutcome::PhiMinus || o == BellOutcome::PsiMinus) ? 1 : 0;
}

int bell_parity_bit(BellOutcome o) {
    return (o == BellOutcome::PsiPlus || o == BellOutcome::PsiMinus) ? 1 : 0;
}

BellOutcome bell_from_bits(int phase, int parity) {
    if (phase == 0) return parity == 0 ? BellOutcome::PhiPlus : BellOutcome::PsiPlus;
    return parity == 0 ? BellOutcome::PhiMinus : BellOutcome::PsiMinus;
}

const char* bell_name(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return "Phi+";
        case BellOutcome::PhiMinus: return "Phi-";
        case BellOutcome::PsiPlus: return "Psi+";
        case BellOutcome::PsiMinus: return "Psi-";
    }
    return "?";
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
    if (n_qubits_ < 1 || n_qubits_ > 4) throw std::invalid_argument("DensityMatrix: 1..4 qubits supported");
    const int dim = 1 << n_qubits_;
    if (entries_.rows() != dim || entries_.cols() != dim)
        throw std::invalid_argument("DensityMatrix: entries dimension mismatch");
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol) throw std::runtime_error("DensityMatrix: not Hermitian");
    if (std::abs(entries_.trace().real() - 1.0) > trace_tol || std::abs(entries_.trace().imag()) > trace_tol)
        throw std::runtime_error("DensityMatrix: trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -eig_tol)
        throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

int KrausChannel::arity() const {
    if (operators.empty()) throw std::invalid_argument("KrausChannel: empty operator list");
    return checked_log2(static_cast<int>(operators.front().rows()));
}

double KrausChannel::completeness_defect() const {
    const int dim = static_cast<int>(operators.front().rows());
    Matrix sum = Matrix::Zero(dim, dim);
    for (const Matrix& k : operators) sum += k.adjoint() * k;
    return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

KrausChannel identity_channel(int arity) {
    const int dim = 1 << arity;
    return KrausChannel{{Matrix::Identity(dim, dim)}};
}

Eigen::Vector4cd bell_vector(BellOutcome kind) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    const double sign = bell_phase_bit(kind) ? -kInvSqrt2 : kInvSqrt2;
    if (bell_parity_bit(kind) == 0) {
        v(0) = kInvSqrt2;
        v(3) = sign;
    } else {
        v(1) = kInvSqrt2;
        v(2) = sign;
    }
    return v;
}

DensityMatrix bell_state(BellOutcome kind) {
    const Eigen::Vector4cd v = bell_vector(kind);
    return DensityMatrix(2, v * v.adjoint());
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int n = a.n_qubits() + b.n_qubits();
    if (n > 4) throw std::invalid_argument("tensor: combined register exceeds 4 qubits");
    const int da = a.dim(), db = b.dim();
    Matrix out(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
    return DensityMatrix(n, std::move(out));
}

Matrix lift_operator(const Matrix& op, std::span<const int> targets, int n_qubits) {
    const int a = checked_log2(static_cast<int>(op.rows()));
    if (static_cast<int>(targets.size()) != a)
        throw std::invalid_argument("lift_operator: channel arity does not match target count");
    for (int t : targets)
        if (t < 0 || t >= n_qubits) throw std::invalid_argument("lift_operator: target out of range");
    const int dim = 1 << n_qubits;
    Matrix full = Matrix::Zero(dim, dim);
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            bool rest_equal = true;
            for (int q = 0; q < n_qubits && rest_equal; ++q) {
                bool is_target = false;
                for (int t : targets) is_target |= (t == q);
                if (!is_target && bit_of(row, q, n_qubits) != bit_of(col, q, n_qubits)) rest_equal = false;
            }
            if (!rest_equal) continue;
            int sub_row = 0, sub_col = 0;
            for (int t : targets) {
                sub_row = (sub_row << 1) | bit_of(row, t, n_qubits);
                sub_col = (sub_col << 1) | bit_of(col, t, n_qubits);
            }
            full(row, col) = op(sub_row, sub_col);
        }
    }
    return full;
}

DensityMatrix apply_channel(const DensityMatrix& rho, std::span<const int> targets,
                            const KrausChannel& ch) {
    const int n = rho.n_qubits();
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const Matrix& k : ch.operators) {
        const Matrix lifted = lift_operator(k, targets, n);
        out += lifted * rho.entries() * lifted.adjoint();
    }
    DensityMatrix result(n, std::move(out));
#ifndef NDEBUG
    result.validate();
#endif
    return result;
}

DensityMatrix apply_channel(const DensityMatrix& rho, std::initializer_list<int> targets,
                            const KrausChannel& ch) {
    std::vector<int> v(targets);
    return apply_channel(rho, std::span<const int>(v), ch);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& pure_target) {
    if (rho.dim() != pure_target.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const double purity = (pure_target.entries() * pure_target.entries()).trace().real();
    if (std::abs(purity - 1.0) > 1e-8) throw std::invalid_argument("fidelity: target state is not pure");
    return (rho.entries() * pure_target.entries()).trace().real();
}

namespace {

// Reduced operator <beta|rho|beta> on the spectator qubits for one Bell
// projector on the pair (i, j).
Matrix bell_contraction(const DensityMatrix& rho, int i, int j, BellOutcome kind) {
    const int n = rho.n_qubits();
    const int rest_n = n - 2;
    const int rest_dim = 1 << rest_n;
    const Eigen::Vector4cd beta = bell_vector(kind);

    std::vector<int> rest_qubits;
    for (int q = 0; q < n; ++q)
        if (q != i && q != j) rest_qubits.push_back(q);

    auto compose = [&](int rest_index, int pair_index) {
        int full = 0;
        for (int q = 0; q < n; ++q) {
            int bit;
            if (q == i)
                bit = (pair_index >> 1) & 1;
            else if (q == j)
                bit = pair_index & 1;
            else {
                int pos = 0;
                while (rest_qubits[pos] != q) ++pos;
                bit = (rest_index >> (rest_n - 1 - pos)) & 1;
            }
            full = (full << 1) | bit;
        }
        return full;
    };

    Matrix reduced = Matrix::Zero(rest_dim, rest_dim);
    for (int r = 0; r < rest_dim; ++r)
        for (int c = 0; c < rest_dim; ++c) {
            Complex acc = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    acc += std::conj(beta(a)) * beta(b) * rho.entries()(compose(r, a), compose(c, b));
            reduced(r, c) = acc;
        }
    return reduced;
}

}  // namespace

std::array<double, 4> bell_probabilities(const DensityMatrix& rho, int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= rho.n_qubits() || j >= rho.n_qubits())
        throw std::invalid_argument("bell_probabilities: bad qubit pair");
    std::array<double, 4> probs{};
    const std::array<BellOutcome, 4> outcomes{BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                              BellOutcome::PsiPlus, BellOutcome::PsiMinus};
    for (int k = 0; k < 4; ++k) probs[k] = bell_contraction(rho, i, j, outcomes[k]).trace().real();
    return probs;
}

std::pair<BellOutcome, DensityMatrix> bell_measure(const DensityMatrix& rho, int i, int j,
                                                   engine::RandomStream& stream) {
    if (rho.n_qubits() < 3) throw std::invalid_argument("bell_measure: need at least one spectator qubit");
    const std::array<BellOutcome, 4> outcomes{BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                              BellOutcome::PsiPlus, BellOutcome::PsiMinus};
    const std::array<double, 4> probs = bell_probabilities(rho, i, j);
    double total = 0.0;
    for (double p : probs) total += std::max(p, 0.0);
    const double u = stream.uniform() * total;
    double cum = 0.0;
    int chosen = 3;
    for (int k = 0; k < 4; ++k) {
        cum += std::max(probs[k], 0.0);
        if (u < cum) {
            chosen = k;
            break;
        }
    }
    if (probs[chosen] < 1e-14)
        throw std::runtime_error("bell_measure: sampled a zero-probability branch (state corruption)");
    Matrix reduced = bell_contraction(rho, i, j, outcomes[chosen]) / probs[chosen];
    return {outcomes[chosen], DensityMatrix(rho.n_qubits() - 2, std::move(reduced))};
}

Matrix pauli_i() { return Matrix::Identity(2, 2); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

DensityMatrix pauli_correct(const DensityMatrix& rho, int qubit, BellOutcome outcome) {
    Matrix u;
    switch (outcome) {
        case BellOutcome::PhiPlus: u = pauli_i(); break;
        case BellOutcome::PsiPlus: u = pauli_x(); break;
        case BellOutcome::PhiMinus: u = pauli_z(); break;
        case BellOutcome::PsiMinus: u = pauli_x() * pauli_z(); break;
    }
    const std::array<int, 1> targets{qubit};
    const Matrix lifted = lift_operator(u, targets, rho.n_qubits());
    return DensityMatrix(rho.n_qubits(), lifted * rho.entries() * lifted.adjoint());
}

}  // namespace routersim::qstate
