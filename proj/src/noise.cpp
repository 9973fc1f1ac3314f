#include "routersim/noise.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace routersim::noise {

using qstate::KrausChannel;
using qstate::Matrix;

KrausChannel decoherence_channel(double t, const CoherenceParams& params) {
    if (t < 0) throw std::invalid_argument("decoherence_channel: negative time");
    if (!params.is_valid()) throw std::invalid_argument("decoherence_channel: invalid T1/T2 (need T2 <= 2*T1)");

    const double e1 = std::isinf(params.t1) ? 1.0 : std::exp(-t / params.t1);
    const double e2 = std::isinf(params.t2) ? 1.0 : std::exp(-t / params.t2);
    const double gamma = 1.0 - e1;
    // Residual dephasing after amplitude damping contributes sqrt(e1) to
    // the off-diagonal decay; lambda makes the total equal e2.
    double lambda = e2 / std::sqrt(e1);
    if (lambda > 1.0) {
        if (lambda > 1.0 + 1e-12) throw std::invalid_argument("decoherence_channel: non-CP request");
        lambda = 1.0;
    }

    Matrix a0(2, 2), a1(2, 2);
    a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    a1 << 0, std::sqrt(gamma), 0, 0;
    const double d0 = std::sqrt((1.0 + lambda) / 2.0);
    const double d1 = std::sqrt((1.0 - lambda) / 2.0);

    KrausChannel ch;
    ch.operators.push_back(d0 * a0);
    ch.operators.push_back(d0 * a1);
    if (d1 > 0.0) {
        const Matrix z = qstate::pauli_z();
        ch.operators.push_back(d1 * z * a0);
        ch.operators.push_back(d1 * z * a1);
    }
    return ch;
}

KrausChannel attempt_noise_channel(const AttemptNoiseParams& params) {
    if (!params.is_valid()) throw std::invalid_argument("attempt_noise_channel: invalid (a, b)");
    // Pauli-twirl weights: the I/2 term spreads b equally over I, X, Y, Z.
    const double w_i = 1.0 - params.a - params.b + params.b / 4.0;
    const double w_x = params.b / 4.0;
    const double w_y = params.b / 4.0;
    const double w_z = params.a + params.b / 4.0;

    KrausChannel ch;
    ch.operators.push_back(std::sqrt(w_i) * qstate::pauli_i());
    if (w_x > 0) ch.operators.push_back(std::sqrt(w_x) * qstate::pauli_x());
    if (w_y > 0) ch.operators.push_back(std::sqrt(w_y) * qstate::pauli_y());
    if (w_z > 0) ch.operators.push_back(std::sqrt(w_z) * qstate::pauli_z());
    return ch;
}

KrausChannel gate_noise_channel(double p, int arity) {
    if (p < 0 || p > 1) throw std::invalid_argument("gate_noise_channel: p outside [0, 1]");
    if (arity != 1 && arity != 2) throw std::invalid_argument("gate_noise_channel: arity must be 1 or 2");

    const std::array<Matrix, 4> paulis{qstate::pauli_i(), qstate::pauli_x(), qstate::pauli_y(),
                                       qstate::pauli_z()};
    KrausChannel ch;
    if (arity == 1) {
        for (int k = 0; k < 4; ++k) {
            const double w = (k == 0) ? 1.0 - p + p / 4.0 : p / 4.0;
            if (w > 0) ch.operators.push_back(std::sqrt(w) * paulis[k]);
        }
        return ch;
    }
    for (int k1 = 0; k1 < 4; ++k1)
        for (int k2 = 0; k2 < 4; ++k2) {
            const double w = (k1 == 0 && k2 == 0) ? 1.0 - p + p / 16.0 : p / 16.0;
            if (w <= 0) continue;
            Matrix op(4, 4);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    op.block(i * 2, j * 2, 2, 2) = paulis[k1](i, j) * paulis[k2];
            ch.operators.push_back(std::sqrt(w) * op);
        }
    return ch;
}

qstate::BellOutcome flip_outcome(qstate::BellOutcome outcome, double eps,
                                 engine::RandomStream& stream) {
    if (eps < 0 || eps > 1) throw std::invalid_argument("flip_outcome: eps outside [0, 1]");
    int phase = qstate::bell_phase_bit(outcome);
    int parity = qstate::bell_parity_bit(outcome);
    if (stream.bernoulli(eps)) phase ^= 1;
    if (stream.bernoulli(eps)) parity ^= 1;
    return qstate::bell_from_bits(phase, parity);
}

}  // namespace routersim::noise
