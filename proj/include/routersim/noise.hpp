#pragma once

#include <cmath>
#include <limits>

#include "routersim/engine.hpp"
#include "routersim/qstate.hpp"

namespace routersim::noise {

// T1/T2 pair in seconds. Infinity disables the corresponding decay.
struct CoherenceParams {
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();

    bool is_trivial() const { return std::isinf(t1) && std::isinf(t2); }
    // Complete positivity of the combined amplitude-damping + dephasing
    // realization requires T2 <= 2*T1.
    bool is_valid() const { return t1 > 0 && t2 > 0 && (std::isinf(t1) || t2 <= 2.0 * t1); }
};

// Per-attempt nuclear-spin noise: rho -> (1-a-b) rho + a Z rho Z + b I/2.
struct AttemptNoiseParams {
    double a = 0.0;  // dephasing probability
    double b = 0.0;  // depolarization probability

    bool is_valid() const { return a >= 0 && b >= 0 && a + b <= 1.0; }
};

struct OpNoiseParams {
    double p_gate = 0.0;   // two-qubit depolarizing probability per BSM
    double eps_ro = 0.0;   // per-bit readout flip probability
    double p_swap = 0.0;   // depolarizing probability of the electron->nuclear swap

    bool is_valid() const {
        auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
        return ok(p_gate) && ok(eps_ro) && ok(p_swap);
    }
};

// Idle decoherence over time t: populations decay toward |0> with
// factor e^{-t/T1}, coherences decay with factor e^{-t/T2}. Realized as
// amplitude damping composed with pure dephasing.
qstate::KrausChannel decoherence_channel(double t, const CoherenceParams& params);

// Single-qubit channel for the per-attempt map; the I/2 term is full
// depolarization of the target.
qstate::KrausChannel attempt_noise_channel(const AttemptNoiseParams& params);

// Depolarizing channel rho -> (1-p) rho + p I/2^arity on 1 or 2 qubits.
qstate::KrausChannel gate_noise_channel(double p, int arity);

// Flips each of the two classical bits of a Bell outcome independently
// with probability eps (imperfect electron spin readout).
qstate::BellOutcome flip_outcome(qstate::BellOutcome outcome, double eps,
                                 engine::RandomStream& stream);

}  // namespace routersim::noise
