#pragma once

#include <cstdint>
#include <string>

#include "routersim/fabric.hpp"
#include "routersim/noise.hpp"

namespace routersim {

enum class Architecture { Router, Routerless };

const char* architecture_name(Architecture a);

// Full parameter surface of one simulation run. Defaults are documented
// placeholders (printed by the `defaults` subcommand); only a and b carry
// literature values.
struct SimConfig {
    Architecture architecture = Architecture::Router;

    // Protocol
    int m = 4;                     // registers at the repeater node
    int n_pairs = 500;             // stop after this many deliveries (0 = unbounded)
    double t_max_s = 0.0;          // wall-clock stop in simulated seconds (0 = unbounded)
    double t_swap_s = 1.0e-6;      // electron -> nuclear swap duration
    bool serialize_local = true;   // one shared local BSM slot per t_local
    bool client_decoherence_during_correction = false;
    bool both_nuclei_attempt_noise = true;

    // Physical device and channels. fabric.m sizes the switch device and
    // drives the loss budget; it is deliberately independent of the
    // protocol register count m so multiplexing sweeps hold the link
    // budget fixed.
    fabric::FabricSpec fab;
    fabric::ChannelSpec channel_left;
    fabric::ChannelSpec channel_right;
    double client_device_efficiency = 1.0;

    // Coherence per qubit role.
    noise::CoherenceParams electron{3.0e-3, 1.0e-3};
    noise::CoherenceParams nuclear{10.0, 10.0e-3};
    noise::CoherenceParams client;  // default: infinite

    noise::AttemptNoiseParams attempt{1.0 / 4000.0, 1.0 / 5000.0};
    noise::OpNoiseParams op_noise{0.01, 0.005, 0.01};

    // Direct link overrides; 0 means "derive from the fabric".
    double p_distant_override = 0.0;
    double p_local_override = 0.0;

    std::uint64_t master_seed = 12345;
    int runs_per_point = 3;

    // Throws std::invalid_argument with a key-precise message.
    void validate() const;

    // Resolved link parameters.
    double p_distant_left() const;
    double p_distant_right() const;
    double p_local() const;
    fabric::Timings resolved_timings() const;  // t_distant = max over sides
    double correction_latency() const;         // one-way classical latency L/c (right side)
};

}  // namespace routersim
