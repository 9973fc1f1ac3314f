#pragma once

namespace routersim::fabric {

// Physical switch fabric of one repeater node. m is the number of
// register ports of the built device (even power of 2); k is the node
// degree. Sizing the device is independent of how many registers a
// protocol run actually uses.
struct FabricSpec {
    int m = 8;
    int k = 2;
    double loss_per_mzi_db = 0.3;
    double coupling_loss_db = 1.0;     // chip <-> fiber/detector
    double conversion_loss_db = 3.0;   // frequency conversion stage
    double detector_efficiency = 0.9;

    bool is_valid() const;
};

// One fiber link between the repeater and a detector station.
struct ChannelSpec {
    double length_km = 10.0;
    double attenuation_db_per_km = 0.2;
    double fiber_light_speed = 2.0e8;  // m/s
    double prep_time = 6.0e-6;         // state preparation per attempt, s

    bool is_valid() const {
        return length_km >= 0 && attenuation_db_per_km >= 0 && fiber_light_speed > 0 && prep_time > 0;
    }
};

struct Timings {
    double t_distant;
    double t_local;
};

bool is_power_of_two(int v);

// MZI depth from a register to a network port: register routing
// 2*log2(m/2), interposer 1, network routing log2(k); total log2(m^2 k / 2).
int network_path_depth(int m, int k);

// MZI depth from a register to the local BSM detectors:
// 2*log2(m/2) + interposer + BSM layer.
int local_path_depth(int m);

// Depth of the plain m x k switch of the routerless repeater.
int routerless_depth(int m, int k);

// 10^(-(depth * loss_per_mzi_db + extra_db) / 10).
double path_transmission(int depth, const FabricSpec& spec, double extra_db);

// Barrett-Kok heralded success probability over the distant link:
// 1/2 * eta_repeater * eta_client. The repeater arm traverses the
// network path, conversion, coupling, fiber and detector; the client arm
// sees only its device efficiency, fiber and detector.
double p_distant(const FabricSpec& fab, const ChannelSpec& ch, double client_device_efficiency = 1.0);

// Local on-chip success probability: both photons traverse the local
// path to the shared BSM detectors; no fiber or conversion loss.
double p_local(const FabricSpec& fab);

// t_distant = round trip to the detector station plus preparation;
// t_local = preparation only.
Timings timings(const ChannelSpec& ch);

}  // namespace routersim::fabric
