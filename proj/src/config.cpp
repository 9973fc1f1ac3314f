#include "routersim/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace routersim {

const char* architecture_name(Architecture a) {
    return a == Architecture::Router ? "router" : "routerless";
}

void SimConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };

    if (m < 1) fail("protocol.m must be >= 1");
    if (architecture == Architecture::Router && m % 2 != 0)
        fail("protocol.m must be even for the router architecture (two banks of m/2)");
    if (n_pairs < 0) fail("protocol.n_pairs must be >= 0");
    if (n_pairs == 0 && t_max_s <= 0) fail("need protocol.n_pairs >= 1 or protocol.t_max_s > 0");
    if (t_swap_s < 0) fail("protocol.t_swap_s must be >= 0");

    if (p_distant_override == 0.0 || p_local_override == 0.0) {
        if (!fab.is_valid()) fail("fabric spec invalid (m even power of 2, losses >= 0, efficiency in (0,1])");
    }
    if (!channel_left.is_valid()) fail("channel.left spec invalid");
    if (!channel_right.is_valid()) fail("channel.right spec invalid");
    if (client_device_efficiency <= 0 || client_device_efficiency > 1)
        fail("client.device_efficiency must be in (0, 1]");

    auto check_coherence = [&](const noise::CoherenceParams& c, const char* role) {
        if (!(c.t1 > 0) || !(c.t2 > 0)) fail(std::string("coherence.") + role + ": T1 and T2 must be > 0");
        if (!c.is_valid())
            fail(std::string("coherence.") + role +
                 ": T2 > 2*T1 violates complete positivity of the decoherence map");
    };
    check_coherence(electron, "electron");
    check_coherence(nuclear, "nuclear");
    check_coherence(client, "client");

    if (!attempt.is_valid()) fail("noise.attempt: need a >= 0, b >= 0, a + b <= 1");
    if (!op_noise.is_valid()) fail("noise: gate/readout/swap probabilities must be in [0, 1]");

    auto check_override = [&](double p, const char* key) {
        if (p < 0 || p > 1) fail(std::string(key) + " must be in [0, 1] (0 = derive from fabric)");
    };
    check_override(p_distant_override, "link.p_distant");
    check_override(p_local_override, "link.p_local");
    if (runs_per_point < 1) fail("run.runs_per_point must be >= 1");
}

double SimConfig::p_distant_left() const {
    if (p_distant_override > 0) return p_distant_override;
    return fabric::p_distant(fab, channel_left, client_device_efficiency);
}

double SimConfig::p_distant_right() const {
    if (p_distant_override > 0) return p_distant_override;
    return fabric::p_distant(fab, channel_right, client_device_efficiency);
}

double SimConfig::p_local() const {
    if (p_local_override > 0) return p_local_override;
    return fabric::p_local(fab);
}

fabric::Timings SimConfig::resolved_timings() const {
    const fabric::Timings l = fabric::timings(channel_left);
    const fabric::Timings r = fabric::timings(channel_right);
    return fabric::Timings{std::max(l.t_distant, r.t_distant), std::max(l.t_local, r.t_local)};
}

double SimConfig::correction_latency() const {
    return channel_right.length_km * 1000.0 / channel_right.fiber_light_speed;
}

}  // namespace routersim
