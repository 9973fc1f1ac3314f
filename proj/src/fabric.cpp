#include "routersim/fabric.hpp"

#include <cmath>
#include <stdexcept>

namespace routersim::fabric {

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

namespace {

int int_log2(int v) {
    int n = 0;
    while ((1 << n) < v) ++n;
    return n;
}

void require_pow2(int m, int k) {
    if (!is_power_of_two(m) || m < 2) throw std::invalid_argument("fabric: m must be a power of 2, >= 2");
    if (!is_power_of_two(k)) throw std::invalid_argument("fabric: k must be a power of 2, >= 1");
}

}  // namespace

bool FabricSpec::is_valid() const {
    return is_power_of_two(m) && m >= 2 && m % 2 == 0 && is_power_of_two(k) && loss_per_mzi_db >= 0 &&
           coupling_loss_db >= 0 && conversion_loss_db >= 0 && detector_efficiency > 0 &&
           detector_efficiency <= 1;
}

int network_path_depth(int m, int k) {
    require_pow2(m, k);
    return 2 * int_log2(m / 2) + 1 + int_log2(k);
}

int local_path_depth(int m) {
    require_pow2(m, 1);
    return 2 * int_log2(m / 2) + 2;
}

int routerless_depth(int m, int k) {
    require_pow2(m, k);
    return int_log2(m) + int_log2(k);
}

double path_transmission(int depth, const FabricSpec& spec, double extra_db) {
    if (depth < 0) throw std::invalid_argument("path_transmission: negative depth");
    return std::pow(10.0, -(depth * spec.loss_per_mzi_db + extra_db) / 10.0);
}

double p_distant(const FabricSpec& fab, const ChannelSpec& ch, double client_device_efficiency) {
    if (!fab.is_valid() || !ch.is_valid()) throw std::invalid_argument("p_distant: invalid spec");
    const double fiber = std::pow(10.0, -ch.attenuation_db_per_km * ch.length_km / 10.0);
    const double eta_repeater = path_transmission(network_path_depth(fab.m, fab.k), fab,
                                                  fab.coupling_loss_db + fab.conversion_loss_db) *
                                fiber * fab.detector_efficiency;
    const double eta_client = client_device_efficiency * fiber * fab.detector_efficiency;
    const double p = 0.5 * eta_repeater * eta_client;
    if (p > 1.0) throw std::logic_error("p_distant: probability exceeds 1");
    return p;
}

double p_local(const FabricSpec& fab) {
    if (!fab.is_valid()) throw std::invalid_argument("p_local: invalid spec");
    const double eta = path_transmission(local_path_depth(fab.m), fab, fab.coupling_loss_db) *
                       fab.detector_efficiency;
    return 0.5 * eta * eta;
}

Timings timings(const ChannelSpec& ch) {
    if (!ch.is_valid()) throw std::invalid_argument("timings: invalid channel spec");
    return Timings{2.0 * ch.length_km * 1000.0 / ch.fiber_light_speed + ch.prep_time, ch.prep_time};
}

}  // namespace routersim::fabric
