#include "routersim/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "routersim/stats.hpp"

namespace routersim::harness {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

double parse_double(const std::string& key, const std::string& value) {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        config_error(key + ": expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        config_error(key + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    config_error(key + ": expected true/false, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        config_error(key + ": expected an unsigned integer, got '" + value + "'");
    }
}

struct KeyInfo {
    const char* key;
    const char* default_value;
    const char* note;
    std::function<void(SimConfig&, const std::string&)> apply;
};

// Canonical key table; application order matters (generic channel keys
// precede the per-side overrides).
const std::vector<KeyInfo>& key_table() {
    static const std::vector<KeyInfo> table = {
        {"architecture", "router", "router | routerless",
         [](SimConfig& c, const std::string& v) {
             if (v == "router")
                 c.architecture = Architecture::Router;
             else if (v == "routerless")
                 c.architecture = Architecture::Routerless;
             else
                 config_error("architecture: expected router or routerless, got '" + v + "'");
         }},
        {"protocol.m", "4", "qubit registers at the repeater node",
         [](SimConfig& c, const std::string& v) { c.m = static_cast<int>(parse_long("protocol.m", v)); }},
        {"protocol.n_pairs", "500", "stop after this many deliveries (0 = unbounded)",
         [](SimConfig& c, const std::string& v) {
             c.n_pairs = static_cast<int>(parse_long("protocol.n_pairs", v));
         }},
        {"protocol.t_max_s", "0", "simulated-time stop (0 = unbounded)",
         [](SimConfig& c, const std::string& v) { c.t_max_s = parse_double("protocol.t_max_s", v); }},
        {"protocol.t_swap_s", "1e-06", "electron->nuclear swap duration; placeholder",
         [](SimConfig& c, const std::string& v) { c.t_swap_s = parse_double("protocol.t_swap_s", v); }},
        {"protocol.serialize_local", "true", "one shared local BSM attempt slot per t_local",
         [](SimConfig& c, const std::string& v) {
             c.serialize_local = parse_bool("protocol.serialize_local", v);
         }},
        {"protocol.client_decoherence_during_correction", "false",
         "decohere client qubits during the classical correction latency",
         [](SimConfig& c, const std::string& v) {
             c.client_decoherence_during_correction =
                 parse_bool("protocol.client_decoherence_during_correction", v);
         }},
        {"protocol.both_nuclei_attempt_noise", "true",
         "apply per-attempt noise to both nuclei during local attempts",
         [](SimConfig& c, const std::string& v) {
             c.both_nuclei_attempt_noise = parse_bool("protocol.both_nuclei_attempt_noise", v);
         }},
        {"fabric.m", "8", "register ports of the switch device (sets MZI depths)",
         [](SimConfig& c, const std::string& v) { c.fab.m = static_cast<int>(parse_long("fabric.m", v)); }},
        {"fabric.k", "2", "node degree of the switch device",
         [](SimConfig& c, const std::string& v) { c.fab.k = static_cast<int>(parse_long("fabric.k", v)); }},
        {"fabric.loss_per_mzi_db", "0.3", "placeholder device loss",
         [](SimConfig& c, const std::string& v) {
             c.fab.loss_per_mzi_db = parse_double("fabric.loss_per_mzi_db", v);
         }},
        {"fabric.coupling_loss_db", "1", "chip<->fiber/detector coupling; placeholder",
         [](SimConfig& c, const std::string& v) {
             c.fab.coupling_loss_db = parse_double("fabric.coupling_loss_db", v);
         }},
        {"fabric.conversion_loss_db", "3", "frequency conversion stage; placeholder",
         [](SimConfig& c, const std::string& v) {
             c.fab.conversion_loss_db = parse_double("fabric.conversion_loss_db", v);
         }},
        {"fabric.detector_efficiency", "0.9", "placeholder",
         [](SimConfig& c, const std::string& v) {
             c.fab.detector_efficiency = parse_double("fabric.detector_efficiency", v);
         }},
        {"channel.length_km", "10", "repeater<->detector-station distance, both sides",
         [](SimConfig& c, const std::string& v) {
             const double l = parse_double("channel.length_km", v);
             c.channel_left.length_km = l;
             c.channel_right.length_km = l;
         }},
        {"channel.left.length_km", "", "per-side override",
         [](SimConfig& c, const std::string& v) {
             c.channel_left.length_km = parse_double("channel.left.length_km", v);
         }},
        {"channel.right.length_km", "", "per-side override",
         [](SimConfig& c, const std::string& v) {
             c.channel_right.length_km = parse_double("channel.right.length_km", v);
         }},
        {"channel.attenuation_db_per_km", "0.2", "standard telecom fiber",
         [](SimConfig& c, const std::string& v) {
             const double a = parse_double("channel.attenuation_db_per_km", v);
             c.channel_left.attenuation_db_per_km = a;
             c.channel_right.attenuation_db_per_km = a;
         }},
        {"channel.fiber_light_speed", "2e+08", "m/s",
         [](SimConfig& c, const std::string& v) {
             const double s = parse_double("channel.fiber_light_speed", v);
             c.channel_left.fiber_light_speed = s;
             c.channel_right.fiber_light_speed = s;
         }},
        {"channel.prep_time_s", "6e-06", "state preparation per attempt; placeholder",
         [](SimConfig& c, const std::string& v) {
             const double p = parse_double("channel.prep_time_s", v);
             c.channel_left.prep_time = p;
             c.channel_right.prep_time = p;
         }},
        {"client.device_efficiency", "1", "client-side photon efficiency; placeholder",
         [](SimConfig& c, const std::string& v) {
             c.client_device_efficiency = parse_double("client.device_efficiency", v);
         }},
        {"coherence.electron.t1_s", "0.003", "placeholder",
         [](SimConfig& c, const std::string& v) {
             c.electron.t1 = parse_double("coherence.electron.t1_s", v);
         }},
        {"coherence.electron.t2_s", "0.001", "placeholder",
         [](SimConfig& c, const std::string& v) {
             c.electron.t2 = parse_double("coherence.electron.t2_s", v);
         }},
        {"coherence.nuclear.t1_s", "10", "placeholder",
         [](SimConfig& c, const std::string& v) {
             c.nuclear.t1 = parse_double("coherence.nuclear.t1_s", v);
         }},
        {"coherence.nuclear.t2_s", "0.01", "placeholder",
         [](SimConfig& c, const std::string& v) {
             c.nuclear.t2 = parse_double("coherence.nuclear.t2_s", v);
         }},
        {"coherence.client.t1_s", "inf", "client memory; placeholder",
         [](SimConfig& c, const std::string& v) {
             c.client.t1 = parse_double("coherence.client.t1_s", v);
         }},
        {"coherence.client.t2_s", "inf", "client memory; placeholder",
         [](SimConfig& c, const std::string& v) {
             c.client.t2 = parse_double("coherence.client.t2_s", v);
         }},
        {"noise.attempt.a", "0.00025", "per-attempt nuclear dephasing (NV literature value)",
         [](SimConfig& c, const std::string& v) { c.attempt.a = parse_double("noise.attempt.a", v); }},
        {"noise.attempt.b", "0.0002", "per-attempt nuclear depolarization (NV literature value)",
         [](SimConfig& c, const std::string& v) { c.attempt.b = parse_double("noise.attempt.b", v); }},
        {"noise.p_gate", "0.01", "two-qubit depolarizing probability per BSM; placeholder",
         [](SimConfig& c, const std::string& v) { c.op_noise.p_gate = parse_double("noise.p_gate", v); }},
        {"noise.p_swap", "0.01", "depolarizing probability of the storage swap; placeholder",
         [](SimConfig& c, const std::string& v) { c.op_noise.p_swap = parse_double("noise.p_swap", v); }},
        {"noise.eps_ro", "0.005", "readout flip probability per classical bit; placeholder",
         [](SimConfig& c, const std::string& v) { c.op_noise.eps_ro = parse_double("noise.eps_ro", v); }},
        {"link.p_distant", "0", "direct override; 0 = derive from fabric",
         [](SimConfig& c, const std::string& v) {
             c.p_distant_override = parse_double("link.p_distant", v);
         }},
        {"link.p_local", "0", "direct override; 0 = derive from fabric",
         [](SimConfig& c, const std::string& v) { c.p_local_override = parse_double("link.p_local", v); }},
        {"seed.master", "12345", "master seed for all labeled random streams",
         [](SimConfig& c, const std::string& v) { c.master_seed = parse_u64("seed.master", v); }},
        {"run.runs_per_point", "3", "independent runs per sweep point",
         [](SimConfig& c, const std::string& v) {
             c.runs_per_point = static_cast<int>(parse_long("run.runs_per_point", v));
         }},
    };
    return table;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> values;  // key -> (value, line)
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            config_error("line " + std::to_string(line_no) + ": empty key or value");
        if (values.count(key))
            config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first at line " +
                         std::to_string(values[key].second) + ")");
        values[key] = {value, line_no};
    }

    for (const auto& [key, value] : values) {
        const auto& table = key_table();
        if (std::none_of(table.begin(), table.end(),
                         [&, k = key](const KeyInfo& info) { return k == info.key; }))
            config_error("line " + std::to_string(value.second) + ": unknown key '" + key + "'");
    }

    SimConfig cfg;
    for (const KeyInfo& info : key_table()) {
        auto it = values.find(info.key);
        if (it != values.end()) info.apply(cfg, it->second.first);
    }
    cfg.validate();
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string defaults_table() {
    std::ostringstream out;
    out << "# key                                              default      note\n";
    for (const KeyInfo& info : key_table()) {
        if (std::string(info.default_value).empty()) continue;
        char line[160];
        std::snprintf(line, sizeof(line), "%-50s %-12s %s\n", info.key, info.default_value, info.note);
        out << line;
    }
    out << "\nAll physical values are configuration placeholders unless noted as\n"
           "literature values; override any key to explore other hardware.\n";
    return out.str();
}

SummaryRow summarize(const SimConfig& cfg, const std::vector<protocol::RunResult>& runs) {
    std::vector<double> rates, fids;
    std::vector<double> idle, attempts;
    for (const protocol::RunResult& run : runs) {
        if (run.records.empty() || run.end_time <= 0)
            throw std::runtime_error("summarize: run produced no deliveries");
        rates.push_back(static_cast<double>(run.records.size()) / run.end_time);
        std::vector<double> f;
        for (const auto& rec : run.records) {
            f.push_back(rec.fidelity);
            idle.push_back(static_cast<double>(rec.idle_cycles_left + rec.idle_cycles_right));
            attempts.push_back(static_cast<double>(rec.stored_attempts));
        }
        fids.push_back(stats::mean(f));
    }

    SummaryRow row;
    row.architecture = architecture_name(cfg.architecture);
    row.m = cfg.m;
    row.l_km = cfg.channel_left.length_km;
    row.runs = static_cast<int>(runs.size());
    row.rate_hz_mean = stats::mean(rates);
    row.rate_hz_sem = stats::sem(rates);
    row.fidelity_mean = stats::mean(fids);
    row.fidelity_sem = stats::sem(fids);
    row.infidelity_mean = 1.0 - row.fidelity_mean;
    row.mean_idle_cycles = stats::mean(idle);
    row.mean_stored_attempts = stats::mean(attempts);
    row.master_seed = cfg.master_seed;
    return row;
}

PointResult run_point(const SimConfig& cfg, int runs) {
    if (runs < 1) throw std::invalid_argument("run_point: runs must be >= 1");
    PointResult result;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed =
            engine::RandomStream::derive_seed(cfg.master_seed, "run." + std::to_string(r));
        try {
            result.runs.push_back(protocol::run_architecture(cfg, seed));
        } catch (const std::exception& e) {
            throw std::runtime_error("run " + std::to_string(r) + ": " + e.what());
        }
    }
    result.row = summarize(cfg, result.runs);
    return result;
}

std::vector<SummaryRow> sweep(const SweepGrid& grid, const SimConfig& base) {
    if (grid.m_values.empty() || grid.l_values_km.empty() || grid.architectures.empty())
        throw std::invalid_argument("sweep: empty grid");
    std::vector<SummaryRow> rows;
    for (Architecture arch : grid.architectures)
        for (int m : grid.m_values)
            for (double l : grid.l_values_km) {
                SimConfig cfg = base;
                cfg.architecture = arch;
                cfg.m = m;
                cfg.channel_left.length_km = l;
                cfg.channel_right.length_km = l;
                rows.push_back(run_point(cfg, grid.runs_per_point).row);
            }
    return rows;
}

std::string to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "architecture,m,L_km,runs,rate_hz_mean,rate_hz_sem,fidelity_mean,fidelity_sem,"
           "infidelity_mean,mean_idle_cycles,mean_stored_attempts,master_seed\n";
    for (const SummaryRow& r : rows) {
        out << r.architecture << ',' << r.m << ',' << fmt17(r.l_km) << ',' << r.runs << ','
            << fmt17(r.rate_hz_mean) << ',' << fmt17(r.rate_hz_sem) << ',' << fmt17(r.fidelity_mean)
            << ',' << fmt17(r.fidelity_sem) << ',' << fmt17(r.infidelity_mean) << ','
            << fmt17(r.mean_idle_cycles) << ',' << fmt17(r.mean_stored_attempts) << ','
            << r.master_seed << '\n';
    }
    return out.str();
}

std::vector<SummaryRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("architecture,m,L_km,runs,", 0) != 0)
        throw std::invalid_argument("parse_csv: bad or missing header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 12) throw std::invalid_argument("parse_csv: expected 12 fields");
        SummaryRow r;
        r.architecture = fields[0];
        r.m = static_cast<int>(parse_long("m", fields[1]));
        r.l_km = parse_double("L_km", fields[2]);
        r.runs = static_cast<int>(parse_long("runs", fields[3]));
        r.rate_hz_mean = parse_double("rate_hz_mean", fields[4]);
        r.rate_hz_sem = parse_double("rate_hz_sem", fields[5]);
        r.fidelity_mean = parse_double("fidelity_mean", fields[6]);
        r.fidelity_sem = parse_double("fidelity_sem", fields[7]);
        r.infidelity_mean = parse_double("infidelity_mean", fields[8]);
        r.mean_idle_cycles = parse_double("mean_idle_cycles", fields[9]);
        r.mean_stored_attempts = parse_double("mean_stored_attempts", fields[10]);
        r.master_seed = parse_u64("master_seed", fields[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

void disable_noise(SimConfig& cfg) {
    cfg.attempt = {};
    cfg.op_noise = {};
    cfg.t_swap_s = 0.0;
    cfg.electron = {};
    cfg.nuclear = {};
    cfg.client = {};
}

std::vector<protocol::DeliveryRecord> pooled_records(const SimConfig& cfg, int runs) {
    std::vector<protocol::DeliveryRecord> all;
    for (const auto& run : run_point(cfg, runs).runs)
        all.insert(all.end(), run.records.begin(), run.records.end());
    return all;
}

void report_z(OracleReport& rep, const std::string& what, double observed, double expected,
              double sigma) {
    const double z = sigma > 0 ? (observed - expected) / sigma : 0.0;
    char line[256];
    std::snprintf(line, sizeof(line), "%-38s observed=%.6g expected=%.6g z=%+.2f", what.c_str(),
                  observed, expected, z);
    rep.lines.emplace_back(line);
    if (std::abs(z) > 3.0) rep.pass = false;
}

OracleReport oracle_order_stat(SimConfig cfg) {
    cfg.architecture = Architecture::Router;
    cfg.m = 2;
    disable_noise(cfg);
    if (cfg.p_distant_override <= 0) cfg.p_distant_override = 0.2;
    cfg.p_local_override = 1.0;
    cfg.n_pairs = std::max(cfg.n_pairs, 1000);

    const auto records = pooled_records(cfg, 1);
    std::vector<double> first_stage;
    for (const auto& rec : records) first_stage.push_back(static_cast<double>(rec.first_stage_cycles));

    const double p = cfg.p_distant_override;
    OracleReport rep;
    report_z(rep, "mean first-stage cycles (max of 2 geoms)", stats::mean(first_stage),
             stats::geometric_max_mean(p),
             stats::geometric_max_stddev(p) / std::sqrt(static_cast<double>(first_stage.size())));
    return rep;
}

OracleReport oracle_attempt_noise(const SimConfig& cfg) {
    const auto ch = noise::attempt_noise_channel(cfg.attempt);
    const auto phi = qstate::bell_state(qstate::BellOutcome::PhiPlus);
    const double observed = qstate::fidelity(qstate::apply_channel(phi, {1}, ch), phi);
    const double expected = 1.0 - cfg.attempt.a - cfg.attempt.b + cfg.attempt.b / 4.0;

    OracleReport rep;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-38s observed=%.9f expected=%.9f |diff|=%.2e", "single-attempt Bell fidelity",
                  observed, expected, std::abs(observed - expected));
    rep.lines.emplace_back(line);
    if (std::abs(observed - expected) > 1e-6) rep.pass = false;
    return rep;
}

OracleReport oracle_teleport_noiseless(SimConfig cfg) {
    cfg.architecture = Architecture::Router;
    cfg.m = std::max(2, cfg.m - cfg.m % 2);
    disable_noise(cfg);
    if (cfg.p_distant_override <= 0) cfg.p_distant_override = 0.5;
    if (cfg.p_local_override <= 0) cfg.p_local_override = 0.5;
    cfg.n_pairs = std::min(std::max(cfg.n_pairs, 100), 500);

    OracleReport rep;
    double worst = 0.0;
    for (const auto& rec : pooled_records(cfg, 1)) worst = std::max(worst, std::abs(1.0 - rec.fidelity));
    char line[256];
    std::snprintf(line, sizeof(line), "%-38s max |1 - fidelity| = %.2e (tol 1e-10)",
                  "noiseless double teleportation", worst);
    rep.lines.emplace_back(line);
    if (worst > 1e-10) rep.pass = false;
    return rep;
}

OracleReport oracle_geometric_dephasing(SimConfig cfg) {
    cfg.architecture = Architecture::Routerless;
    cfg.m = 1;
    disable_noise(cfg);
    cfg.nuclear.t2 = 1.0e-3;
    cfg.nuclear.t1 = std::numeric_limits<double>::infinity();
    if (cfg.p_distant_override <= 0) cfg.p_distant_override = 0.2;
    cfg.n_pairs = std::max(cfg.n_pairs, 2000);

    const double p = cfg.p_distant_override;
    const double c = cfg.resolved_timings().t_distant / cfg.nuclear.t2;
    // Storage spans (G + 1) cycles: one heralding round trip plus G
    // second-side attempts.
    const double e1 = std::exp(-c) * stats::geometric_exp_decay(p, c);
    const double e2 = std::exp(-2.0 * c) * stats::geometric_exp_decay(p, 2.0 * c);
    const double expected = (1.0 + e1) / 2.0;
    const double sigma_one = std::sqrt(std::max(e2 - e1 * e1, 0.0)) / 2.0;

    std::vector<double> fids;
    for (const auto& rec : pooled_records(cfg, 1)) fids.push_back(rec.fidelity);

    OracleReport rep;
    report_z(rep, "geometric-averaged dephasing fidelity", stats::mean(fids), expected,
             sigma_one / std::sqrt(static_cast<double>(fids.size())));
    return rep;
}

OracleReport oracle_stored_attempts(SimConfig cfg) {
    cfg.n_pairs = std::max(cfg.n_pairs, 2000);
    OracleReport rep;

    SimConfig rl = cfg;
    rl.architecture = Architecture::Routerless;
    rl.m = std::max(1, rl.m);
    {
        std::vector<double> attempts;
        for (const auto& rec : pooled_records(rl, 1))
            attempts.push_back(static_cast<double>(rec.stored_attempts));
        const double p = rl.p_distant_right();
        report_z(rep, "routerless stored attempts vs 1/p_distant", stats::mean(attempts),
                 stats::geometric_mean_attempts(p),
                 stats::geometric_stddev(p) / std::sqrt(static_cast<double>(attempts.size())));
    }

    SimConfig rt = cfg;
    rt.architecture = Architecture::Router;
    rt.m = std::max(2, rt.m - rt.m % 2);
    {
        std::vector<double> attempts;
        for (const auto& rec : pooled_records(rt, 1))
            attempts.push_back(static_cast<double>(rec.stored_attempts));
        const double p = rt.p_local();
        report_z(rep, "router stored attempts vs 1/p_local", stats::mean(attempts),
                 stats::geometric_mean_attempts(p),
                 stats::geometric_stddev(p) / std::sqrt(static_cast<double>(attempts.size())));
    }
    return rep;
}

}  // namespace

std::vector<std::string> oracle_scenarios() {
    return {"order-stat", "attempt-noise", "teleport-noiseless", "geometric-dephasing", "stored-attempts"};
}

OracleReport oracle_check(const std::string& scenario, const SimConfig& cfg) {
    if (scenario == "order-stat") return oracle_order_stat(cfg);
    if (scenario == "attempt-noise") return oracle_attempt_noise(cfg);
    if (scenario == "teleport-noiseless") return oracle_teleport_noiseless(cfg);
    if (scenario == "geometric-dephasing") return oracle_geometric_dephasing(cfg);
    if (scenario == "stored-attempts") return oracle_stored_attempts(cfg);
    throw std::invalid_argument("oracle_check: scenario '" + scenario + "' is not registered");
}

}  // namespace routersim::harness
