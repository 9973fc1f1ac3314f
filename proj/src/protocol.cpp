#include "routersim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace routersim::protocol {

using qstate::BellOutcome;
using qstate::DensityMatrix;

LinkModel make_link(double p_success, double attempt_period) {
    if (!(p_success > 0.0) || p_success > 1.0)
        throw std::invalid_argument("LinkModel: p_success must be in (0, 1]");
    if (!(attempt_period > 0.0)) throw std::invalid_argument("LinkModel: attempt_period must be > 0");
    return LinkModel{p_success, attempt_period, [] { return qstate::bell_state(BellOutcome::PhiPlus); }};
}

void begin_distant_attempt(QubitRegister& reg) {
    if (reg.phase != Phase::IdleAttemptingDistant)
        throw std::logic_error("begin_distant_attempt: register " + std::to_string(reg.id) +
                               " is not idle");
    ++reg.distant_attempts_round;
}

void begin_stored_side_attempt(QubitRegister& reg) {
    if (reg.phase != Phase::AttemptingSecondSide)
        throw std::logic_error("begin_stored_side_attempt: register " + std::to_string(reg.id) +
                               " is not attempting its second side");
    if (!reg.stored) throw std::logic_error("begin_stored_side_attempt: no stored state");
}

void PairingQueue::add(Bank bank, int reg_id, double success_time) {
    if (contains(reg_id)) throw std::logic_error("PairingQueue: register already queued");
    auto& q = side(bank);
    const std::pair<double, int> entry{success_time, reg_id};
    q.insert(std::upper_bound(q.begin(), q.end(), entry), entry);
}

void PairingQueue::remove(int reg_id) {
    auto drop = [reg_id](std::vector<std::pair<double, int>>& q) {
        q.erase(std::remove_if(q.begin(), q.end(), [&](const auto& e) { return e.second == reg_id; }),
                q.end());
    };
    drop(left_);
    drop(right_);
}

bool PairingQueue::contains(int reg_id) const {
    auto in = [reg_id](const std::vector<std::pair<double, int>>& q) {
        return std::any_of(q.begin(), q.end(), [&](const auto& e) { return e.second == reg_id; });
    };
    return in(left_) || in(right_);
}

std::vector<std::pair<int, int>> PairingQueue::pair_fifo() {
    std::vector<std::pair<int, int>> pairs;
    while (!left_.empty() && !right_.empty()) {
        pairs.emplace_back(left_.front().second, right_.front().second);
        left_.erase(left_.begin());
        right_.erase(right_.begin());
    }
    return pairs;
}

std::vector<std::pair<double, int>>& PairingQueue::side(Bank bank) {
    if (bank == Bank::Left) return left_;
    if (bank == Bank::Right) return right_;
    throw std::invalid_argument("PairingQueue: register has no bank");
}

Node::Node(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed)
    : eng_(eng),
      cfg_(cfg),
      bsm_stream_(seed, "site.bsm"),
      readout_stream_(seed, "site.readout"),
      target_(qstate::bell_state(BellOutcome::PhiPlus)) {
    const fabric::Timings t = cfg.resolved_timings();
    t_distant_ = t.t_distant;
    t_local_ = t.t_local;
    t_swap_ = cfg.t_swap_s;
    latency_ = cfg.correction_latency();

    link_left_ = make_link(cfg.p_distant_left(), t_distant_);
    link_right_ = make_link(cfg.p_distant_right(), t_distant_);
    link_local_ = make_link(cfg.p_local(), t_local_);

    attempt_ch_ = noise::attempt_noise_channel(cfg.attempt);
    gate_ch_ = noise::gate_noise_channel(cfg.op_noise.p_gate, 2);
    swap_ch_ = noise::gate_noise_channel(cfg.op_noise.p_swap, 2);

    regs_.resize(cfg.m);
    for (int i = 0; i < cfg.m; ++i) {
        QubitRegister& r = regs_[i];
        r.id = i;
        r.distant_stream =
            std::make_unique<engine::RandomStream>(seed, "reg." + std::to_string(i) + ".distant");
        r.local_stream =
            std::make_unique<engine::RandomStream>(seed, "reg." + std::to_string(i) + ".local");
    }
}

void Node::start() { schedule_cycle(0); }

void Node::schedule_cycle(long index) {
    // Multiply rather than accumulate so equal cycle times compare exactly.
    eng_.schedule(static_cast<double>(index) * t_distant_, "cycle", [this, index] {
        on_cycle();
        schedule_cycle(index + 1);
    });
}

void Node::advance_stored(QubitRegister& reg, double t) {
    if (!reg.stored) return;
    const noise::CoherenceParams& broker = reg.qubit1_is_nuclear ? cfg_.nuclear : cfg_.electron;
    if (t > reg.age_client && !cfg_.client.is_trivial())
        reg.stored = qstate::apply_channel(*reg.stored, {0},
                                           noise::decoherence_channel(t - reg.age_client, cfg_.client));
    if (t > reg.age_broker && !broker.is_trivial())
        reg.stored = qstate::apply_channel(*reg.stored, {1},
                                           noise::decoherence_channel(t - reg.age_broker, broker));
    reg.age_client = std::max(reg.age_client, t);
    reg.age_broker = std::max(reg.age_broker, t);
}

void Node::apply_attempt_noise(QubitRegister& reg) {
    advance_stored(reg, eng_.now());
    reg.stored = qstate::apply_channel(*reg.stored, {1}, attempt_ch_);
    ++reg.attempts_while_stored;
}

void Node::create_heralded_state(QubitRegister& reg, const LinkModel& link) {
    if (reg.stored) throw std::logic_error("register already holds a stored state");
    reg.stored = link.heralded_state();
    reg.qubit1_is_nuclear = false;
    reg.herald_time = eng_.now();
    reg.age_client = reg.age_broker = eng_.now();
    reg.phase = Phase::SwappingToNuclear;
}

void Node::complete_swap(QubitRegister& reg) {
    if (reg.phase != Phase::SwappingToNuclear) throw std::logic_error("complete_swap: wrong phase");
    advance_stored(reg, eng_.now());
    reg.stored = qstate::apply_channel(*reg.stored, {0, 1}, swap_ch_);
    reg.qubit1_is_nuclear = true;
    reg.success_time = eng_.now();
}

DensityMatrix Node::noisy_bsm_step(DensityMatrix rho, int i, int j, int correct_target) {
    rho = qstate::apply_channel(rho, {i, j}, gate_ch_);
    auto [outcome, rest] = qstate::bell_measure(rho, i, j, bsm_stream_);
    const BellOutcome reported = noise::flip_outcome(outcome, cfg_.op_noise.eps_ro, readout_stream_);
    return qstate::pauli_correct(rest, correct_target, reported);
}

double Node::finalize_fidelity(DensityMatrix pair_state) {
    if (cfg_.client_decoherence_during_correction && !cfg_.client.is_trivial() && latency_ > 0) {
        const auto ch = noise::decoherence_channel(latency_, cfg_.client);
        pair_state = qstate::apply_channel(pair_state, {0}, ch);
        pair_state = qstate::apply_channel(pair_state, {1}, ch);
    }
    return qstate::fidelity(pair_state, target_);
}

void Node::record_delivery(DeliveryRecord rec) {
    // Enforce the delivery budget exactly: several registers can deliver
    // inside one cycle event, after request_stop takes effect.
    if (cfg_.n_pairs > 0 && records_.size() >= static_cast<std::size_t>(cfg_.n_pairs)) return;
    records_.push_back(std::move(rec));
    if (cfg_.n_pairs > 0 && records_.size() >= static_cast<std::size_t>(cfg_.n_pairs))
        eng_.request_stop();
}

RouterlessNode::RouterlessNode(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed)
    : Node(eng, cfg, seed) {}

void RouterlessNode::on_cycle() {
    // Resolve attempts started one cycle ago (heralds arrive after the
    // round trip), then start this cycle's attempts.
    for (QubitRegister& reg : regs_) {
        if (!reg.has_pending_attempt) continue;
        reg.has_pending_attempt = false;
        if (!reg.pending_attempt_success) continue;
        if (reg.phase == Phase::IdleAttemptingDistant) {
            create_heralded_state(reg, link_left_);
            eng_.schedule(eng_.now() + t_swap_, "swap", [this, id = reg.id] {
                QubitRegister& r = regs_[id];
                complete_swap(r);
                r.phase = Phase::AttemptingSecondSide;
            });
        } else if (reg.phase == Phase::AttemptingSecondSide) {
            deliver(reg);
        }
    }
    for (QubitRegister& reg : regs_) {
        if (reg.phase == Phase::IdleAttemptingDistant) {
            begin_distant_attempt(reg);
            reg.pending_attempt_success = reg.distant_stream->bernoulli(link_left_.p_success);
            reg.has_pending_attempt = true;
        } else if (reg.phase == Phase::AttemptingSecondSide) {
            begin_stored_side_attempt(reg);
            apply_attempt_noise(reg);
            reg.pending_attempt_success = reg.distant_stream->bernoulli(link_right_.p_success);
            reg.has_pending_attempt = true;
        }
    }
}

void RouterlessNode::deliver(QubitRegister& reg) {
    reg.phase = Phase::Delivering;
    advance_stored(reg, eng_.now());

    // [Alice, nuclear] (x) [electron, Bob], BSM on (nuclear, electron).
    DensityMatrix rho = qstate::tensor(*reg.stored, link_right_.heralded_state());
    DensityMatrix pair_state = noisy_bsm_step(std::move(rho), 1, 2, 1);

    DeliveryRecord rec;
    rec.completion_time = eng_.now() + latency_;
    rec.fidelity = finalize_fidelity(std::move(pair_state));
    rec.idle_cycles_left = reg.attempts_while_stored;
    rec.idle_cycles_right = 0;
    rec.stored_attempts = reg.attempts_while_stored;
    rec.attempt_noise_applications_left = reg.attempts_while_stored;
    rec.first_stage_cycles = reg.distant_attempts_round;
    rec.architecture = Architecture::Routerless;
    rec.left_register = reg.id;
    reg.reset();
    record_delivery(std::move(rec));
}

RouterNode::RouterNode(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed)
    : Node(eng, cfg, seed) {
    for (QubitRegister& reg : regs_) reg.bank = (reg.id < cfg.m / 2) ? Bank::Left : Bank::Right;
}

void RouterNode::on_cycle() {
    for (QubitRegister& reg : regs_) {
        if (!reg.has_pending_attempt) continue;
        reg.has_pending_attempt = false;
        if (!reg.pending_attempt_success) continue;
        create_heralded_state(reg, reg.bank == Bank::Left ? link_left_ : link_right_);
        eng_.schedule(eng_.now() + t_swap_, "swap",
                      [this, id = reg.id] { handle_swap_completion(regs_[id]); });
    }
    for (QubitRegister& reg : regs_) {
        if (reg.phase != Phase::IdleAttemptingDistant) continue;
        begin_distant_attempt(reg);
        const LinkModel& link = reg.bank == Bank::Left ? link_left_ : link_right_;
        reg.pending_attempt_success = reg.distant_stream->bernoulli(link.p_success);
        reg.has_pending_attempt = true;
    }
}

void RouterNode::handle_swap_completion(QubitRegister& reg) {
    complete_swap(reg);
    reg.phase = Phase::AwaitingPair;
    queue_.add(reg.bank, reg.id, reg.success_time);
    form_pairs();
}

void RouterNode::form_pairs() {
    for (const auto& [left_id, right_id] : queue_.pair_fifo()) {
        QubitRegister& left = regs_[left_id];
        QubitRegister& right = regs_[right_id];
        left.phase = Phase::AttemptingLocal;
        right.phase = Phase::AttemptingLocal;

        ActivePair pair;
        pair.left = left_id;
        pair.right = right_id;
        pair.formed_time = eng_.now();
        pair.idle_cycles_left = std::lround((eng_.now() - left.success_time) / t_distant_);
        pair.idle_cycles_right = std::lround((eng_.now() - right.success_time) / t_distant_);
        pair.first_stage_cycles = std::max(left.distant_attempts_round, right.distant_attempts_round);
        pairs_.push_back(pair);

        const std::size_t index = pairs_.size() - 1;
        if (cfg_.serialize_local) {
            station_queue_.push_back(index);
            schedule_station_slot();
        } else {
            schedule_pair_attempt(index);
        }
    }
}

void RouterNode::schedule_station_slot() {
    if (station_scheduled_ || station_queue_.empty()) return;
    station_scheduled_ = true;
    eng_.schedule(eng_.now() + t_local_, "local.slot", [this] { station_slot(); });
}

void RouterNode::station_slot() {
    station_scheduled_ = false;
    while (!station_queue_.empty() && !pairs_[station_queue_.front()].alive) station_queue_.pop_front();
    if (station_queue_.empty()) return;
    const std::size_t index = station_queue_.front();
    station_queue_.pop_front();
    if (!attempt_local(pairs_[index])) station_queue_.push_back(index);
    schedule_station_slot();
}

void RouterNode::schedule_pair_attempt(std::size_t pair_index) {
    eng_.schedule(eng_.now() + t_local_, "local.attempt", [this, pair_index] {
        ActivePair& pair = pairs_[pair_index];
        if (!pair.alive) return;
        if (!attempt_local(pair)) schedule_pair_attempt(pair_index);
    });
}

bool RouterNode::attempt_local(ActivePair& pair) {
    QubitRegister& left = regs_[pair.left];
    QubitRegister& right = regs_[pair.right];
    apply_attempt_noise(left);
    if (cfg_.both_nuclei_attempt_noise)
        apply_attempt_noise(right);
    else
        advance_stored(right, eng_.now());
    ++pair.attempts;
    if (!left.local_stream->bernoulli(link_local_.p_success)) return false;
    deliver(pair);
    return true;
}

void RouterNode::deliver(ActivePair& pair) {
    QubitRegister& left = regs_[pair.left];
    QubitRegister& right = regs_[pair.right];
    left.phase = Phase::Delivering;
    right.phase = Phase::Delivering;
    advance_stored(left, eng_.now());
    advance_stored(right, eng_.now());

    // [Alice, n_L] (x) [e_L, e_R]: BSM on (n_L, e_L), correct e_R.
    DensityMatrix rho = qstate::tensor(*left.stored, link_local_.heralded_state());
    DensityMatrix alice_er = noisy_bsm_step(std::move(rho), 1, 2, 1);
    // [Alice, e_R] (x) [Bob, n_R]: BSM on (e_R, n_R), correct Bob.
    DensityMatrix rho2 = qstate::tensor(alice_er, *right.stored);
    DensityMatrix pair_state = noisy_bsm_step(std::move(rho2), 1, 3, 1);

    DeliveryRecord rec;
    rec.completion_time = eng_.now() + latency_;
    rec.fidelity = finalize_fidelity(std::move(pair_state));
    rec.idle_cycles_left = pair.idle_cycles_left;
    rec.idle_cycles_right = pair.idle_cycles_right;
    rec.stored_attempts = pair.attempts;
    rec.attempt_noise_applications_left = left.attempts_while_stored;
    rec.attempt_noise_applications_right = right.attempts_while_stored;
    rec.first_stage_cycles = pair.first_stage_cycles;
    rec.architecture = Architecture::Router;
    rec.left_register = pair.left;
    rec.right_register = pair.right;

    pair.alive = false;
    left.reset();
    right.reset();
    record_delivery(std::move(rec));
}

RunResult run_architecture(const SimConfig& cfg) { return run_architecture(cfg, cfg.master_seed); }

RunResult run_architecture(const SimConfig& cfg, std::uint64_t seed, bool trace) {
    cfg.validate();
    engine::Engine eng;
    if (trace) eng.enable_trace();

    std::unique_ptr<Node> node;
    if (cfg.architecture == Architecture::Router)
        node = std::make_unique<RouterNode>(eng, cfg, seed);
    else
        node = std::make_unique<RouterlessNode>(eng, cfg, seed);

    node->start();
    const double horizon = cfg.t_max_s > 0 ? cfg.t_max_s : 3.15e7;  // ~1 simulated year
    eng.run_until(horizon);

    RunResult result;
    result.records = node->take_records();
    result.end_time = result.records.empty() ? eng.now() : result.records.back().completion_time;
    result.processed_events = eng.processed_count();
    if (trace) result.trace = eng.trace();
    return result;
}

}  // namespace routersim::protocol
