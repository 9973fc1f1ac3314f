#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "routersim/config.hpp"
#include "routersim/engine.hpp"
#include "routersim/noise.hpp"
#include "routersim/qstate.hpp"

namespace routersim::protocol {

enum class Phase {
    IdleAttemptingDistant,
    SwappingToNuclear,
    AwaitingPair,
    AttemptingLocal,
    AttemptingSecondSide,
    Delivering,
};

enum class Bank { Left, Right, Unassigned };

// One entanglement link: success probability, attempt period, and the
// post-herald two-qubit state (already normalized to Phi+ by local
// corrections at herald time).
struct LinkModel {
    double p_success;
    double attempt_period;
    std::function<qstate::DensityMatrix()> heralded_state;
};

LinkModel make_link(double p_success, double attempt_period);

// One NV-style register: qubit 0 of the stored state is the client half,
// qubit 1 is the electron (broker) until the swap, the nuclear spin after.
struct QubitRegister {
    int id = 0;
    Bank bank = Bank::Unassigned;
    Phase phase = Phase::IdleAttemptingDistant;

    std::optional<qstate::DensityMatrix> stored;
    bool qubit1_is_nuclear = false;
    double age_client = 0.0;   // last decoherence-advance time, qubit 0
    double age_broker = 0.0;   // last decoherence-advance time, qubit 1

    double herald_time = 0.0;
    double success_time = 0.0;          // swap completion, not herald
    long attempts_while_stored = 0;     // attempt-noise applications on this state
    long distant_attempts_round = 0;    // distant attempts since last reset

    bool has_pending_attempt = false;
    bool pending_attempt_success = false;

    std::unique_ptr<engine::RandomStream> distant_stream;
    std::unique_ptr<engine::RandomStream> local_stream;

    void reset() {
        phase = Phase::IdleAttemptingDistant;
        stored.reset();
        qubit1_is_nuclear = false;
        attempts_while_stored = 0;
        distant_attempts_round = 0;
        has_pending_attempt = false;
    }
};

// State-machine guards. Throw std::logic_error on violation.
void begin_distant_attempt(QubitRegister& reg);
void begin_stored_side_attempt(QubitRegister& reg);

struct DeliveryRecord {
    double completion_time = 0.0;
    double fidelity = 0.0;
    long idle_cycles_left = 0;
    long idle_cycles_right = 0;
    long stored_attempts = 0;
    long attempt_noise_applications_left = 0;   // audit: noise-channel applications on each stored state
    long attempt_noise_applications_right = 0;
    long first_stage_cycles = 0;  // distant cycles until both sides of the delivery heralded
    Architecture architecture = Architecture::Router;
    int left_register = -1;
    int right_register = -1;
};

// FIFO cross-bank pairing queue ordered by ascending success_time.
class PairingQueue {
public:
    void add(Bank bank, int reg_id, double success_time);
    void remove(int reg_id);
    bool contains(int reg_id) const;
    std::size_t left_size() const { return left_.size(); }
    std::size_t right_size() const { return right_.size(); }

    // Greedily pairs queue heads until one bank empties.
    std::vector<std::pair<int, int>> pair_fifo();

private:
    std::vector<std::pair<double, int>>& side(Bank bank);
    std::vector<std::pair<double, int>> left_, right_;
};

struct RunResult {
    std::vector<DeliveryRecord> records;
    double end_time = 0.0;
    std::uint64_t processed_events = 0;
    std::vector<std::pair<double, std::string>> trace;
};

// Common machinery of both architectures: the global distant-attempt
// cycle, brokered storage with lazy decoherence, and noisy BSM delivery.
class Node {
public:
    Node(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed);
    virtual ~Node() = default;

    void start();
    const std::vector<DeliveryRecord>& records() const { return records_; }
    std::vector<DeliveryRecord> take_records() { return std::move(records_); }

    double t_distant() const { return t_distant_; }
    double t_local() const { return t_local_; }

protected:
    virtual void on_cycle() = 0;

    void schedule_cycle(long index);
    // Applies idle decoherence to both qubits of the stored state up to t.
    void advance_stored(QubitRegister& reg, double t);
    void apply_attempt_noise(QubitRegister& reg);
    void create_heralded_state(QubitRegister& reg, const LinkModel& link);
    void complete_swap(QubitRegister& reg);
    // One noisy BSM teleport step: gate noise on (i, j), Bell measurement,
    // readout-corrupted correction on correct_target of the remainder.
    qstate::DensityMatrix noisy_bsm_step(qstate::DensityMatrix rho, int i, int j, int correct_target);
    double finalize_fidelity(qstate::DensityMatrix pair_state);
    void record_delivery(DeliveryRecord rec);

    engine::Engine& eng_;
    const SimConfig& cfg_;
    std::vector<QubitRegister> regs_;
    std::vector<DeliveryRecord> records_;

    LinkModel link_left_, link_right_, link_local_;
    double t_distant_, t_local_, t_swap_, latency_;
    qstate::KrausChannel attempt_ch_, gate_ch_, swap_ch_;
    engine::RandomStream bsm_stream_, readout_stream_;
    qstate::DensityMatrix target_;
};

// Standard multiplexed repeater: each register serially links left then
// right and teleports with a single electron-nuclear BSM.
class RouterlessNode : public Node {
public:
    RouterlessNode(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed);

protected:
    void on_cycle() override;

private:
    void deliver(QubitRegister& reg);
};

// Router: two banks of m/2 registers, FIFO pairing, local on-chip
// entanglement between paired electrons, and a double BSM delivery.
class RouterNode : public Node {
public:
    RouterNode(engine::Engine& eng, const SimConfig& cfg, std::uint64_t seed);

    const PairingQueue& pairing_queue() const { return queue_; }

protected:
    void on_cycle() override;

private:
    struct ActivePair {
        int left, right;
        double formed_time;
        long attempts = 0;
        long idle_cycles_left = 0, idle_cycles_right = 0;
        long first_stage_cycles = 0;
        bool alive = true;
    };

    void handle_swap_completion(QubitRegister& reg);
    void form_pairs();
    void schedule_station_slot();
    void station_slot();
    void schedule_pair_attempt(std::size_t pair_index);
    // Returns true on local success (pair delivered).
    bool attempt_local(ActivePair& pair);
    void deliver(ActivePair& pair);

    PairingQueue queue_;
    std::vector<ActivePair> pairs_;
    std::deque<std::size_t> station_queue_;
    bool station_scheduled_ = false;
};

RunResult run_architecture(const SimConfig& cfg);
RunResult run_architecture(const SimConfig& cfg, std::uint64_t seed, bool trace = false);

}  // namespace routersim::protocol
