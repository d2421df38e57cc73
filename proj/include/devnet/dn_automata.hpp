#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "devnet/automata.hpp"
#include "devnet/dn.hpp"
#include "devnet/rng.hpp"

namespace devnet {

struct TeachLog {
    std::vector<double> epoch_errors;  // mean developmental error per epoch
    int transitions = 0;
    bool capacity_warning = false;  // Y capacity below the transition count
};

inline DnConfig dn_config_for_codec(const OneHotCodec& codec, int capacity,
                                    std::uint64_t seed = 0) {
    DnConfig cfg;
    cfg.x_dim = codec.x_dim();
    cfg.z_dim = codec.z_dim();
    cfg.z_zones = codec.zones();
    cfg.y_capacity = capacity;
    cfg.seed = seed;
    return cfg;
}

namespace detail {

// Transition list in lexicographic (q, sigma) order, optionally shuffled.
inline std::vector<std::pair<int, int>> transition_order(int num_states, int num_symbols,
                                                         std::optional<std::uint64_t> shuffle_seed) {
    std::vector<std::pair<int, int>> order;
    order.reserve(static_cast<std::size_t>(num_states * num_symbols));
    for (int q = 0; q < num_states; ++q)
        for (int s = 0; s < num_symbols; ++s) order.emplace_back(q, s);
    if (shuffle_seed) {
        Rng rng(*shuffle_seed);
        rng.shuffle(order);
    }
    return order;
}

}  // namespace detail

// Presents every transition (q, sigma) -> q' as one supervised step: the
// motor context is clamped to q, the sensory input is sigma, and the
// supervised motor is q'. Each transition is an independent teaching event.
inline TeachLog teach_fa(DevNetwork& net, const FiniteAutomaton& fa, const OneHotCodec& codec,
                         int epochs, std::optional<std::uint64_t> order_seed = std::nullopt) {
    if (epochs < 1) throw std::invalid_argument("teach_fa: epochs must be >= 1");
    TeachLog log;
    log.transitions = fa.num_states() * fa.num_symbols();
    log.capacity_warning = net.y_area().capacity < log.transitions;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        auto order = detail::transition_order(
            fa.num_states(), fa.num_symbols(),
            order_seed ? std::optional<std::uint64_t>(
                             derive_seed(*order_seed, "teach-order", static_cast<std::uint64_t>(epoch)))
                       : std::nullopt);
        double err_sum = 0.0;
        for (auto [q, s] : order) {
            net.clamp_motor(codec.encode_state(q));
            StepResult res = net.step(codec.encode_symbol(s), codec.encode_state(fa.next(q, s)));
            err_sum += res.error.value_or(0.0);
        }
        log.epoch_errors.push_back(err_sum / static_cast<double>(order.size()));
    }
    return log;
}

struct EquivalenceReport {
    std::vector<std::pair<int, int>> mismatches;  // (state, symbol)
    int total = 0;
    bool equivalent() const { return mismatches.empty(); }
};

// Probes every (q, sigma) pair against delta(q, sigma). Each probe runs on
// its own copy of the network, so verification never disturbs it and the
// probes are order-independent.
inline EquivalenceReport verify_fa_equivalence(const DevNetwork& net, const FiniteAutomaton& fa,
                                               const OneHotCodec& codec) {
    EquivalenceReport report;
    report.total = fa.num_states() * fa.num_symbols();
    for (int q = 0; q < fa.num_states(); ++q) {
        for (int s = 0; s < fa.num_symbols(); ++s) {
            DevNetwork probe = net;
            probe.clamp_motor(codec.encode_state(q));
            StepResult res = probe.step(codec.encode_symbol(s));
            auto decoded = codec.decode_state(res.z_out);
            if (!decoded || *decoded != fa.next(q, s)) report.mismatches.emplace_back(q, s);
        }
    }
    return report;
}

// TM control teaching: motor = (next state, write symbol, head move).
inline TeachLog teach_tm_control(DevNetwork& net, const TuringMachine& tm, const OneHotCodec& codec,
                                 int epochs, std::optional<std::uint64_t> order_seed = std::nullopt) {
    if (epochs < 1) throw std::invalid_argument("teach_tm_control: epochs must be >= 1");
    TeachLog log;
    log.transitions = tm.num_states() * tm.num_symbols();
    log.capacity_warning = net.y_area().capacity < log.transitions;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        auto order = detail::transition_order(
            tm.num_states(), tm.num_symbols(),
            order_seed ? std::optional<std::uint64_t>(
                             derive_seed(*order_seed, "teach-order", static_cast<std::uint64_t>(epoch)))
                       : std::nullopt);
        double err_sum = 0.0;
        for (auto [q, s] : order) {
            const TmAction& a = tm.action(q, s);
            net.clamp_motor(codec.encode_state(q));
            StepResult res = net.step(codec.encode_symbol(s),
                                      codec.encode_action(a.next_state, a.write_symbol, a.move));
            err_sum += res.error.value_or(0.0);
        }
        log.epoch_errors.push_back(err_sum / static_cast<double>(order.size()));
    }
    return log;
}

struct DnTmRun {
    std::vector<int> tape;
    bool halted = false;
    long steps = 0;
    // Steps at which the motor output failed to decode (untaught control
    // transitions); the run stops at the first one.
    std::vector<long> undecodable_steps;
};

// The DN is the machine's control: per step it reads the symbol under the
// head, its motor context is clamped to the current state, and its motor
// output decodes to (next state, write, move). Runs on a working copy.
inline DnTmRun run_tm_via_dn(const DevNetwork& net, const TuringMachine& tm,
                             const OneHotCodec& codec, const std::vector<int>& input,
                             long step_budget) {
    if (step_budget < 0) throw std::invalid_argument("run_tm_via_dn: negative step budget");
    DevNetwork control = net;
    Tape tape(tm.blank);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] < 0 || input[i] >= tm.num_symbols())
            throw std::invalid_argument("run_tm_via_dn: input symbol out of range");
        tape.write(static_cast<long>(i), input[i]);
    }
    int q = tm.initial_state;
    long head = 0;
    DnTmRun run;
    while (run.steps < step_budget) {
        int sym = tape.read(head);
        control.clamp_motor(codec.encode_state(q));
        StepResult res = control.step(codec.encode_symbol(sym));
        auto action = codec.decode_action(res.z_out);
        run.steps += 1;
        if (!action) {
            run.undecodable_steps.push_back(run.steps);
            break;
        }
        auto [next_q, write, move] = *action;
        tape.write(head, write);
        q = next_q;
        if (move == HeadMove::Halt) {
            run.halted = true;
            break;
        }
        head += (move == HeadMove::Right) ? 1 : -1;
    }
    run.tape = tape.trimmed();
    return run;
}

}  // namespace devnet
