#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "devnet/vecmath.hpp"

namespace devnet {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Deterministic finite automaton that outputs its state at every step
// (an agent FA). The transition map is total over Q x Sigma.
struct FiniteAutomaton {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    int initial_state = 0;
    std::vector<int> delta;  // [q * |alphabet| + sigma] -> q'

    int num_states() const { return static_cast<int>(states.size()); }
    int num_symbols() const { return static_cast<int>(alphabet.size()); }
    int next(int q, int sigma) const {
        if (q < 0 || q >= num_states() || sigma < 0 || sigma >= num_symbols())
            throw std::invalid_argument("FiniteAutomaton: unknown state or symbol");
        return delta[static_cast<std::size_t>(q * num_symbols() + sigma)];
    }
    std::optional<int> state_index(const std::string& s) const {
        auto it = std::find(states.begin(), states.end(), s);
        if (it == states.end()) return std::nullopt;
        return static_cast<int>(it - states.begin());
    }
    std::optional<int> symbol_index(const std::string& s) const {
        auto it = std::find(alphabet.begin(), alphabet.end(), s);
        if (it == alphabet.end()) return std::nullopt;
        return static_cast<int>(it - alphabet.begin());
    }
};

// State sequence (q1 ... qn) visited from the initial state.
inline std::vector<int> run_fa(const FiniteAutomaton& fa, const std::vector<int>& input) {
    std::vector<int> out;
    out.reserve(input.size());
    int q = fa.initial_state;
    for (int sigma : input) {
        q = fa.next(q, sigma);
        out.push_back(q);
    }
    return out;
}

enum class HeadMove { Left, Right, Halt };

struct TmAction {
    int next_state;
    int write_symbol;
    HeadMove move;
};

// Deterministic Turing machine with an explicit halt move and a total
// transition map over Q x Gamma.
struct TuringMachine {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> tape_alphabet;
    int blank = 0;
    int initial_state = 0;
    std::vector<TmAction> delta;  // [q * |Gamma| + symbol]

    int num_states() const { return static_cast<int>(states.size()); }
    int num_symbols() const { return static_cast<int>(tape_alphabet.size()); }
    const TmAction& action(int q, int sym) const {
        if (q < 0 || q >= num_states() || sym < 0 || sym >= num_symbols())
            throw std::invalid_argument("TuringMachine: unknown state or symbol");
        return delta[static_cast<std::size_t>(q * num_symbols() + sym)];
    }
    std::optional<int> symbol_index(const std::string& s) const {
        auto it = std::find(tape_alphabet.begin(), tape_alphabet.end(), s);
        if (it == tape_alphabet.end()) return std::nullopt;
        return static_cast<int>(it - tape_alphabet.begin());
    }
};

// Two-sided unbounded tape; cells default to the blank symbol.
class Tape {
public:
    explicit Tape(int blank) : blank_(blank) {}
    int read(long pos) const {
        const std::vector<int>& side = pos >= 0 ? right_ : left_;
        std::size_t i = pos >= 0 ? static_cast<std::size_t>(pos) : static_cast<std::size_t>(-pos - 1);
        return i < side.size() ? side[i] : blank_;
    }
    void write(long pos, int sym) {
        std::vector<int>& side = pos >= 0 ? right_ : left_;
        std::size_t i = pos >= 0 ? static_cast<std::size_t>(pos) : static_cast<std::size_t>(-pos - 1);
        if (i >= side.size()) side.resize(i + 1, blank_);
        side[i] = sym;
    }
    // Canonical content: symbols from the leftmost to the rightmost
    // non-blank cell, leading/trailing blanks trimmed.
    std::vector<int> trimmed() const {
        long lo = -static_cast<long>(left_.size());
        long hi = static_cast<long>(right_.size()) - 1;
        while (lo <= hi && read(lo) == blank_) ++lo;
        while (hi >= lo && read(hi) == blank_) --hi;
        std::vector<int> out;
        for (long p = lo; p <= hi; ++p) out.push_back(read(p));
        return out;
    }

private:
    int blank_;
    std::vector<int> right_;  // positions 0, 1, 2, ...
    std::vector<int> left_;   // positions -1, -2, ...
};

struct TmRun {
    std::vector<int> tape;  // trimmed final content
    bool halted = false;
    long steps = 0;
};

// Standard deterministic semantics; stops at the halt move or when the
// step budget runs out (budget exhaustion is not an error).
inline TmRun run_tm(const TuringMachine& tm, const std::vector<int>& input, long step_budget) {
    if (step_budget < 0) throw std::invalid_argument("run_tm: negative step budget");
    Tape tape(tm.blank);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] < 0 || input[i] >= tm.num_symbols())
            throw std::invalid_argument("run_tm: input symbol out of range");
        tape.write(static_cast<long>(i), input[i]);
    }
    int q = tm.initial_state;
    long head = 0;
    TmRun run;
    while (run.steps < step_budget) {
        const TmAction& a = tm.action(q, tape.read(head));
        tape.write(head, a.write_symbol);
        run.steps += 1;
        q = a.next_state;
        if (a.move == HeadMove::Halt) {
            run.halted = true;
            break;
        }
        head += (a.move == HeadMove::Right) ? 1 : -1;
    }
    run.tape = tape.trimmed();
    return run;
}

// ---- machine spec files -------------------------------------------------
//
// Line-based plain text (FORMATS.md). FA:
//     states: even odd
//     alphabet: 0 1
//     initial: even
//     even 0 -> even
//     ...
// TM replaces "alphabet:" with "tape-alphabet:" plus "blank:", and each
// transition carries a write symbol and a head move (L, R or H):
//     scan 1 -> scan 1 R
// '#' starts a comment. Duplicate or missing transitions are rejected.

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

struct RawMachine {
    std::map<std::string, std::vector<std::string>> headers;  // key -> tokens
    struct Line {
        int number;
        std::vector<std::string> tokens;
    };
    std::vector<Line> transitions;
};

inline RawMachine read_raw(std::istream& is) {
    RawMachine raw;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0].back() == ':') {
            std::string key = toks[0].substr(0, toks[0].size() - 1);
            if (raw.headers.count(key)) throw ParseError(lineno, "duplicate header '" + key + "'");
            raw.headers[key] = {toks.begin() + 1, toks.end()};
        } else {
            raw.transitions.push_back({lineno, toks});
        }
    }
    return raw;
}

inline std::vector<std::string> require_header(const RawMachine& raw, const std::string& key) {
    auto it = raw.headers.find(key);
    if (it == raw.headers.end() || it->second.empty())
        throw ParseError(0, "missing or empty header '" + key + ":'");
    return it->second;
}

inline void check_distinct(const std::vector<std::string>& names, const std::string& what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw ParseError(0, "duplicate " + what + " '" + names[i] + "'");
}

}  // namespace detail

inline FiniteAutomaton parse_fa(std::istream& is, const std::string& name = "fa") {
    auto raw = detail::read_raw(is);
    FiniteAutomaton fa;
    fa.name = name;
    fa.states = detail::require_header(raw, "states");
    fa.alphabet = detail::require_header(raw, "alphabet");
    detail::check_distinct(fa.states, "state");
    detail::check_distinct(fa.alphabet, "symbol");
    auto initial = detail::require_header(raw, "initial");
    auto init_idx = fa.state_index(initial[0]);
    if (!init_idx) throw ParseError(0, "initial state '" + initial[0] + "' not declared");
    fa.initial_state = *init_idx;

    std::size_t total = static_cast<std::size_t>(fa.num_states() * fa.num_symbols());
    fa.delta.assign(total, -1);
    for (const auto& t : raw.transitions) {
        if (t.tokens.size() != 4 || t.tokens[2] != "->")
            throw ParseError(t.number, "expected 'state symbol -> state'");
        auto q = fa.state_index(t.tokens[0]);
        auto s = fa.symbol_index(t.tokens[1]);
        auto qn = fa.state_index(t.tokens[3]);
        if (!q) throw ParseError(t.number, "unknown state '" + t.tokens[0] + "'");
        if (!s) throw ParseError(t.number, "unknown symbol '" + t.tokens[1] + "'");
        if (!qn) throw ParseError(t.number, "unknown state '" + t.tokens[3] + "'");
        std::size_t slot = static_cast<std::size_t>(*q * fa.num_symbols() + *s);
        if (fa.delta[slot] != -1)
            throw ParseError(t.number,
                             "duplicate transition for (" + t.tokens[0] + ", " + t.tokens[1] + ")");
        fa.delta[slot] = *qn;
    }
    for (int q = 0; q < fa.num_states(); ++q)
        for (int s = 0; s < fa.num_symbols(); ++s)
            if (fa.delta[static_cast<std::size_t>(q * fa.num_symbols() + s)] == -1)
                throw ParseError(0, "missing transition for (" + fa.states[static_cast<std::size_t>(q)] +
                                        ", " + fa.alphabet[static_cast<std::size_t>(s)] + ")");
    return fa;
}

inline TuringMachine parse_tm(std::istream& is, const std::string& name = "tm") {
    auto raw = detail::read_raw(is);
    TuringMachine tm;
    tm.name = name;
    tm.states = detail::require_header(raw, "states");
    tm.tape_alphabet = detail::require_header(raw, "tape-alphabet");
    detail::check_distinct(tm.states, "state");
    detail::check_distinct(tm.tape_alphabet, "symbol");
    auto blank = detail::require_header(raw, "blank");
    auto blank_idx = tm.symbol_index(blank[0]);
    if (!blank_idx) throw ParseError(0, "blank symbol '" + blank[0] + "' not in tape alphabet");
    tm.blank = *blank_idx;
    auto initial = detail::require_header(raw, "initial");
    auto init_it = std::find(tm.states.begin(), tm.states.end(), initial[0]);
    if (init_it == tm.states.end())
        throw ParseError(0, "initial state '" + initial[0] + "' not declared");
    tm.initial_state = static_cast<int>(init_it - tm.states.begin());

    std::size_t total = static_cast<std::size_t>(tm.num_states() * tm.num_symbols());
    tm.delta.assign(total, TmAction{-1, -1, HeadMove::Halt});
    std::vector<bool> seen(total, false);
    for (const auto& t : raw.transitions) {
        if (t.tokens.size() != 6 || t.tokens[2] != "->")
            throw ParseError(t.number, "expected 'state symbol -> state write move'");
        auto q_it = std::find(tm.states.begin(), tm.states.end(), t.tokens[0]);
        auto s = tm.symbol_index(t.tokens[1]);
        auto qn_it = std::find(tm.states.begin(), tm.states.end(), t.tokens[3]);
        auto w = tm.symbol_index(t.tokens[4]);
        if (q_it == tm.states.end()) throw ParseError(t.number, "unknown state '" + t.tokens[0] + "'");
        if (!s) throw ParseError(t.number, "unknown symbol '" + t.tokens[1] + "'");
        if (qn_it == tm.states.end())
            throw ParseError(t.number, "unknown state '" + t.tokens[3] + "'");
        if (!w) throw ParseError(t.number, "unknown symbol '" + t.tokens[4] + "'");
        HeadMove move;
        if (t.tokens[5] == "L") move = HeadMove::Left;
        else if (t.tokens[5] == "R") move = HeadMove::Right;
        else if (t.tokens[5] == "H") move = HeadMove::Halt;
        else throw ParseError(t.number, "head move must be L, R or H, got '" + t.tokens[5] + "'");
        int q = static_cast<int>(q_it - tm.states.begin());
        std::size_t slot = static_cast<std::size_t>(q * tm.num_symbols() + *s);
        if (seen[slot])
            throw ParseError(t.number,
                             "duplicate transition for (" + t.tokens[0] + ", " + t.tokens[1] + ")");
        seen[slot] = true;
        tm.delta[slot] = {static_cast<int>(qn_it - tm.states.begin()), *w, move};
    }
    for (int q = 0; q < tm.num_states(); ++q)
        for (int s = 0; s < tm.num_symbols(); ++s)
            if (!seen[static_cast<std::size_t>(q * tm.num_symbols() + s)])
                throw ParseError(0, "missing transition for (" + tm.states[static_cast<std::size_t>(q)] +
                                        ", " + tm.tape_alphabet[static_cast<std::size_t>(s)] + ")");
    return tm;
}

// ---- one-hot codec -------------------------------------------------------

// Bridges symbols to emergent vectors: sensory inputs are one-hot over the
// input alphabet; motor vectors are one-hot per concept zone. An FA uses a
// single zone (the state); a TM control uses three (next state, write
// symbol, head move).
class OneHotCodec {
public:
    static OneHotCodec for_fa(const FiniteAutomaton& fa) {
        OneHotCodec c;
        c.x_dim_ = fa.num_symbols();
        c.zones_ = {fa.num_states()};
        return c;
    }
    static OneHotCodec for_tm(const TuringMachine& tm) {
        OneHotCodec c;
        c.x_dim_ = tm.num_symbols();
        c.zones_ = {tm.num_states(), tm.num_symbols(), 3};
        return c;
    }

    int x_dim() const { return x_dim_; }
    int z_dim() const {
        int d = 0;
        for (int s : zones_) d += s;
        return d;
    }
    const std::vector<int>& zones() const { return zones_; }

    Vec encode_symbol(int sigma) const {
        if (sigma < 0 || sigma >= x_dim_) throw std::invalid_argument("codec: symbol out of range");
        Vec x(static_cast<std::size_t>(x_dim_), 0.0);
        x[static_cast<std::size_t>(sigma)] = 1.0;
        return x;
    }
    std::optional<int> decode_symbol(const Vec& x) const {
        return decode_slice(x, 0, x_dim_);
    }

    // One-hot in a single zone, the rest left silent.
    Vec encode_zone_value(int zone, int value) const {
        Vec z(static_cast<std::size_t>(z_dim()), 0.0);
        int offset = zone_offset(zone);
        if (value < 0 || value >= zones_[static_cast<std::size_t>(zone)])
            throw std::invalid_argument("codec: zone value out of range");
        z[static_cast<std::size_t>(offset + value)] = 1.0;
        return z;
    }
    Vec encode_state(int q) const { return encode_zone_value(0, q); }

    Vec encode_action(int next_state, int write_symbol, HeadMove move) const {
        if (zones_.size() != 3) throw std::logic_error("codec: not a TM action codec");
        Vec z = encode_zone_value(0, next_state);
        int o1 = zone_offset(1), o2 = zone_offset(2);
        if (write_symbol < 0 || write_symbol >= zones_[1])
            throw std::invalid_argument("codec: write symbol out of range");
        z[static_cast<std::size_t>(o1 + write_symbol)] = 1.0;
        z[static_cast<std::size_t>(o2 + static_cast<int>(move))] = 1.0;
        return z;
    }

    std::optional<int> decode_zone(const Vec& z, int zone) const {
        return decode_slice(z, zone_offset(zone), zones_[static_cast<std::size_t>(zone)]);
    }
    std::optional<int> decode_state(const Vec& z) const { return decode_zone(z, 0); }
    std::optional<std::tuple<int, int, HeadMove>> decode_action(const Vec& z) const {
        if (zones_.size() != 3) throw std::logic_error("codec: not a TM action codec");
        auto q = decode_zone(z, 0);
        auto w = decode_zone(z, 1);
        auto m = decode_zone(z, 2);
        if (!q || !w || !m) return std::nullopt;
        return std::make_tuple(*q, *w, static_cast<HeadMove>(*m));
    }

private:
    int zone_offset(int zone) const {
        if (zone < 0 || zone >= static_cast<int>(zones_.size()))
            throw std::invalid_argument("codec: zone out of range");
        int o = 0;
        for (int i = 0; i < zone; ++i) o += zones_[static_cast<std::size_t>(i)];
        return o;
    }
    static std::optional<int> decode_slice(const Vec& v, int offset, int size) {
        int best = -1;
        double best_v = 0.0;
        for (int i = 0; i < size; ++i) {
            double x = v[static_cast<std::size_t>(offset + i)];
            if (x > best_v) {
                best_v = x;
                best = i;
            }
        }
        if (best < 0) return std::nullopt;
        return best;
    }

    int x_dim_ = 0;
    std::vector<int> zones_;
};

}  // namespace devnet
