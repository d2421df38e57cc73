#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "devnet/error_tracker.hpp"
#include "devnet/lca.hpp"
#include "devnet/rng.hpp"
#include "devnet/vecmath.hpp"

namespace devnet {

// An ordered pool of neurons of which exactly the first spawn_boundary are
// active. The boundary only ever grows.
struct Area {
    std::vector<NeuronState> neurons;
    int capacity = 0;
    int spawn_boundary = 0;
};

// Activates the next inactive neuron and memorizes context_input exactly
// (first firing has retention rate 0). Returns the new neuron's index.
inline int spawn_neuron(Area& area, const Vec& context_input) {
    if (area.spawn_boundary >= area.capacity)
        throw std::logic_error("spawn_neuron: no free neurons left");
    int idx = area.spawn_boundary;
    NeuronState& n = area.neurons[static_cast<std::size_t>(idx)];
    n.active = true;
    n.firing_age = 0;
    n = lca_update(std::move(n), context_input, 1.0);
    area.spawn_boundary += 1;
    return idx;
}

// Motor vectors are partitioned into concept zones (e.g. next-state, write
// symbol, head move); each zone holds one neuron per concept value.
using ZoneLayout = std::vector<int>;

// Index of the firing unit in a zone slice, or -1 when nothing fires
// (no strictly positive component). Ties break to the lowest index.
inline int zone_winner(const Vec& z, int offset, int size) {
    int best = -1;
    double best_v = 0.0;
    for (int i = 0; i < size; ++i) {
        double v = z[static_cast<std::size_t>(offset + i)];
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

// Per-concept classification error: 0 iff every zone's firing unit agrees.
inline double motor_error(const Vec& z_out, const Vec& z_desired, const ZoneLayout& zones) {
    if (z_out.size() != z_desired.size())
        throw std::invalid_argument("motor_error: dimension mismatch");
    int offset = 0;
    for (int size : zones) {
        if (zone_winner(z_out, offset, size) != zone_winner(z_desired, offset, size))
            return 1.0;
        offset += size;
    }
    return 0.0;
}

// Secondary metric: Euclidean norm of the raw vector difference.
inline double motor_error_norm(const Vec& z_out, const Vec& z_desired) {
    return distance(z_out, z_desired);
}

struct Context {
    Vec x;
    Vec y;  // k-sparse hidden response
    Vec z;
};

struct DnConfig {
    int x_dim = 0;
    int z_dim = 0;
    ZoneLayout z_zones;  // defaults to one zone of z_dim
    int y_capacity = 0;
    int top_k = 1;
    MatchSchedule schedule;
    // m(t) starts at 0, which would never recruit; recruitment fires whenever
    // a virgin neuron exists and the best match is below max(m(t), spawn_floor).
    double spawn_floor = 0.95;
    bool lateral_y = false;  // include previous y as a third context part
    std::uint64_t seed = 0;  // initializes virgin weights (provably irrelevant)
};

struct StepResult {
    Vec y;            // hidden response after competition
    Vec z_out;        // motor output (supervised value when supervised)
    Vec z_predicted;  // the network's own motor prediction
    bool spawned = false;
    bool capacity_event = false;
    std::optional<double> error;  // recorded developmental error, if any
};

struct LifetimeRow {
    long long t;
    std::optional<double> e;
    double mean_error;
    int spawned_count;
    bool capacity_event;
};

// The skull-closed developmental network: sensory area X, hidden area Y,
// motor area Z. One step per discrete time instant, no iteration inside a
// step. Hidden memory is reachable only through step(); the motor context
// is externally teachable (clamp_motor) like any motor supervision.
//
// A step consumes the sensory input x together with the stored previous
// context (y, z):
//   1. every active Y neuron computes its pre-response to the context
//      (x-part and z-part unit-normalized separately, then concatenated);
//      if the best match is below the recruitment threshold and a virgin
//      neuron remains, it is spawned and memorizes the context exactly,
//      otherwise the top-k matched neurons fire and update;
//   2. Z responds to the sparse y: per zone, the unit with the largest
//      response fires; under supervision the supervised units fire instead,
//      and the firing unit of each zone updates toward y;
//   3. the stored context is replaced and time advances by 1.
//
// When a supervised (or desired) motor vector is known, the developmental
// error of the step is the prediction's per-concept error against it, and
// the lifetime tracker records it.
class DevNetwork {
public:
    explicit DevNetwork(DnConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.x_dim <= 0 || cfg_.z_dim <= 0)
            throw std::invalid_argument("DevNetwork: x_dim and z_dim must be positive");
        if (cfg_.y_capacity <= 0)
            throw std::invalid_argument("DevNetwork: y_capacity must be positive");
        if (cfg_.top_k < 1) throw std::invalid_argument("DevNetwork: top_k must be >= 1");
        validate_schedule(cfg_.schedule);
        if (cfg_.z_zones.empty()) cfg_.z_zones = {cfg_.z_dim};
        int zsum = 0;
        for (int s : cfg_.z_zones) zsum += s;
        if (zsum != cfg_.z_dim)
            throw std::invalid_argument("DevNetwork: zone sizes must sum to z_dim");

        y_.capacity = cfg_.y_capacity;
        y_.neurons.resize(static_cast<std::size_t>(cfg_.y_capacity));
        z_.capacity = cfg_.z_dim;
        z_.spawn_boundary = cfg_.z_dim;  // motor units are pre-allocated
        z_.neurons.resize(static_cast<std::size_t>(cfg_.z_dim));

        Rng rng(derive_seed(cfg_.seed, "dn-virgin-weights"));
        int ctx = context_dim();
        for (auto& n : y_.neurons) {
            n.weight.resize(static_cast<std::size_t>(ctx));
            for (double& w : n.weight) w = rng.uniform(-1.0, 1.0);
        }
        for (auto& n : z_.neurons) {
            n.active = true;
            n.weight.resize(static_cast<std::size_t>(cfg_.y_capacity));
            for (double& w : n.weight) w = rng.uniform(-1.0, 1.0);
        }
        last_x_.assign(static_cast<std::size_t>(cfg_.x_dim), 0.0);
        last_y_.assign(static_cast<std::size_t>(cfg_.y_capacity), 0.0);
        last_z_.assign(static_cast<std::size_t>(cfg_.z_dim), 0.0);
    }

    int context_dim() const {
        return cfg_.x_dim + (cfg_.lateral_y ? cfg_.y_capacity : 0) + cfg_.z_dim;
    }

    // Externally set the motor context (state supervision between steps).
    void clamp_motor(const Vec& z) {
        if (static_cast<int>(z.size()) != cfg_.z_dim)
            throw std::invalid_argument("clamp_motor: dimension mismatch");
        if (!all_finite(z)) throw std::invalid_argument("clamp_motor: non-finite value");
        last_z_ = z;
        state_initialized_ = true;
    }

    StepResult step(const Vec& x, const std::optional<Vec>& supervised_z = std::nullopt,
                    const std::optional<Vec>& desired_z = std::nullopt) {
        if (static_cast<int>(x.size()) != cfg_.x_dim)
            throw std::invalid_argument("dn_step: sensory dimension mismatch");
        if (!all_finite(x)) throw std::invalid_argument("dn_step: non-finite sensory input");
        if (supervised_z && static_cast<int>(supervised_z->size()) != cfg_.z_dim)
            throw std::invalid_argument("dn_step: supervised motor dimension mismatch");
        if (desired_z && static_cast<int>(desired_z->size()) != cfg_.z_dim)
            throw std::invalid_argument("dn_step: desired motor dimension mismatch");

        // Inception: the first supervision also establishes the initial
        // state z0 unless the state was already set explicitly.
        if (time_ == 0 && !state_initialized_ && supervised_z) last_z_ = *supervised_z;

        Vec context = assemble_context(x);

        // Hidden competition over active neurons; virgin (never-fired)
        // neurons respond 0 by definition.
        Vec responses(static_cast<std::size_t>(y_.spawn_boundary), 0.0);
        double best = 0.0;
        bool any_active = y_.spawn_boundary > 0;
        for (int i = 0; i < y_.spawn_boundary; ++i) {
            const NeuronState& n = y_.neurons[static_cast<std::size_t>(i)];
            double r = (n.firing_age == 0) ? 0.0 : pre_response(n, context);
            responses[static_cast<std::size_t>(i)] = r;
            if (r > best) best = r;
        }

        double threshold =
            std::max(match_threshold(static_cast<double>(time_), cfg_.schedule), cfg_.spawn_floor);

        StepResult out;
        out.y.assign(static_cast<std::size_t>(cfg_.y_capacity), 0.0);
        bool want_spawn = !any_active || best < threshold;
        if (want_spawn && y_.spawn_boundary < y_.capacity) {
            int idx = spawn_neuron(y_, context);
            out.y[static_cast<std::size_t>(idx)] = 1.0;
            out.spawned = true;
        } else {
            if (want_spawn) out.capacity_event = true;
            for (const Winner& w : top_k_compete(responses, cfg_.top_k)) {
                NeuronState& n = y_.neurons[static_cast<std::size_t>(w.index)];
                n = lca_update(std::move(n), context, w.response);
                out.y[static_cast<std::size_t>(w.index)] = w.response;
            }
        }

        // Motor prediction from the sparse hidden response.
        out.z_predicted = predict_motor(out.y);
        out.z_out = supervised_z ? *supervised_z : out.z_predicted;

        // Z learning: the firing unit of each zone follows y.
        int offset = 0;
        for (int size : cfg_.z_zones) {
            int w = zone_winner(out.z_out, offset, size);
            if (w >= 0) {
                NeuronState& n = z_.neurons[static_cast<std::size_t>(offset + w)];
                n = lca_update(std::move(n), out.y, 1.0);
            }
            offset += size;
        }

        const Vec* desired = supervised_z ? &*supervised_z : (desired_z ? &*desired_z : nullptr);
        if (desired) {
            out.error = motor_error(out.z_predicted, *desired, cfg_.z_zones);
            tracker_.record(*out.error);
        }

        last_x_ = x;
        last_y_ = out.y;
        last_z_ = out.z_out;
        state_initialized_ = true;
        time_ += 1;
        log_.push_back({time_, out.error, tracker_.mean(), y_.spawn_boundary, out.capacity_event});
        return out;
    }

    const DnConfig& config() const { return cfg_; }
    const Area& y_area() const { return y_; }
    const Area& z_area() const { return z_; }
    long long time() const { return time_; }
    const DevErrorTracker& tracker() const { return tracker_; }
    const std::vector<LifetimeRow>& lifetime_log() const { return log_; }
    Context last_context() const { return {last_x_, last_y_, last_z_}; }

    void write_lifetime_csv(std::ostream& os) const {
        os << "t,e_t,avg_err,spawned_count,capacity_event\n";
        char buf[64];
        for (const LifetimeRow& r : log_) {
            os << r.t << ',';
            if (r.e) {
                std::snprintf(buf, sizeof buf, "%.17g", *r.e);
                os << buf;
            }
            std::snprintf(buf, sizeof buf, "%.17g", r.mean_error);
            os << ',' << buf << ',' << r.spawned_count << ',' << (r.capacity_event ? 1 : 0)
               << '\n';
        }
    }

    // ---- snapshots (bit-exact, versioned text; see FORMATS.md) ----

    void save(std::ostream& os) const {
        os << "devnet-snapshot v1\n";
        os << "x_dim " << cfg_.x_dim << "\nz_dim " << cfg_.z_dim << "\n";
        os << "zones " << cfg_.z_zones.size();
        for (int s : cfg_.z_zones) os << ' ' << s;
        os << "\ncapacity " << cfg_.y_capacity << "\ntop_k " << cfg_.top_k << "\n";
        os << "delta " << hexf(cfg_.schedule.delta) << "\nt1 "
           << hexf(cfg_.schedule.childhood_length) << "\n";
        os << "spawn_floor " << hexf(cfg_.spawn_floor) << "\nlateral_y "
           << (cfg_.lateral_y ? 1 : 0) << "\nseed " << cfg_.seed << "\n";
        os << "time " << time_ << "\nstate_initialized " << (state_initialized_ ? 1 : 0)
           << "\ny_boundary " << y_.spawn_boundary << "\n";
        for (const NeuronState& n : y_.neurons) write_neuron(os, "yneuron", n);
        for (const NeuronState& n : z_.neurons) write_neuron(os, "zneuron", n);
        write_vec(os, "last_x", last_x_);
        write_vec(os, "last_y", last_y_);
        write_vec(os, "last_z", last_z_);
        os << "tracker " << tracker_.count() << ' ' << hexf(tracker_.mean());
        for (double e : tracker_.log()) os << ' ' << hexf(e);
        os << "\n";
    }

    static DevNetwork load(std::istream& is) {
        std::string line;
        if (!std::getline(is, line) || line != "devnet-snapshot v1")
            throw std::runtime_error("snapshot: bad header");
        DnConfig cfg;
        long long time = 0;
        int state_init = 0, y_boundary = 0;
        expect_kv(is, "x_dim") >> cfg.x_dim;
        expect_kv(is, "z_dim") >> cfg.z_dim;
        {
            auto ss = expect_kv(is, "zones");
            std::size_t nz;
            ss >> nz;
            cfg.z_zones.resize(nz);
            for (auto& s : cfg.z_zones) ss >> s;
        }
        expect_kv(is, "capacity") >> cfg.y_capacity;
        expect_kv(is, "top_k") >> cfg.top_k;
        cfg.schedule.delta = read_hexf(expect_kv(is, "delta"));
        cfg.schedule.childhood_length = read_hexf(expect_kv(is, "t1"));
        cfg.spawn_floor = read_hexf(expect_kv(is, "spawn_floor"));
        int lat = 0;
        expect_kv(is, "lateral_y") >> lat;
        cfg.lateral_y = lat != 0;
        expect_kv(is, "seed") >> cfg.seed;
        expect_kv(is, "time") >> time;
        expect_kv(is, "state_initialized") >> state_init;
        expect_kv(is, "y_boundary") >> y_boundary;

        DevNetwork net(cfg);
        net.time_ = time;
        net.state_initialized_ = state_init != 0;
        net.y_.spawn_boundary = y_boundary;
        for (auto& n : net.y_.neurons) n = read_neuron(is, "yneuron");
        for (auto& n : net.z_.neurons) n = read_neuron(is, "zneuron");
        net.last_x_ = read_vec(is, "last_x");
        net.last_y_ = read_vec(is, "last_y");
        net.last_z_ = read_vec(is, "last_z");
        {
            auto ss = expect_kv(is, "tracker");
            std::size_t count;
            ss >> count;
            std::string tok;
            ss >> tok;
            double mean = parse_hexf(tok);
            std::vector<double> log;
            log.reserve(count);
            for (std::size_t i = 0; i < count; ++i) {
                ss >> tok;
                log.push_back(parse_hexf(tok));
            }
            net.tracker_ = DevErrorTracker::restore(mean, std::move(log));
        }
        return net;
    }

private:
    Vec assemble_context(const Vec& x) const {
        Vec ctx;
        ctx.reserve(static_cast<std::size_t>(context_dim()));
        Vec xn = normalized(x);
        ctx.insert(ctx.end(), xn.begin(), xn.end());
        if (cfg_.lateral_y) {
            Vec yn = normalized(last_y_);
            ctx.insert(ctx.end(), yn.begin(), yn.end());
        }
        Vec zn = normalized(last_z_);
        ctx.insert(ctx.end(), zn.begin(), zn.end());
        return ctx;
    }

    Vec predict_motor(const Vec& y) const {
        Vec z(static_cast<std::size_t>(cfg_.z_dim), 0.0);
        int offset = 0;
        for (int size : cfg_.z_zones) {
            int best = -1;
            double best_v = 0.0;
            for (int i = 0; i < size; ++i) {
                const NeuronState& n = z_.neurons[static_cast<std::size_t>(offset + i)];
                double v = (n.firing_age == 0) ? 0.0 : dot(n.weight, y);
                if (v > best_v) {
                    best_v = v;
                    best = i;
                }
            }
            if (best >= 0) z[static_cast<std::size_t>(offset + best)] = 1.0;
            offset += size;
        }
        return z;
    }

    static std::string hexf(double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%a", v);
        return buf;
    }
    static double parse_hexf(const std::string& tok) { return std::strtod(tok.c_str(), nullptr); }
    static double read_hexf(std::istringstream ss) {
        std::string tok;
        ss >> tok;
        return parse_hexf(tok);
    }
    static std::istringstream expect_kv(std::istream& is, const std::string& key) {
        std::string line;
        if (!std::getline(is, line))
            throw std::runtime_error("snapshot: unexpected end of file, wanted " + key);
        std::istringstream ss(line);
        std::string k;
        ss >> k;
        if (k != key) throw std::runtime_error("snapshot: expected key " + key + ", got " + k);
        return ss;
    }
    static void write_neuron(std::ostream& os, const char* tag, const NeuronState& n) {
        os << tag << ' ' << (n.active ? 1 : 0) << ' ' << n.firing_age << ' ' << n.weight.size();
        for (double w : n.weight) os << ' ' << hexf(w);
        os << '\n';
    }
    static NeuronState read_neuron(std::istream& is, const char* tag) {
        auto ss = expect_kv(is, tag);
        NeuronState n;
        int active = 0;
        std::size_t dim;
        ss >> active >> n.firing_age >> dim;
        n.active = active != 0;
        n.weight.resize(dim);
        std::string tok;
        for (auto& w : n.weight) {
            ss >> tok;
            w = parse_hexf(tok);
        }
        return n;
    }
    static void write_vec(std::ostream& os, const char* tag, const Vec& v) {
        os << tag << ' ' << v.size();
        for (double x : v) os << ' ' << hexf(x);
        os << '\n';
    }
    static Vec read_vec(std::istream& is, const char* tag) {
        auto ss = expect_kv(is, tag);
        std::size_t dim;
        ss >> dim;
        Vec v(dim);
        std::string tok;
        for (auto& x : v) {
            ss >> tok;
            x = parse_hexf(tok);
        }
        return v;
    }

    DnConfig cfg_;
    Area y_;
    Area z_;
    Vec last_x_, last_y_, last_z_;
    bool state_initialized_ = false;
    long long time_ = 0;
    DevErrorTracker tracker_;
    std::vector<LifetimeRow> log_;
};

}  // namespace devnet
