#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "devnet/rng.hpp"
#include "devnet/stats.hpp"
#include "devnet/trainer.hpp"

namespace devnet {

// Index convention, fixed throughout and in every report: i is the seed
// (initial-weights) index over n, j is the architecture index over k.

// ---- dataset partition -----------------------------------------------------

struct Partition {
    std::vector<int> train, val, test;
    std::vector<int> audit;  // independent held-back set, unseen by any selection
};

struct PartitionFractions {
    double train = 0.6, val = 0.2, test = 0.2;
};

// Deterministic shuffled split. Whatever the three fractions leave over
// becomes the audit set.
inline Partition partition_dataset(std::size_t n, const PartitionFractions& f,
                                   std::uint64_t seed) {
    if (!(f.train > 0.0 && f.val > 0.0 && f.test > 0.0))
        throw std::invalid_argument("partition: fractions must be positive");
    if (f.train + f.val + f.test > 1.0 + 1e-12)
        throw std::invalid_argument("partition: fractions must sum to at most 1");
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    Rng rng(derive_seed(seed, "partition"));
    rng.shuffle(idx);
    auto take = [&](std::size_t count, std::size_t& pos) {
        std::vector<int> out(idx.begin() + static_cast<long>(pos),
                             idx.begin() + static_cast<long>(pos + count));
        pos += count;
        return out;
    };
    std::size_t nt = static_cast<std::size_t>(f.train * static_cast<double>(n));
    std::size_t nv = static_cast<std::size_t>(f.val * static_cast<double>(n));
    std::size_t ns = static_cast<std::size_t>(f.test * static_cast<double>(n));
    if (nt == 0 || nv == 0 || ns == 0)
        throw std::invalid_argument("partition: a mandatory set would be empty");
    if (nt + nv + ns > n) throw std::invalid_argument("partition: dataset too small");
    std::size_t pos = 0;
    Partition p;
    p.train = take(nt, pos);
    p.val = take(nv, pos);
    p.test = take(ns, pos);
    p.audit = std::vector<int>(idx.begin() + static_cast<long>(pos), idx.end());
    return p;
}

struct PartitionCheck {
    bool train_val_overlap = false;
    bool train_test_overlap = false;
    bool covers = false;  // union of the four sets is the whole index range
};

inline PartitionCheck check_partition(const Partition& p, std::size_t n) {
    std::vector<int> seen(n, 0);
    auto mark = [&](const std::vector<int>& set, int bit) {
        for (int i : set) {
            if (i < 0 || static_cast<std::size_t>(i) >= n)
                throw std::invalid_argument("partition: index out of range");
            seen[static_cast<std::size_t>(i)] |= bit;
        }
    };
    mark(p.train, 1);
    mark(p.val, 2);
    mark(p.test, 4);
    mark(p.audit, 8);
    PartitionCheck c;
    c.covers = true;
    for (int s : seen) {
        if ((s & 1) && (s & 2)) c.train_val_overlap = true;
        if ((s & 1) && (s & 4)) c.train_test_overlap = true;
        if (s == 0) c.covers = false;
    }
    return c;
}

// ---- hyper-parameter grid ----------------------------------------------------

struct HyperGrid {
    std::vector<ParamMap> architectures;  // a_1 ... a_k
    std::vector<std::uint64_t> seeds;     // w_1 ... w_n
    int k() const { return static_cast<int>(architectures.size()); }
    int n() const { return static_cast<int>(seeds.size()); }
};

struct ScalarRange {
    double center = 0.0;
    double sigma = 0.0;
};

// The three-points-per-scalar construction: each scalar contributes
// {center - sigma, center, center + sigma}, so m scalars give k = 3^m
// architecture vectors (10 scalars would give 59049).
inline std::vector<ParamMap> make_three_point_grid(
    const std::map<std::string, ScalarRange>& scalars) {
    if (scalars.empty()) throw std::invalid_argument("grid: no scalars");
    std::vector<ParamMap> grid{ParamMap{}};
    for (const auto& [name, range] : scalars) {
        std::vector<ParamMap> next;
        next.reserve(grid.size() * 3);
        for (const ParamMap& base : grid) {
            for (double v : {range.center - range.sigma, range.center, range.center + range.sigma}) {
                ParamMap m = base;
                m[name] = v;
                next.push_back(std::move(m));
            }
        }
        grid = std::move(next);
    }
    return grid;
}

inline std::vector<std::uint64_t> derive_grid_seeds(std::uint64_t master, int n) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        seeds.push_back(derive_seed(master, "weights", static_cast<std::uint64_t>(i)));
    return seeds;
}

// ---- the k x n error table ---------------------------------------------------

enum class CellStatus : std::uint8_t { Ok = 0, Failed = 1 };

struct ErrorTable {
    std::vector<ParamMap> archs;
    std::vector<std::uint64_t> seeds;
    // All matrices indexed [i][j] with i the seed index, j the architecture.
    std::vector<std::vector<double>> fit, val, test, audit, wall;
    std::vector<std::vector<CellStatus>> status;
    bool has_audit = false;

    int n() const { return static_cast<int>(seeds.size()); }
    int k() const { return static_cast<int>(archs.size()); }

    std::vector<double> flatten(const std::vector<std::vector<double>>& m) const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n() * k()));
        for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
        return out;
    }
};

// Trains all k*n systems on T and fills the fitting/validation/test (and,
// when the partition has one, audit) error matrices. Cells are independent
// jobs: each is reproducible from (a_j, w_i) alone, so any jobs>1 schedule
// produces a bit-identical table. A cell whose training throws is flagged
// failed and scores 1.0 — dropping it would itself be a post-selection.
inline ErrorTable run_grid(const Trainer& trainer, const HyperGrid& grid, const Dataset& data,
                           const Partition& part, int jobs = 1) {
    if (grid.k() < 1 || grid.n() < 1) throw std::invalid_argument("run_grid: empty grid");
    ErrorTable t;
    t.archs = grid.architectures;
    t.seeds = grid.seeds;
    t.has_audit = !part.audit.empty();
    int n = t.n(), k = t.k();
    auto blank = std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                  std::vector<double>(static_cast<std::size_t>(k), 0.0));
    t.fit = t.val = t.test = t.audit = t.wall = blank;
    t.status.assign(static_cast<std::size_t>(n),
                    std::vector<CellStatus>(static_cast<std::size_t>(k), CellStatus::Ok));

    auto run_cell = [&](int i, int j) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto model = trainer.fit(data, part.train, t.archs[static_cast<std::size_t>(j)],
                                     t.seeds[static_cast<std::size_t>(i)]);
            t.fit[i][j] = model->error_on(data, part.train);
            t.val[i][j] = model->error_on(data, part.val);
            t.test[i][j] = model->error_on(data, part.test);
            if (t.has_audit) t.audit[i][j] = model->error_on(data, part.audit);
        } catch (const std::exception&) {
            t.status[i][j] = CellStatus::Failed;
            t.fit[i][j] = t.val[i][j] = t.test[i][j] = 1.0;
            if (t.has_audit) t.audit[i][j] = 1.0;
        }
        t.wall[i][j] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    int cells = n * k;
    if (jobs <= 1) {
        for (int c = 0; c < cells; ++c) run_cell(c / k, c % k);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int c = next.fetch_add(1); c < cells; c = next.fetch_add(1))
                run_cell(c / k, c % k);
        };
        std::vector<std::thread> pool;
        int threads = std::min(jobs, cells);
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return t;
}

// ---- post-selection selectors -------------------------------------------------

struct Selection {
    int seed_index = 0;  // i*
    int arch_index = 0;  // j*
    double error = 0.0;
};

namespace detail {
inline Selection argmin_cell(const std::vector<std::vector<double>>& m) {
    Selection best{0, 0, m[0][0]};
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            if (m[i][j] < best.error) best = {static_cast<int>(i), static_cast<int>(j), m[i][j]};
    return best;
}
}  // namespace detail

// The luckiest architecture and luckiest initial weights by validation
// error: min over all (i, j), ties to the lexicographically lowest (i, j).
inline Selection psuvs_select(const ErrorTable& t) { return detail::argmin_cell(t.val); }

// Same selection on the test errors. Post-selection on test sets is a
// protocol flaw; the selector exists to demonstrate it and every report
// labels its output PROTOCOL-FLAWED.
inline Selection psuts_select(const ErrorTable& t) { return detail::argmin_cell(t.test); }

struct AveragedSelection {
    int index = 0;
    double mean_error = 0.0;
};

namespace detail {
inline std::vector<double> column_means(const std::vector<std::vector<double>>& m, int n, int k) {
    std::vector<double> means(static_cast<std::size_t>(k), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) means[static_cast<std::size_t>(j)] += m[i][j];
    for (double& v : means) v /= static_cast<double>(n);
    return means;
}
inline std::vector<double> row_means(const std::vector<std::vector<double>>& m, int n, int k) {
    std::vector<double> means(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) means[static_cast<std::size_t>(i)] += m[i][j];
        means[static_cast<std::size_t>(i)] /= static_cast<double>(k);
    }
    return means;
}
inline AveragedSelection argmin_vector(const std::vector<double>& v) {
    AveragedSelection best{0, v[0]};
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < best.mean_error) best = {static_cast<int>(i), v[i]};
    return best;
}
}  // namespace detail

// Random-weights-validated luckiest architecture: for each architecture j,
// average the validation error over all n seeds, then take the argmin.
inline AveragedSelection avg_validated_architecture(const ErrorTable& t) {
    return detail::argmin_vector(detail::column_means(t.val, t.n(), t.k()));
}

// Hyper-parameter-validated luckiest initial weights: symmetric, averaging
// over the k architectures for each seed i.
inline AveragedSelection avg_validated_weights(const ErrorTable& t) {
    return detail::argmin_vector(detail::row_means(t.val, t.n(), t.k()));
}

// Seed-averaged selection on test errors — still flawed, since every term
// under the minimization has peeked into the test set.
inline AveragedSelection psuts_avg_architecture(const ErrorTable& t) {
    return detail::argmin_vector(detail::column_means(t.test, t.n(), t.k()));
}

// ---- n-fold cross-validation ---------------------------------------------------

struct CrossValResult {
    double mean_error = 0.0;
    DistributionSummary distribution;
    std::vector<double> fold_errors;
    std::vector<std::vector<int>> folds;
};

// Disjoint folds covering D (sizes differ by at most one; the remainder is
// spread round-robin). Experiment i trains on everything but fold i and
// tests on fold i.
inline CrossValResult k_fold_cross_validate(const Dataset& data, int n_folds,
                                            const Trainer& trainer, const ParamMap& arch,
                                            std::uint64_t seed) {
    if (n_folds < 2) throw std::invalid_argument("k_fold: need at least 2 folds");
    if (data.size() < static_cast<std::size_t>(n_folds))
        throw std::invalid_argument("k_fold: fewer samples than folds");
    std::vector<int> idx(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) idx[i] = static_cast<int>(i);
    Rng rng(derive_seed(seed, "folds"));
    rng.shuffle(idx);

    CrossValResult r;
    r.folds.assign(static_cast<std::size_t>(n_folds), {});
    for (std::size_t i = 0; i < idx.size(); ++i)
        r.folds[i % static_cast<std::size_t>(n_folds)].push_back(idx[i]);

    for (int f = 0; f < n_folds; ++f) {
        std::vector<int> train_idx;
        train_idx.reserve(idx.size() - r.folds[static_cast<std::size_t>(f)].size());
        for (int g = 0; g < n_folds; ++g)
            if (g != f)
                train_idx.insert(train_idx.end(), r.folds[static_cast<std::size_t>(g)].begin(),
                                 r.folds[static_cast<std::size_t>(g)].end());
        auto model = trainer.fit(data, train_idx, arch,
                                 derive_seed(seed, "fold", static_cast<std::uint64_t>(f)));
        r.fold_errors.push_back(model->error_on(data, r.folds[static_cast<std::size_t>(f)]));
    }
    r.distribution = summarize_distribution(r.fold_errors);
    r.mean_error = r.distribution.mean;
    return r;
}

// ---- the luckiest-network generalization audit ----------------------------------

struct AuditRepeatRow {
    int repeat = 0;
    Selection psuvs, psuts;
    double psuvs_audit_error = 0.0;  // the PSUVS pick's error on the audit set
    double psuts_audit_error = 0.0;
    double grid_mean_val = 0.0;
};

struct AuditResult {
    std::vector<AuditRepeatRow> rows;
    DistributionSummary psuvs_diffs;  // audit error minus selected validation error
    DistributionSummary psuts_diffs;  // audit error minus selected test error
    double psuvs_sign_p = 1.0;        // one-sided sign test: selected error understates
    double psuts_sign_p = 1.0;
    // The two quantities the cross-validation-of-the-luckiest theorem puts
    // side by side (no pass/fail bound is defined for their closeness).
    double mean_luckiest_audit_error = 0.0;
    double mean_grid_val_error = 0.0;
};

// Over `repeats` independent seed draws: run the grid, pick the luckiest
// network by PSUVS (and separately by PSUTS), and evaluate the pick on the
// held-back audit set no selection ever saw. The paired differences measure
// how much the selected-set error understates fresh-data error.
inline AuditResult luckiest_generalization_audit(const Trainer& trainer,
                                                 const std::vector<ParamMap>& archs, int n_seeds,
                                                 const Dataset& data, const Partition& part,
                                                 std::uint64_t master_seed, int repeats,
                                                 int jobs = 1) {
    if (part.audit.empty())
        throw std::invalid_argument("audit: partition has no held-back audit set");
    if (repeats < 10) throw std::invalid_argument("audit: need at least 10 repeats");

    AuditResult result;
    std::vector<double> psuvs_diffs, psuts_diffs;
    double sum_luckiest_audit = 0.0, sum_grid_val = 0.0;
    for (int r = 0; r < repeats; ++r) {
        HyperGrid grid;
        grid.architectures = archs;
        for (int i = 0; i < n_seeds; ++i)
            grid.seeds.push_back(derive_seed(master_seed, "audit-weights",
                                             static_cast<std::uint64_t>(r),
                                             static_cast<std::uint64_t>(i)));
        ErrorTable table = run_grid(trainer, grid, data, part, jobs);

        AuditRepeatRow row;
        row.repeat = r;
        row.psuvs = psuvs_select(table);
        row.psuts = psuts_select(table);
        row.psuvs_audit_error = table.audit[row.psuvs.seed_index][row.psuvs.arch_index];
        row.psuts_audit_error = table.audit[row.psuts.seed_index][row.psuts.arch_index];
        double gm = 0.0;
        for (const auto& vrow : table.val)
            for (double v : vrow) gm += v;
        row.grid_mean_val = gm / static_cast<double>(table.n() * table.k());
        result.rows.push_back(row);

        psuvs_diffs.push_back(row.psuvs_audit_error - row.psuvs.error);
        psuts_diffs.push_back(row.psuts_audit_error - row.psuts.error);
        sum_luckiest_audit += row.psuvs_audit_error;
        sum_grid_val += row.grid_mean_val;
    }

    auto sign_counts = [](const std::vector<double>& diffs) {
        int pos = 0, nonzero = 0;
        for (double d : diffs) {
            if (d > 0.0) ++pos;
            if (d != 0.0) ++nonzero;
        }
        return std::pair<int, int>{pos, nonzero};
    };
    result.psuvs_diffs = summarize_distribution(psuvs_diffs);
    result.psuts_diffs = summarize_distribution(psuts_diffs);
    auto [pv, nv] = sign_counts(psuvs_diffs);
    auto [pt, nt] = sign_counts(psuts_diffs);
    result.psuvs_sign_p = sign_test_p_greater(pv, nv);
    result.psuts_sign_p = sign_test_p_greater(pt, nt);
    result.mean_luckiest_audit_error = sum_luckiest_audit / repeats;
    result.mean_grid_val_error = sum_grid_val / repeats;
    return result;
}

// ---- error-table CSV -------------------------------------------------------------

inline std::string serialize_params(const ParamMap& p) {
    std::string out;
    char buf[64];
    for (const auto& [key, value] : p) {
        if (!out.empty()) out += ';';
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out += key + "=" + buf;
    }
    return out;
}

inline ParamMap parse_params(const std::string& s) {
    ParamMap p;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad arch_params field: " + s);
        p[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return p;
}

// Columns: arch_id, seed_id, arch_params, fit_err, val_err, test_err,
// audit_err, wall_time_s, status. Wall times default to 0 so artifact
// bytes stay reproducible; pass include_timings for real measurements.
inline void write_error_table_csv(std::ostream& os, const ErrorTable& t,
                                  bool include_timings = false) {
    os << "arch_id,seed_id,arch_params,fit_err,val_err,test_err,audit_err,wall_time_s,status\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (int j = 0; j < t.k(); ++j) {
        for (int i = 0; i < t.n(); ++i) {
            os << j << ',' << i << ',' << serialize_params(t.archs[static_cast<std::size_t>(j)])
               << ',' << num(t.fit[i][j]) << ',' << num(t.val[i][j]) << ',' << num(t.test[i][j])
               << ',';
            if (t.has_audit) os << num(t.audit[i][j]);
            os << ',' << num(include_timings ? t.wall[i][j] : 0.0) << ','
               << (t.status[i][j] == CellStatus::Failed ? "failed" : "ok") << '\n';
        }
    }
}

inline ErrorTable read_error_table_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("error table csv: empty file");
    struct Row {
        int j, i;
        ParamMap params;
        double fit, val, test, wall;
        std::optional<double> audit;
        bool failed;
    };
    std::vector<Row> rows;
    int max_i = -1, max_j = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 9) throw std::runtime_error("error table csv: malformed row");
        Row r;
        r.j = std::stoi(cells[0]);
        r.i = std::stoi(cells[1]);
        r.params = parse_params(cells[2]);
        r.fit = std::stod(cells[3]);
        r.val = std::stod(cells[4]);
        r.test = std::stod(cells[5]);
        if (!cells[6].empty()) r.audit = std::stod(cells[6]);
        r.wall = std::stod(cells[7]);
        r.failed = cells[8] == "failed";
        max_i = std::max(max_i, r.i);
        max_j = std::max(max_j, r.j);
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw std::runtime_error("error table csv: no rows");
    ErrorTable t;
    int n = max_i + 1, k = max_j + 1;
    if (static_cast<int>(rows.size()) != n * k)
        throw std::runtime_error("error table csv: incomplete table");
    t.seeds.assign(static_cast<std::size_t>(n), 0);
    t.archs.assign(static_cast<std::size_t>(k), {});
    auto blank = std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                  std::vector<double>(static_cast<std::size_t>(k), 0.0));
    t.fit = t.val = t.test = t.audit = t.wall = blank;
    t.status.assign(static_cast<std::size_t>(n),
                    std::vector<CellStatus>(static_cast<std::size_t>(k), CellStatus::Ok));
    for (const Row& r : rows) {
        t.archs[static_cast<std::size_t>(r.j)] = r.params;
        t.fit[r.i][r.j] = r.fit;
        t.val[r.i][r.j] = r.val;
        t.test[r.i][r.j] = r.test;
        if (r.audit) {
            t.audit[r.i][r.j] = *r.audit;
            t.has_audit = true;
        }
        t.wall[r.i][r.j] = r.wall;
        t.status[r.i][r.j] = r.failed ? CellStatus::Failed : CellStatus::Ok;
    }
    return t;
}

}  // namespace devnet
