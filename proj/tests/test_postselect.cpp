#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "devnet/postselect.hpp"
#include "devnet/rng.hpp"

using namespace devnet;

namespace {

// Build an ErrorTable directly from matrices (n rows of seeds, k columns).
ErrorTable table_from(const std::vector<std::vector<double>>& val,
                      const std::vector<std::vector<double>>& test = {}) {
    ErrorTable t;
    std::size_t n = val.size(), k = val[0].size();
    t.seeds.assign(n, 0);
    t.archs.assign(k, {});
    for (std::size_t j = 0; j < k; ++j) t.archs[j]["id"] = static_cast<double>(j);
    t.val = val;
    t.test = test.empty() ? val : test;
    t.fit = val;
    t.audit = val;
    t.wall.assign(n, std::vector<double>(k, 0.0));
    t.status.assign(n, std::vector<CellStatus>(k, CellStatus::Ok));
    return t;
}

// Trainer that always reports the same error: the degenerate oracle for
// cross-validation and audit plumbing.
class ConstantTrainer : public Trainer {
public:
    explicit ConstantTrainer(double err) : err_(err) {}
    std::string name() const override { return "constant"; }
    std::unique_ptr<Model> fit(const Dataset&, const std::vector<int>&, const ParamMap&,
                               std::uint64_t) const override {
        struct M : Model {
            double e;
            explicit M(double v) : e(v) {}
            double error_on(const Dataset&, const std::vector<int>&) const override { return e; }
        };
        return std::make_unique<M>(err_);
    }

private:
    double err_;
};

// Trainer whose error depends deterministically on (arch, seed): lets grid
// tests cover selection without real training.
class SyntheticTrainer : public Trainer {
public:
    std::string name() const override { return "synthetic"; }
    std::unique_ptr<Model> fit(const Dataset&, const std::vector<int>&, const ParamMap& arch,
                               std::uint64_t seed) const override {
        struct M : Model {
            double e;
            explicit M(double v) : e(v) {}
            double error_on(const Dataset&, const std::vector<int>&) const override { return e; }
        };
        Rng rng(derive_seed(seed, "synthetic", static_cast<std::uint64_t>(param_or(arch, "id", 0))));
        return std::make_unique<M>(rng.uniform());
    }
};

class ThrowingTrainer : public Trainer {
public:
    std::string name() const override { return "throwing"; }
    std::unique_ptr<Model> fit(const Dataset&, const std::vector<int>&, const ParamMap&,
                               std::uint64_t) const override {
        throw std::runtime_error("training exploded");
    }
};

Dataset tiny_dataset(std::size_t n = 20) {
    GaussianClustersSpec spec;
    spec.size = n;
    return make_gaussian_clusters(spec, 1);
}

Partition trivial_partition(std::size_t n) {
    Partition p;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 4 == 3) p.audit.push_back(static_cast<int>(i));
        else if (i % 4 == 2) p.test.push_back(static_cast<int>(i));
        else if (i % 4 == 1) p.val.push_back(static_cast<int>(i));
        else p.train.push_back(static_cast<int>(i));
    }
    return p;
}

}  // namespace

TEST(PartitionTest, SizesFollowFractions) {
    Partition p = partition_dataset(10, {0.6, 0.2, 0.2}, 5);
    EXPECT_EQ(p.train.size(), 6u);
    EXPECT_EQ(p.val.size(), 2u);
    EXPECT_EQ(p.test.size(), 2u);
    EXPECT_TRUE(p.audit.empty());
    PartitionCheck c = check_partition(p, 10);
    EXPECT_FALSE(c.train_val_overlap);
    EXPECT_FALSE(c.train_test_overlap);
    EXPECT_TRUE(c.covers);
}

TEST(PartitionTest, DeterministicFromSeed) {
    Partition a = partition_dataset(50, {0.5, 0.25, 0.25}, 9);
    Partition b = partition_dataset(50, {0.5, 0.25, 0.25}, 9);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.val, b.val);
    EXPECT_EQ(a.test, b.test);
}

TEST(PartitionTest, RemainderBecomesAuditSet) {
    Partition p = partition_dataset(100, {0.5, 0.2, 0.2}, 3);
    EXPECT_EQ(p.audit.size(), 10u);
    std::set<int> all;
    for (const auto* set : {&p.train, &p.val, &p.test, &p.audit})
        for (int i : *set) EXPECT_TRUE(all.insert(i).second) << "index " << i << " duplicated";
    EXPECT_EQ(all.size(), 100u);
}

TEST(PartitionTest, EmptyMandatorySetRejected) {
    EXPECT_THROW(partition_dataset(10, {0.6, 0.01, 0.2}, 1), std::invalid_argument);
    EXPECT_THROW(partition_dataset(10, {0.0, 0.5, 0.5}, 1), std::invalid_argument);
    EXPECT_THROW(partition_dataset(10, {0.8, 0.3, 0.3}, 1), std::invalid_argument);
}

TEST(PartitionTest, OverlapDetectorFires) {
    Partition p = partition_dataset(20, {0.5, 0.25, 0.25}, 2);
    p.val = p.train;  // validation-vanished variant
    PartitionCheck c = check_partition(p, 20);
    EXPECT_TRUE(c.train_val_overlap);
}

TEST(ThreePointGrid, BuildsCartesianProduct) {
    auto grid = make_three_point_grid({{"a", {1.0, 0.5}}, {"b", {10.0, 2.0}}});
    ASSERT_EQ(grid.size(), 9u);  // 3^2
    std::set<std::pair<double, double>> combos;
    for (const auto& g : grid) combos.insert({g.at("a"), g.at("b")});
    EXPECT_EQ(combos.size(), 9u);
    EXPECT_TRUE(combos.count({0.5, 8.0}));
    EXPECT_TRUE(combos.count({1.5, 12.0}));
}

TEST(RunGrid, OneByOneTable) {
    Dataset d = tiny_dataset();
    Partition p = trivial_partition(d.size());
    HyperGrid grid;
    grid.architectures = {{{"id", 0.0}}};
    grid.seeds = {1};
    ErrorTable t = run_grid(ConstantTrainer(0.3), grid, d, p);
    EXPECT_EQ(t.n(), 1);
    EXPECT_EQ(t.k(), 1);
    EXPECT_DOUBLE_EQ(t.val[0][0], 0.3);
    EXPECT_TRUE(t.has_audit);
}

TEST(RunGrid, FailedCellScoresOneAndIsFlagged) {
    Dataset d = tiny_dataset();
    Partition p = trivial_partition(d.size());
    HyperGrid grid;
    grid.architectures = {{{"id", 0.0}}, {{"id", 1.0}}};
    grid.seeds = {1, 2, 3};
    ErrorTable t = run_grid(ThrowingTrainer(), grid, d, p);
    for (int i = 0; i < t.n(); ++i)
        for (int j = 0; j < t.k(); ++j) {
            EXPECT_EQ(t.status[i][j], CellStatus::Failed);
            EXPECT_DOUBLE_EQ(t.val[i][j], 1.0);
        }
}

TEST(RunGrid, BitIdenticalAcrossRerunsAndSchedules) {
    Dataset d = tiny_dataset(40);
    Partition p = trivial_partition(d.size());
    HyperGrid grid;
    grid.architectures = {{{"id", 0.0}}, {{"id", 1.0}}};
    grid.seeds = derive_grid_seeds(77, 3);
    SyntheticTrainer trainer;
    ErrorTable serial = run_grid(trainer, grid, d, p, 1);
    ErrorTable rerun = run_grid(trainer, grid, d, p, 1);
    ErrorTable parallel = run_grid(trainer, grid, d, p, 4);
    EXPECT_EQ(serial.val, rerun.val);
    EXPECT_EQ(serial.val, parallel.val);
    EXPECT_EQ(serial.fit, parallel.fit);
    EXPECT_EQ(serial.test, parallel.test);
}

TEST(Selectors, SingleCell) {
    ErrorTable t = table_from({{0.3}});
    Selection s = psuvs_select(t);
    EXPECT_EQ(s.seed_index, 0);
    EXPECT_EQ(s.arch_index, 0);
    EXPECT_DOUBLE_EQ(s.error, 0.3);
}

TEST(Selectors, ArgminOverCells) {
    ErrorTable t = table_from({{0.3, 0.1}, {0.2, 0.4}});
    Selection s = psuvs_select(t);
    EXPECT_EQ(s.seed_index, 0);
    EXPECT_EQ(s.arch_index, 1);
    EXPECT_DOUBLE_EQ(s.error, 0.1);
}

TEST(Selectors, TieBreaksLexicographically) {
    ErrorTable t = table_from({{0.5, 0.5}, {0.5, 0.5}});
    Selection s = psuvs_select(t);
    EXPECT_EQ(s.seed_index, 0);
    EXPECT_EQ(s.arch_index, 0);
}

TEST(Selectors, PsutsUsesTestErrors) {
    // Validation and test argmins disagree; both selectors report their own.
    ErrorTable t = table_from({{0.3, 0.1}, {0.2, 0.4}},
                              {{0.05, 0.5}, {0.6, 0.7}});
    Selection v = psuvs_select(t);
    Selection s = psuts_select(t);
    EXPECT_EQ(v.arch_index, 1);
    EXPECT_EQ(s.arch_index, 0);
    EXPECT_DOUBLE_EQ(s.error, 0.05);
}

TEST(Selectors, AveragedArchitecture) {
    // Arch 0 has errors (0.1, 0.9), arch 1 has (0.4, 0.4): arch 1 wins.
    ErrorTable t = table_from({{0.1, 0.4}, {0.9, 0.4}});
    AveragedSelection a = avg_validated_architecture(t);
    EXPECT_EQ(a.index, 1);
    EXPECT_DOUBLE_EQ(a.mean_error, 0.4);
}

TEST(Selectors, AveragedArchitectureReducesToArgminAtNOne) {
    ErrorTable t = table_from({{0.5, 0.2, 0.9}});
    AveragedSelection a = avg_validated_architecture(t);
    EXPECT_EQ(a.index, 1);
    EXPECT_DOUBLE_EQ(a.mean_error, 0.2);
}

TEST(Selectors, AveragedWeights) {
    // Seed 0 has row (0.1, 0.9), seed 1 row (0.4, 0.4): seed 1 wins.
    ErrorTable t = table_from({{0.1, 0.9}, {0.4, 0.4}});
    AveragedSelection a = avg_validated_weights(t);
    EXPECT_EQ(a.index, 1);
    EXPECT_DOUBLE_EQ(a.mean_error, 0.4);
}

TEST(Selectors, MatchBruteForceOnRandomTables) {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 5, k = 7;
        std::vector<std::vector<double>> val(n, std::vector<double>(k));
        for (auto& row : val)
            for (double& v : row) v = rng.uniform();
        ErrorTable t = table_from(val);

        // Brute-force argmin cell.
        int bi = 0, bj = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j)
                if (val[i][j] < val[bi][bj]) bi = i, bj = j;
        Selection s = psuvs_select(t);
        ASSERT_EQ(s.seed_index, bi);
        ASSERT_EQ(s.arch_index, bj);

        // Brute-force mean + argmin per architecture.
        int best_arch = 0;
        double best_mean = 1e9;
        for (int j = 0; j < k; ++j) {
            double m = 0.0;
            for (int i = 0; i < n; ++i) m += val[i][j];
            m /= n;
            if (m < best_mean) best_mean = m, best_arch = j;
        }
        AveragedSelection a = avg_validated_architecture(t);
        ASSERT_EQ(a.index, best_arch);
        ASSERT_NEAR(a.mean_error, best_mean, 1e-12);

        // Brute-force mean + argmin per seed.
        int best_seed = 0;
        best_mean = 1e9;
        for (int i = 0; i < n; ++i) {
            double m = 0.0;
            for (int j = 0; j < k; ++j) m += val[i][j];
            m /= k;
            if (m < best_mean) best_mean = m, best_seed = i;
        }
        AveragedSelection w = avg_validated_weights(t);
        ASSERT_EQ(w.index, best_seed);
    }
}

TEST(Selectors, ExhaustiveTwoByTwoAgainstOracle) {
    // Every 2x2 validation table over {0.1, 0.9} crossed with every 2x2
    // test table: selectors must agree with the brute-force oracle exactly.
    const double lo = 0.1, hi = 0.9;
    for (int vmask = 0; vmask < 16; ++vmask) {
        for (int tmask = 0; tmask < 16; ++tmask) {
            std::vector<std::vector<double>> val(2, std::vector<double>(2));
            std::vector<std::vector<double>> test(2, std::vector<double>(2));
            for (int c = 0; c < 4; ++c) {
                val[c / 2][c % 2] = (vmask >> c) & 1 ? hi : lo;
                test[c / 2][c % 2] = (tmask >> c) & 1 ? hi : lo;
            }
            ErrorTable t = table_from(val, test);

            auto oracle_argmin = [](const std::vector<std::vector<double>>& m) {
                int bi = 0, bj = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        if (m[i][j] < m[bi][bj]) bi = i, bj = j;
                return std::pair<int, int>{bi, bj};
            };
            auto [vi, vj] = oracle_argmin(val);
            Selection sv = psuvs_select(t);
            ASSERT_EQ(std::make_pair(sv.seed_index, sv.arch_index), std::make_pair(vi, vj));
            auto [ti, tj] = oracle_argmin(test);
            Selection st = psuts_select(t);
            ASSERT_EQ(std::make_pair(st.seed_index, st.arch_index), std::make_pair(ti, tj));

            auto oracle_avg = [](const std::vector<std::vector<double>>& m) {
                double m0 = (m[0][0] + m[1][0]) / 2.0, m1 = (m[0][1] + m[1][1]) / 2.0;
                return m1 < m0 ? std::pair<int, double>{1, m1} : std::pair<int, double>{0, m0};
            };
            auto [aj, am] = oracle_avg(val);
            AveragedSelection av = avg_validated_architecture(t);
            ASSERT_EQ(av.index, aj);
            ASSERT_NEAR(av.mean_error, am, 1e-15);
            auto [uj, um] = oracle_avg(test);
            AveragedSelection ut = psuts_avg_architecture(t);
            ASSERT_EQ(ut.index, uj);
            ASSERT_NEAR(ut.mean_error, um, 1e-15);
        }
    }
}

TEST(Selectors, ShiftEquivariance) {
    // Adding a constant to every entry leaves every selection unchanged.
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<double>> val(3, std::vector<double>(4));
        for (auto& row : val)
            for (double& v : row) v = rng.uniform();
        ErrorTable t = table_from(val);
        double shift = rng.uniform(0.0, 5.0);
        std::vector<std::vector<double>> shifted = val;
        for (auto& row : shifted)
            for (double& v : row) v += shift;
        ErrorTable ts = table_from(shifted);
        EXPECT_EQ(psuvs_select(t).seed_index, psuvs_select(ts).seed_index);
        EXPECT_EQ(psuvs_select(t).arch_index, psuvs_select(ts).arch_index);
        EXPECT_EQ(psuts_select(t).arch_index, psuts_select(ts).arch_index);
        EXPECT_EQ(avg_validated_architecture(t).index, avg_validated_architecture(ts).index);
        EXPECT_EQ(avg_validated_weights(t).index, avg_validated_weights(ts).index);
        EXPECT_EQ(psuts_avg_architecture(t).index, psuts_avg_architecture(ts).index);
    }
}

TEST(SelectionBias, ExhaustiveEnumerationOnTwoByTwo) {
    // i.i.d. two-valued errors: E[min of 4 cells] over all 16 equally
    // likely outcomes is strictly below the grid mean.
    const double lo = 0.1, hi = 0.9;
    double expected_min = 0.0, expected_mean = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        double mn = hi, sum = 0.0;
        for (int c = 0; c < 4; ++c) {
            double v = (mask >> c) & 1 ? hi : lo;
            mn = std::min(mn, v);
            sum += v;
        }
        expected_min += mn / 16.0;
        expected_mean += sum / 4.0 / 16.0;
    }
    EXPECT_LT(expected_min, expected_mean);
    EXPECT_NEAR(expected_mean, 0.5, 1e-12);
    EXPECT_NEAR(expected_min, 0.1 * 15.0 / 16.0 + 0.9 / 16.0, 1e-12);
}

TEST(SelectionBias, MonteCarloAtFiveByFive) {
    Rng rng(414);
    double mean_of_min = 0.0, mean_of_mean = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        double mn = 1.0, sum = 0.0;
        for (int c = 0; c < 25; ++c) {
            double v = rng.uniform();
            mn = std::min(mn, v);
            sum += v;
        }
        mean_of_min += mn;
        mean_of_mean += sum / 25.0;
    }
    mean_of_min /= trials;
    mean_of_mean /= trials;
    EXPECT_LT(mean_of_min, mean_of_mean - 0.3);  // 1/26 vs 1/2
}

TEST(KFold, ConstantTrainerGivesConstant) {
    Dataset d = tiny_dataset(20);
    CrossValResult r = k_fold_cross_validate(d, 4, ConstantTrainer(0.25), {}, 3);
    EXPECT_DOUBLE_EQ(r.mean_error, 0.25);
    EXPECT_DOUBLE_EQ(r.distribution.std, 0.0);
}

TEST(KFold, FoldsAreDisjointAndCoverD) {
    Dataset d = tiny_dataset(23);  // remainder spreads round-robin
    CrossValResult r = k_fold_cross_validate(d, 5, ConstantTrainer(0.1), {}, 8);
    std::set<int> all;
    std::size_t max_size = 0, min_size = 100;
    for (const auto& fold : r.folds) {
        max_size = std::max(max_size, fold.size());
        min_size = std::min(min_size, fold.size());
        for (int i : fold) EXPECT_TRUE(all.insert(i).second);
    }
    EXPECT_EQ(all.size(), 23u);
    EXPECT_LE(max_size - min_size, 1u);
}

TEST(KFold, TwoFoldOnFourSamples) {
    Dataset d = tiny_dataset(4);
    CrossValResult r = k_fold_cross_validate(d, 2, ConstantTrainer(0.0), {}, 1);
    EXPECT_EQ(r.folds[0].size(), 2u);
    EXPECT_EQ(r.folds[1].size(), 2u);
}

TEST(KFold, RejectsBadFoldCounts) {
    Dataset d = tiny_dataset(5);
    EXPECT_THROW(k_fold_cross_validate(d, 1, ConstantTrainer(0.0), {}, 1),
                 std::invalid_argument);
    EXPECT_THROW(k_fold_cross_validate(d, 6, ConstantTrainer(0.0), {}, 1),
                 std::invalid_argument);
}

TEST(KFold, NnThresholdMatchesManualFiveExperimentOracle) {
    GaussianClustersSpec spec;
    spec.size = 50;
    spec.spread = 1.2;
    Dataset d = make_gaussian_clusters(spec, 21);
    NnThresholdTrainer trainer;
    ParamMap arch{{"threshold", 2.0}};
    std::uint64_t seed = 99;
    CrossValResult r = k_fold_cross_validate(d, 5, trainer, arch, seed);

    // Manual oracle: re-run the 5 experiments by hand on the same folds.
    std::vector<double> manual;
    for (int f = 0; f < 5; ++f) {
        std::vector<int> train_idx;
        for (int g = 0; g < 5; ++g)
            if (g != f)
                train_idx.insert(train_idx.end(), r.folds[static_cast<std::size_t>(g)].begin(),
                                 r.folds[static_cast<std::size_t>(g)].end());
        auto model = trainer.fit(d, train_idx, arch,
                                 derive_seed(seed, "fold", static_cast<std::uint64_t>(f)));
        manual.push_back(model->error_on(d, r.folds[static_cast<std::size_t>(f)]));
    }
    ASSERT_EQ(manual.size(), r.fold_errors.size());
    for (std::size_t i = 0; i < manual.size(); ++i)
        ASSERT_DOUBLE_EQ(manual[i], r.fold_errors[i]);
    double mean = 0.0;
    for (double e : manual) mean += e;
    EXPECT_DOUBLE_EQ(r.mean_error, mean / 5.0);
}

TEST(Audit, ConstantTrainerHasZeroDifferences) {
    Dataset d = tiny_dataset(40);
    Partition p = trivial_partition(d.size());
    AuditResult r = luckiest_generalization_audit(ConstantTrainer(0.2), {{{"id", 0.0}}}, 2, d, p,
                                                  7, 10);
    EXPECT_DOUBLE_EQ(r.psuvs_diffs.mean, 0.0);
    EXPECT_DOUBLE_EQ(r.psuts_diffs.mean, 0.0);
    EXPECT_DOUBLE_EQ(r.psuvs_sign_p, 1.0);  // no nonzero differences
}

TEST(Audit, RequiresAuditSetAndRepeats) {
    Dataset d = tiny_dataset(40);
    Partition p = trivial_partition(d.size());
    Partition no_audit = p;
    no_audit.audit.clear();
    EXPECT_THROW(luckiest_generalization_audit(ConstantTrainer(0.1), {{}}, 1, d, no_audit, 1, 10),
                 std::invalid_argument);
    EXPECT_THROW(luckiest_generalization_audit(ConstantTrainer(0.1), {{}}, 1, d, p, 1, 5),
                 std::invalid_argument);
}

TEST(Audit, OneByOneGridIsPlainGeneralizationGap) {
    // With k = n = 1 there is no selection pressure: the difference
    // distribution is just the audit-vs-validation gap of the single cell.
    Dataset d = tiny_dataset(48);
    Partition p = trivial_partition(d.size());
    SyntheticTrainer trainer;
    AuditResult r =
        luckiest_generalization_audit(trainer, {{{"id", 0.0}}}, 1, d, p, 11, 10);
    for (const AuditRepeatRow& row : r.rows) {
        EXPECT_EQ(row.psuvs.seed_index, 0);
        EXPECT_EQ(row.psuvs.arch_index, 0);
        // Same single cell for PSUVS and PSUTS.
        EXPECT_EQ(row.psuts.seed_index, 0);
        EXPECT_DOUBLE_EQ(row.psuvs_audit_error, row.psuts_audit_error);
    }
}

TEST(ErrorTableCsv, RoundTrips) {
    Rng rng(13);
    std::vector<std::vector<double>> val(3, std::vector<double>(2));
    for (auto& row : val)
        for (double& v : row) v = rng.uniform();
    ErrorTable t = table_from(val);
    t.status[1][0] = CellStatus::Failed;
    std::ostringstream os;
    write_error_table_csv(os, t);
    std::istringstream is(os.str());
    ErrorTable back = read_error_table_csv(is);
    EXPECT_EQ(back.n(), t.n());
    EXPECT_EQ(back.k(), t.k());
    for (int i = 0; i < t.n(); ++i)
        for (int j = 0; j < t.k(); ++j) {
            ASSERT_DOUBLE_EQ(back.val[i][j], t.val[i][j]);
            ASSERT_DOUBLE_EQ(back.fit[i][j], t.fit[i][j]);
            ASSERT_EQ(back.status[i][j], t.status[i][j]);
        }
    EXPECT_EQ(back.archs[1].at("id"), 1.0);
}

TEST(ErrorTableCsv, TimingsZeroByDefaultForReproducibility) {
    ErrorTable t = table_from({{0.5}});
    t.wall[0][0] = 123.456;
    std::ostringstream os;
    write_error_table_csv(os, t);
    EXPECT_NE(os.str().find(",0,ok"), std::string::npos);
    std::ostringstream timed;
    write_error_table_csv(timed, t, true);
    EXPECT_NE(timed.str().find("123.456"), std::string::npos);
}

TEST(DnContrast, ZeroSeedSpreadForDnPositiveForBackprop) {
    // The central contrast: across seeds, the DN's developmental error has
    // zero spread under top-1 competition, while backprop fitting errors
    // spread.
    GaussianClustersSpec spec;
    spec.size = 60;
    spec.spread = 1.5;
    Dataset d = make_gaussian_clusters(spec, 17);
    std::vector<int> train_idx;
    for (int i = 0; i < 40; ++i) train_idx.push_back(i);

    DnTrainer dn;
    std::set<double> dn_errors;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto model = dn.fit(d, train_idx, {{"top_k", 1.0}}, seed);
        ASSERT_TRUE(model->developmental_error().has_value());
        dn_errors.insert(*model->developmental_error());
    }
    EXPECT_EQ(dn_errors.size(), 1u);  // identical across seeds

    MlpTrainer mlp;
    std::set<double> mlp_errors;
    ParamMap arch{{"hidden", 4.0}, {"learning_rate", 1.0}, {"epochs", 15.0}};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto model = mlp.fit(d, train_idx, arch, seed);
        mlp_errors.insert(model->error_on(d, train_idx));
    }
    EXPECT_GT(mlp_errors.size(), 1u);
}
