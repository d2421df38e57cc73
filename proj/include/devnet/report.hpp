#pragma once

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "devnet/config.hpp"
#include "devnet/postselect.hpp"
#include "devnet/stats.hpp"

namespace devnet {

// Reports show full distributions — min/q25/median/q75/max/std over all
// k*n trained networks — for fitting, validation and test errors alike.
// Selections that peeked into test sets are labeled PROTOCOL-FLAWED.

struct ReportInputs {
    const ExperimentConfig* config = nullptr;
    const ErrorTable* table = nullptr;
    std::vector<std::string> banners;  // e.g. VALIDATION-VANISHED
    std::optional<AuditResult> audit;
    std::string partition_note;  // set sizes
};

namespace detail {
inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
inline void summary_row(std::ostream& os, const std::string& kind, const DistributionSummary& s) {
    os << "  " << kind;
    for (std::size_t i = kind.size(); i < 12; ++i) os << ' ';
    os << " min=" << fmt(s.min) << " q25=" << fmt(s.q25) << " median=" << fmt(s.median)
       << " q75=" << fmt(s.q75) << " max=" << fmt(s.max) << " std=" << fmt(s.std)
       << " mean=" << fmt(s.mean) << '\n';
}
}  // namespace detail

inline void write_report_txt(std::ostream& os, const ReportInputs& in) {
    const ErrorTable& t = *in.table;
    os << "================================================================\n";
    os << " post-selection audit report (report schema v1)\n";
    os << "================================================================\n";
    if (in.config) {
        os << "task: " << in.config->task << "\n";
        os << "master seed: " << in.config->master_seed << "\n\n";
        os << "THREE LEARNING CONDITIONS\n";
        os << "  framework:  " << in.config->conditions.framework << "\n";
        os << "  experience: " << in.config->conditions.experience << "\n";
        os << "  resources:  " << in.config->conditions.resources << "\n";
    }
    os << "\nquantile method: linear interpolation between closest ranks\n";
    os << "standard deviation: population form (divide by count)\n";
    os << "failed runs score error 1.0 and stay in every distribution\n";

    for (const std::string& banner : in.banners)
        os << "\n!!! WARNING: " << banner << " !!!\n";

    os << "\ngrid: k=" << t.k() << " architectures x n=" << t.n() << " seeds ("
       << (t.n() * t.k()) << " trained networks)\n";
    if (!in.partition_note.empty()) os << "partition: " << in.partition_note << "\n";

    os << "\nDISTRIBUTIONS over all " << t.n() * t.k() << " networks\n";
    detail::summary_row(os, "fitting", summarize_distribution(t.flatten(t.fit)));
    detail::summary_row(os, "validation", summarize_distribution(t.flatten(t.val)));
    detail::summary_row(os, "test", summarize_distribution(t.flatten(t.test)));
    if (t.has_audit) detail::summary_row(os, "audit", summarize_distribution(t.flatten(t.audit)));

    int failed = 0;
    for (const auto& row : t.status)
        for (CellStatus s : row)
            if (s == CellStatus::Failed) ++failed;
    os << "failed cells: " << failed << "\n";

    Selection psuvs = psuvs_select(t);
    Selection psuts = psuts_select(t);
    AveragedSelection arch = avg_validated_architecture(t);
    AveragedSelection weights = avg_validated_weights(t);
    AveragedSelection psuts_arch = psuts_avg_architecture(t);
    os << "\nSELECTIONS (i = seed index, j = architecture index)\n";
    os << "  PSUVS luckiest          i=" << psuvs.seed_index << " j=" << psuvs.arch_index
       << " val_err=" << detail::fmt(psuvs.error)
       << " test_err=" << detail::fmt(t.test[psuvs.seed_index][psuvs.arch_index]) << "\n";
    os << "  PSUTS luckiest          i=" << psuts.seed_index << " j=" << psuts.arch_index
       << " test_err=" << detail::fmt(psuts.error)
       << "  [PROTOCOL-FLAWED: selection peeked into the test set]\n";
    os << "  validated architecture  j=" << arch.index
       << " mean_val_err=" << detail::fmt(arch.mean_error) << "\n";
    os << "  validated weights       i=" << weights.index
       << " mean_val_err=" << detail::fmt(weights.mean_error) << "\n";
    os << "  PSUTS avg architecture  j=" << psuts_arch.index
       << " mean_test_err=" << detail::fmt(psuts_arch.mean_error)
       << "  [PROTOCOL-FLAWED: every averaged term peeked into the test set]\n";

    if (in.audit) {
        const AuditResult& a = *in.audit;
        os << "\nGENERALIZATION AUDIT (" << a.rows.size() << " repeats, fresh seed draws;"
           << " audit set unseen by any selection)\n";
        os << "  psuvs: mean(audit_err - selected_val_err)  = "
           << detail::fmt(a.psuvs_diffs.mean) << "  one-sided sign-test p = "
           << detail::fmt(a.psuvs_sign_p) << "\n";
        detail::summary_row(os, "  psuvs-diff", a.psuvs_diffs);
        os << "  psuts: mean(audit_err - selected_test_err) = "
           << detail::fmt(a.psuts_diffs.mean) << "  one-sided sign-test p = "
           << detail::fmt(a.psuts_sign_p) << "\n";
        detail::summary_row(os, "  psuts-diff", a.psuts_diffs);
        os << "  luckiest-network audit error (mean over repeats): "
           << detail::fmt(a.mean_luckiest_audit_error) << "\n";
        os << "  grid mean validation error   (mean over repeats): "
           << detail::fmt(a.mean_grid_val_error) << "\n";
        os << "  (side-by-side comparison; no pass/fail bound is defined)\n";
    }
}

// CSV companion: one row of full distribution statistics per error kind.
inline void write_report_csv(std::ostream& os, const ErrorTable& t) {
    os << "kind,count,mean,std,min,q25,median,q75,max\n";
    auto row = [&os](const std::string& kind, const DistributionSummary& s) {
        char buf[64];
        auto num = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        os << kind << ',' << s.count << ',' << num(s.mean) << ',' << num(s.std) << ','
           << num(s.min) << ',' << num(s.q25) << ',' << num(s.median) << ',' << num(s.q75) << ','
           << num(s.max) << '\n';
    };
    row("fitting", summarize_distribution(t.flatten(t.fit)));
    row("validation", summarize_distribution(t.flatten(t.val)));
    row("test", summarize_distribution(t.flatten(t.test)));
    if (t.has_audit) row("audit", summarize_distribution(t.flatten(t.audit)));
}

// Golden-schema check: a report CSV must carry every distribution statistic
// for the fitting, validation and test populations. Returns the list of
// missing pieces (empty = conforming).
inline std::vector<std::string> validate_report_schema(std::istream& is) {
    std::vector<std::string> missing;
    std::string header;
    if (!std::getline(is, header)) return {"header"};
    const std::vector<std::string> wanted_cols = {"kind", "count", "mean",   "std", "min",
                                                  "q25",  "median", "q75",   "max"};
    for (const std::string& col : wanted_cols)
        if (header.find(col) == std::string::npos) missing.push_back("column " + col);
    std::vector<std::string> kinds;
    std::string line;
    while (std::getline(is, line)) {
        auto comma = line.find(',');
        if (comma != std::string::npos) kinds.push_back(line.substr(0, comma));
    }
    for (const std::string kind : {"fitting", "validation", "test"}) {
        bool found = false;
        for (const std::string& k : kinds) found |= k == kind;
        if (!found) missing.push_back("row " + std::string(kind));
    }
    return missing;
}

}  // namespace devnet
