#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "proxy.hpp"
#include "scoring.hpp"
#include "selection.hpp"

namespace euds {

enum class EvaluatorKind { builtin_proxy, external };

struct Evaluator {
    EvaluatorKind kind = EvaluatorKind::builtin_proxy;
    std::string command;
};

/// Accepts "builtin" or "external:<command>".
Evaluator parse_evaluator(const std::string& text);

struct SearchConfig {
    /// Absolute subset size wins over fraction; with neither set the default
    /// is min(2000, 20% of the pool).
    size_t subset_size = 0;
    double subset_fraction = 0.0;
    uint64_t seed = 0;
    std::vector<Interval> candidates;
    /// Overrides `candidates` for specific entropy types (quantile partitions
    /// differ per type).
    std::map<EntropyType, std::vector<Interval>> candidates_by_type;
    double tradeoff_lambda = 0.0;
    Evaluator evaluator;
    SplitSpec split;
    /// Scratch directory for external-evaluator exchange files.
    std::string workdir;
};

/// Stratified uniform draw without replacement; output order is the seeded
/// shuffle order.
Dataset sample_subset(const Dataset& d, const SearchConfig& cfg);

struct IntervalReport {
    EntropyType type = EntropyType::IE;
    Interval interval;
    bool baseline = false;
    bool feasible = true;
    EvalResult eval;
    double reduction_pct = 0.0;
    /// (accuracy - baseline accuracy) * 100 + lambda * reduction_pct.
    double score = 0.0;
};

/// Trains on the interval's slice of the training split and scores against
/// the fixed validation split. Empty slices come back infeasible instead of
/// throwing.
IntervalReport evaluate_interval(const Dataset& train_split, const Dataset& val_split,
                                 const std::map<std::string, double>& scores,
                                 const Interval& iv, const Evaluator& evaluator,
                                 const std::string& workdir,
                                 std::vector<std::string>* warnings = nullptr);

struct SearchOutcome {
    std::map<EntropyType, Interval> chosen;
    /// Baseline row first, then every candidate in order, grouped by type.
    std::vector<IntervalReport> reports;
    std::vector<std::string> warnings;
    size_t subset_size = 0;
};

/// Samples the subset, splits it, evaluates every candidate interval per
/// entropy type against one shared baseline, and picks the feasible interval
/// maximizing the trade-off score. Ties break toward larger reduction, then
/// higher macro-F1, then candidate order.
SearchOutcome search_optimal_interval(
    const Dataset& pool,
    const std::map<EntropyType, std::map<std::string, double>>& scores_by_type,
    const SearchConfig& cfg);

/// Applies a (typically subset-derived) interval to the complete pool.
SelectionResult apply_to_full(const Dataset& pool,
                              const std::map<std::string, double>& scores,
                              const Interval& iv, EntropyType type);

/// Runs `command train_file val_file`, expecting one JSON object with
/// accuracy and macro_f1 in [0,1] on stdout and exit code 0.
EvalResult run_external_evaluator(const std::string& command,
                                  const std::string& train_path,
                                  const std::string& val_path);

} // namespace euds
