#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "entropy.hpp"
#include "scoring.hpp"

namespace euds {

enum class CombineMode { intersection, fused_score };

std::string to_string(CombineMode m);
CombineMode combine_mode_from_string(const std::string& s);

struct SelectionSpec {
    std::vector<EntropyType> entropy_types;
    std::map<EntropyType, Interval> interval_per_type;
    CombineMode combine_mode = CombineMode::intersection;
    /// fused_score only; empty means equal weights.
    std::map<EntropyType, double> fused_weights;
};

struct SelectionResult {
    std::string parent;
    std::vector<std::string> selected_ids;
    SelectionSpec spec;
    size_t original_count = 0;
    size_t selected_count = 0;
    double reduction_pct = 0.0;
};

/// 100 * (1 - selected/original), rounded half-up to two decimals with exact
/// integer arithmetic.
double reduction_stats(size_t original_count, size_t selected_count);

/// Keeps the samples whose normalized score lies in the interval, in dataset
/// order.
SelectionResult select_by_interval(const Dataset& d,
                                   const std::map<std::string, double>& scores,
                                   const Interval& iv,
                                   EntropyType type = EntropyType::IE);

/// Multi-entropy selection over per-type normalized scores: set intersection
/// of the per-type memberships, or membership of the weighted fused score in
/// one shared interval.
SelectionResult select_combined(const Dataset& d,
                                const std::map<std::string, EntropyVector>& normalized,
                                const SelectionSpec& spec);

/// Extracts the selected samples as a dataset, preserving order.
Dataset materialize(const Dataset& d, const SelectionResult& r);

/// Full original pool plus the selected synthetic samples.
Dataset build_sumdata(const Dataset& full_ori, const Dataset& syn_pool,
                      const SelectionResult& selected_syn);

enum class JoSelMode { same_interval, independent };

std::string to_string(JoSelMode m);
JoSelMode josel_mode_from_string(const std::string& s);

/// Selected original plus selected synthetic samples. same_interval mode
/// insists both selections used identical entropy types and intervals.
Dataset build_joseldata(const Dataset& ori_pool, const SelectionResult& selected_ori,
                        const Dataset& syn_pool, const SelectionResult& selected_syn,
                        JoSelMode mode);

nlohmann::ordered_json manifest_json(const SelectionResult& r, uint64_t seed,
                                     bool subset_derived);

void write_manifest(const nlohmann::ordered_json& manifest, const std::string& path);

} // namespace euds
