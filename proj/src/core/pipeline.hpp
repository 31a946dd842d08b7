#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "entropy.hpp"
#include "scoring.hpp"
#include "search.hpp"
#include "selection.hpp"

namespace euds {

enum class RunMode { score, select, search, mix, run };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct MixConfig {
    std::string strategy = "none";
    JoSelMode mode = JoSelMode::same_interval;
};

struct RunConfig {
    RunMode mode = RunMode::run;
    std::string original_path;
    std::string synthetic_path;
    Task task = Task::other;

    std::set<EntropyType> entropy_types{EntropyType::IE};
    IEConfig ie;
    ScorerConfig scorer;
    std::string scorer_load;
    std::string scorer_save;
    NormalizeMethod normalize = NormalizeMethod::minmax;

    std::optional<Interval> interval;
    std::optional<Interval> syn_interval;
    std::optional<int> quantile_k;
    CombineMode combine_mode = CombineMode::intersection;
    std::map<EntropyType, double> fused_weights;

    SearchConfig search;
    MixConfig mix;

    std::string out_dir;
    uint64_t seed = 0;
    int bins = 10;
};

/// Builds a validated RunConfig from the merged configuration object. `mode`
/// comes from the CLI subcommand.
RunConfig config_from_json(const nlohmann::json& j, RunMode mode);

struct TableRow {
    std::string label;
    double reduction_pct = 0.0;
    double accuracy_delta = 0.0;
    double f1_delta = 0.0;
    bool feasible = true;
    bool baseline = false;
};

std::string render_table_row(const TableRow& row);

struct RunReport {
    RunMode mode = RunMode::run;
    uint64_t seed = 0;
    std::vector<TableRow> rows;
    std::map<EntropyType, std::string> chosen;
    /// Artifact name -> manifest object for every emitted dataset.
    std::map<std::string, nlohmann::ordered_json> manifests;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> timings;
};

RunReport run_pipeline(const RunConfig& cfg);

void emit_result_table(const std::vector<TableRow>& rows, const std::string& path);

void emit_distribution(const std::map<std::string, double>& scores, int bins,
                       const std::string& path);

nlohmann::ordered_json report_json(const RunReport& report);

/// Human-readable rendering of a stored run report, for the report command.
std::string render_report(const nlohmann::json& report);

} // namespace euds
