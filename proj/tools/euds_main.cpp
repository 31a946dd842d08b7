#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <euds/euds.h>

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Options {
    std::string config_path;
    std::string original;
    std::string synthetic;
    std::string out;
    std::string task;
    std::vector<std::string> entropy;
    std::vector<double> weights;
    std::string interval;
    std::string syn_interval;
    std::string normalize;
    std::string combine;
    std::string evaluator;
    std::string mix_strategy;
    std::string mix_mode;
    std::string smoothing;
    std::string scorer_load;
    std::string scorer_save;
    uint64_t seed = 0;
    double lambda = 0.0;
    int quantile = 0;
    int bins = 0;
    int scorer_n = 0;
    double scorer_k = 0.0;
    int64_t subset_size = 0;
    double subset_fraction = 0.0;
    bool quiet = false;
};

void add_common_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("-c,--config", opt.config_path, "JSON configuration file");
    cmd->add_option("--original", opt.original, "Original pool (JSONL)");
    cmd->add_option("--synthetic", opt.synthetic, "Synthetic pool (JSONL)");
    cmd->add_option("-o,--out", opt.out, "Output directory");
    cmd->add_option("--task", opt.task, "Task tag: SA, TopicCLS, QA, or other");
    cmd->add_option("--entropy", opt.entropy,
                    "Entropy types (ie, ge, se); repeat or comma-separate")
        ->delimiter(',');
    cmd->add_option("--weights", opt.weights,
                    "Three n-gram weights for the information entropy")
        ->delimiter(',');
    cmd->add_option("--interval", opt.interval, "Interval label or lo:hi");
    cmd->add_option("--syn-interval", opt.syn_interval,
                    "Separate interval for the synthetic pool");
    cmd->add_option("--normalize", opt.normalize,
                    "Normalization: minmax or percentile");
    cmd->add_option("--combine", opt.combine,
                    "Multi-entropy combination: intersection or fused_score");
    cmd->add_option("--evaluator", opt.evaluator,
                    "builtin or external:<command>");
    cmd->add_option("--lambda", opt.lambda, "Reduction weight in the search score");
    cmd->add_option("--quantile", opt.quantile,
                    "Search candidate count from score quantiles");
    cmd->add_option("--subset-size", opt.subset_size, "Search subset size");
    cmd->add_option("--subset-fraction", opt.subset_fraction,
                    "Search subset fraction of the pool");
    cmd->add_option("--mix", opt.mix_strategy, "Mixing strategy: sumdata or joseldata");
    cmd->add_option("--mix-mode", opt.mix_mode,
                    "joseldata interval mode: same_interval or independent");
    cmd->add_option("--scorer-n", opt.scorer_n, "Token model order");
    cmd->add_option("--smoothing", opt.smoothing, "add_k or kneser_ney");
    cmd->add_option("--scorer-k", opt.scorer_k, "add_k pseudo-count");
    cmd->add_option("--scorer-load", opt.scorer_load, "Load a saved token model");
    cmd->add_option("--scorer-save", opt.scorer_save, "Save the token model");
    cmd->add_option("--seed", opt.seed, "RNG seed (mandatory)");
    cmd->add_option("--bins", opt.bins, "Histogram bin count");
    cmd->add_flag("-q,--quiet", opt.quiet, "Suppress the report rendering");
}

int fail(const std::string& message, int code) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return code;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read configuration file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return json::parse(ss.str());
}

json merge_config(const CLI::App* cmd, const Options& opt) {
    json cfg = json::object();
    if (!opt.config_path.empty()) {
        cfg = load_config_file(opt.config_path);
        if (!cfg.is_object())
            throw std::runtime_error("configuration file must hold a JSON object");
    }
    auto set = [&](const char* flag, auto write) {
        if (cmd->count(flag) > 0) write();
    };
    set("--original", [&] { cfg["inputs"]["original"] = opt.original; });
    set("--synthetic", [&] { cfg["inputs"]["synthetic"] = opt.synthetic; });
    set("--out", [&] { cfg["out"] = opt.out; });
    set("--task", [&] { cfg["task"] = opt.task; });
    set("--entropy", [&] { cfg["entropy"]["types"] = opt.entropy; });
    set("--weights", [&] { cfg["entropy"]["weights"] = opt.weights; });
    set("--interval", [&] { cfg["intervals"]["interval"] = opt.interval; });
    set("--syn-interval",
        [&] { cfg["intervals"]["syn_interval"] = opt.syn_interval; });
    set("--normalize", [&] { cfg["normalize"] = opt.normalize; });
    set("--combine", [&] { cfg["intervals"]["combine"] = opt.combine; });
    set("--evaluator", [&] { cfg["search"]["evaluator"] = opt.evaluator; });
    set("--lambda", [&] { cfg["search"]["lambda"] = opt.lambda; });
    set("--quantile", [&] { cfg["intervals"]["quantile"] = opt.quantile; });
    set("--subset-size", [&] { cfg["search"]["subset_size"] = opt.subset_size; });
    set("--subset-fraction",
        [&] { cfg["search"]["subset_fraction"] = opt.subset_fraction; });
    set("--mix", [&] { cfg["mix"]["strategy"] = opt.mix_strategy; });
    set("--mix-mode", [&] { cfg["mix"]["mode"] = opt.mix_mode; });
    set("--scorer-n", [&] { cfg["entropy"]["scorer"]["n"] = opt.scorer_n; });
    set("--smoothing",
        [&] { cfg["entropy"]["scorer"]["smoothing"] = opt.smoothing; });
    set("--scorer-k", [&] { cfg["entropy"]["scorer"]["k"] = opt.scorer_k; });
    set("--scorer-load",
        [&] { cfg["entropy"]["scorer"]["load"] = opt.scorer_load; });
    set("--scorer-save",
        [&] { cfg["entropy"]["scorer"]["save"] = opt.scorer_save; });
    set("--seed", [&] { cfg["seed"] = opt.seed; });
    set("--bins", [&] { cfg["bins"] = opt.bins; });
    return cfg;
}

int run_mode(const std::string& mode, const CLI::App* cmd, const Options& opt) {
    json cfg;
    try {
        cfg = merge_config(cmd, opt);
    } catch (const json::exception& e) {
        return fail(std::string("configuration is not valid JSON: ") + e.what(),
                    kExitConfig);
    } catch (const std::exception& e) {
        return fail(e.what(), kExitConfig);
    }
    char* report = nullptr;
    int status = euds_run_pipeline(mode.c_str(), cfg.dump().c_str(), &report);
    if (status != EUDS_OK) return fail(euds_last_error(), status);
    if (!opt.quiet) {
        char* text = nullptr;
        if (euds_render_report(report, &text) == EUDS_OK) {
            std::fputs(text, stdout);
            euds_string_free(text);
        }
    }
    euds_string_free(report);
    return 0;
}

int render_stored_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail("cannot read report " + path, kExitData);
    std::ostringstream ss;
    ss << in.rdbuf();
    char* text = nullptr;
    int status = euds_render_report(ss.str().c_str(), &text);
    if (status != EUDS_OK) return fail(euds_last_error(), status);
    std::fputs(text, stdout);
    euds_string_free(text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-based data selection for training corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(euds_version()));

    Options opt;
    const char* modes[] = {"score", "select", "search", "mix", "run"};
    const char* briefs[] = {
        "Compute entropy scores and distributions",
        "Keep samples inside a fixed score interval",
        "Search candidate intervals for the best trade-off",
        "Build a mixed corpus from original and synthetic pools",
        "Full workflow: score, search or select, then mix",
    };
    for (size_t i = 0; i < 5; ++i)
        add_common_options(app.add_subcommand(modes[i], briefs[i]), opt);

    std::string report_path;
    CLI::App* report_cmd =
        app.add_subcommand("report", "Render a stored run report as text");
    report_cmd->add_option("path", report_path, "run_report.json to render")
        ->required();

    CLI11_PARSE(app, argc, argv);

    CLI::App* cmd = app.get_subcommands().front();
    if (cmd == report_cmd) return render_stored_report(report_path);
    return run_mode(cmd->get_name(), cmd, opt);
}
