#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "errors.hpp"
#include "text.hpp"

namespace euds {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* lower_name(EntropyType t) {
    switch (t) {
        case EntropyType::IE: return "ie";
        case EntropyType::GE: return "ge";
        default: return "se";
    }
}

void check_keys(const nlohmann::json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw config_error("unknown config key \"" + it.key() + "\" in " + where);
    }
}

std::string get_string(const nlohmann::json& j, const char* key,
                       const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_string())
        throw config_error(where + "." + key + " must be a string");
    return v.get<std::string>();
}

double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number())
        throw config_error(where + "." + key + " must be a number");
    return v.get<double>();
}

} // namespace

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::score: return "score";
        case RunMode::select: return "select";
        case RunMode::search: return "search";
        case RunMode::mix: return "mix";
        default: return "run";
    }
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "score") return RunMode::score;
    if (s == "select") return RunMode::select;
    if (s == "search") return RunMode::search;
    if (s == "mix") return RunMode::mix;
    if (s == "run") return RunMode::run;
    throw config_error("unknown mode: \"" + s + "\"");
}

RunConfig config_from_json(const nlohmann::json& j, RunMode mode) {
    if (!j.is_object())
        throw config_error("configuration must be a JSON object");
    check_keys(j, "config",
               {"inputs", "task", "entropy", "normalize", "intervals", "search", "mix",
                "out", "seed", "bins"});

    RunConfig cfg;
    cfg.mode = mode;

    if (!j.contains("seed"))
        throw config_error("seed is mandatory; set \"seed\" or pass --seed");
    {
        const auto& s = j.at("seed");
        if (s.is_number_unsigned())
            cfg.seed = s.get<uint64_t>();
        else if (s.is_number_integer() && s.get<int64_t>() >= 0)
            cfg.seed = static_cast<uint64_t>(s.get<int64_t>());
        else
            throw config_error("seed must be a nonnegative integer");
    }

    if (!j.contains("inputs") || !j.at("inputs").is_object())
        throw config_error("config needs an \"inputs\" object");
    {
        const auto& in = j.at("inputs");
        check_keys(in, "inputs", {"original", "synthetic"});
        if (in.contains("original")) cfg.original_path = get_string(in, "original", "inputs");
        if (in.contains("synthetic"))
            cfg.synthetic_path = get_string(in, "synthetic", "inputs");
    }
    if (cfg.original_path.empty() && cfg.synthetic_path.empty())
        throw config_error("at least one input path is required");

    if (j.contains("task")) cfg.task = task_from_string(get_string(j, "task", "config"));

    if (j.contains("entropy")) {
        const auto& e = j.at("entropy");
        check_keys(e, "entropy", {"types", "weights", "scorer"});
        if (e.contains("types")) {
            if (!e.at("types").is_array() || e.at("types").empty())
                throw config_error("entropy.types must be a nonempty array");
            cfg.entropy_types.clear();
            for (const auto& t : e.at("types")) {
                if (!t.is_string())
                    throw config_error("entropy.types entries must be strings");
                cfg.entropy_types.insert(entropy_type_from_string(t.get<std::string>()));
            }
        }
        if (e.contains("weights")) {
            const auto& w = e.at("weights");
            if (!w.is_array() || w.size() != 3)
                throw config_error("entropy.weights must hold exactly 3 numbers");
            for (size_t i = 0; i < 3; ++i) {
                if (!w[i].is_number())
                    throw config_error("entropy.weights entries must be numbers");
                cfg.ie.weights[i] = w[i].get<double>();
            }
            validate(cfg.ie);
        }
        if (e.contains("scorer")) {
            const auto& sc = e.at("scorer");
            check_keys(sc, "entropy.scorer", {"n", "smoothing", "k", "load", "save"});
            if (sc.contains("n")) {
                if (!sc.at("n").is_number_integer())
                    throw config_error("entropy.scorer.n must be an integer");
                cfg.scorer.n = sc.at("n").get<int>();
            }
            if (sc.contains("smoothing"))
                cfg.scorer.smoothing =
                    smoothing_from_string(get_string(sc, "smoothing", "entropy.scorer"));
            if (sc.contains("k")) cfg.scorer.k = get_number(sc, "k", "entropy.scorer");
            if (sc.contains("load"))
                cfg.scorer_load = get_string(sc, "load", "entropy.scorer");
            if (sc.contains("save"))
                cfg.scorer_save = get_string(sc, "save", "entropy.scorer");
        }
    }

    if (j.contains("normalize"))
        cfg.normalize =
            normalize_method_from_string(get_string(j, "normalize", "config"));

    if (j.contains("intervals")) {
        const auto& iv = j.at("intervals");
        check_keys(iv, "intervals",
                   {"interval", "syn_interval", "quantile", "combine", "fused_weights"});
        if (iv.contains("interval"))
            cfg.interval = parse_interval(get_string(iv, "interval", "intervals"));
        if (iv.contains("syn_interval"))
            cfg.syn_interval =
                parse_interval(get_string(iv, "syn_interval", "intervals"));
        if (iv.contains("quantile")) {
            if (!iv.at("quantile").is_number_integer())
                throw config_error("intervals.quantile must be an integer");
            cfg.quantile_k = iv.at("quantile").get<int>();
            if (*cfg.quantile_k < 2)
                throw config_error("intervals.quantile must be at least 2");
        }
        if (iv.contains("combine"))
            cfg.combine_mode =
                combine_mode_from_string(get_string(iv, "combine", "intervals"));
        if (iv.contains("fused_weights")) {
            const auto& fw = iv.at("fused_weights");
            if (!fw.is_object())
                throw config_error("intervals.fused_weights must be an object");
            for (auto it = fw.begin(); it != fw.end(); ++it) {
                if (!it.value().is_number())
                    throw config_error("intervals.fused_weights values must be numbers");
                cfg.fused_weights[entropy_type_from_string(it.key())] =
                    it.value().get<double>();
            }
        }
    }

    if (j.contains("search")) {
        const auto& s = j.at("search");
        check_keys(s, "search",
                   {"subset_size", "subset_fraction", "lambda", "evaluator", "split"});
        if (s.contains("subset_size")) {
            if (!s.at("subset_size").is_number_integer() ||
                s.at("subset_size").get<int64_t>() < 0)
                throw config_error("search.subset_size must be a nonnegative integer");
            cfg.search.subset_size =
                static_cast<size_t>(s.at("subset_size").get<int64_t>());
        }
        if (s.contains("subset_fraction")) {
            cfg.search.subset_fraction = get_number(s, "subset_fraction", "search");
            if (cfg.search.subset_fraction <= 0.0 || cfg.search.subset_fraction > 1.0)
                throw config_error("search.subset_fraction must be in (0, 1]");
        }
        if (s.contains("lambda")) {
            cfg.search.tradeoff_lambda = get_number(s, "lambda", "search");
            if (cfg.search.tradeoff_lambda < 0.0)
                throw config_error("search.lambda must be nonnegative");
        }
        if (s.contains("evaluator"))
            cfg.search.evaluator = parse_evaluator(get_string(s, "evaluator", "search"));
        if (s.contains("split")) {
            const auto& sp = s.at("split");
            check_keys(sp, "search.split", {"train", "val", "test", "stratified"});
            if (sp.contains("train"))
                cfg.search.split.train_ratio = get_number(sp, "train", "search.split");
            if (sp.contains("val"))
                cfg.search.split.val_ratio = get_number(sp, "val", "search.split");
            if (sp.contains("test"))
                cfg.search.split.test_ratio = get_number(sp, "test", "search.split");
            if (sp.contains("stratified")) {
                if (!sp.at("stratified").is_boolean())
                    throw config_error("search.split.stratified must be a boolean");
                cfg.search.split.stratified = sp.at("stratified").get<bool>();
            }
        }
    }

    if (j.contains("mix")) {
        const auto& m = j.at("mix");
        check_keys(m, "mix", {"strategy", "mode"});
        if (m.contains("strategy")) {
            cfg.mix.strategy = get_string(m, "strategy", "mix");
            if (cfg.mix.strategy != "none" && cfg.mix.strategy != "sumdata" &&
                cfg.mix.strategy != "joseldata")
                throw config_error("mix.strategy must be none, sumdata, or joseldata");
        }
        if (m.contains("mode"))
            cfg.mix.mode = josel_mode_from_string(get_string(m, "mode", "mix"));
    }

    if (!j.contains("out"))
        throw config_error("output directory is mandatory; set \"out\" or pass --out");
    cfg.out_dir = get_string(j, "out", "config");
    if (cfg.out_dir.empty()) throw config_error("output directory must be nonempty");

    if (j.contains("bins")) {
        if (!j.at("bins").is_number_integer())
            throw config_error("bins must be an integer");
        cfg.bins = j.at("bins").get<int>();
        if (cfg.bins < 2) throw config_error("bins must be at least 2");
    }

    cfg.search.seed = cfg.seed;
    cfg.search.split.seed = cfg.seed;
    cfg.search.workdir = cfg.out_dir;

    // Mode-specific requirements.
    bool wants_mix = mode == RunMode::mix ||
                     (mode == RunMode::run && cfg.mix.strategy != "none");
    if (mode == RunMode::mix && cfg.mix.strategy == "none")
        throw config_error("mix mode needs mix.strategy (sumdata or joseldata)");
    if (wants_mix && (cfg.original_path.empty() || cfg.synthetic_path.empty()))
        throw config_error("mixing needs both original and synthetic inputs");
    if ((mode == RunMode::select || mode == RunMode::mix) && !cfg.interval)
        throw config_error(to_string(mode) + " mode needs a fixed interval");
    if (mode == RunMode::search && cfg.interval)
        throw config_error("search mode finds the interval; drop the fixed interval");
    if ((mode == RunMode::select || mode == RunMode::mix) && cfg.quantile_k)
        throw config_error("quantile partitioning only applies to interval search");
    bool searches = mode == RunMode::search || (mode == RunMode::run && !cfg.interval);
    if (searches && cfg.combine_mode == CombineMode::fused_score &&
        cfg.entropy_types.size() > 1)
        throw config_error(
            "fused_score needs one shared interval; search chooses per-type intervals, "
            "so use an explicit interval instead");
    return cfg;
}

std::string render_table_row(const TableRow& row) {
    char buf[160];
    if (!row.feasible) {
        std::snprintf(buf, sizeof(buf), "%s, %.2f, n/a, n/a, infeasible",
                      row.label.c_str(), row.reduction_pct + 0.0);
    } else {
        std::snprintf(buf, sizeof(buf), "%s, %.2f, %+.2f, %+.2f", row.label.c_str(),
                      row.reduction_pct + 0.0, row.accuracy_delta + 0.0,
                      row.f1_delta + 0.0);
    }
    return buf;
}

void emit_result_table(const std::vector<TableRow>& rows, const std::string& path) {
    if (rows.empty()) throw data_error("result table needs at least one row");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write result table: " + path);
    for (const auto& r : rows) out << render_table_row(r) << '\n';
    if (!out) throw data_error("failed while writing result table: " + path);
}

void emit_distribution(const std::map<std::string, double>& scores, int bins,
                       const std::string& path) {
    if (bins < 2) throw config_error("distribution needs at least 2 bins");
    std::vector<size_t> counts(static_cast<size_t>(bins), 0);
    for (const auto& [id, score] : scores) {
        (void)id;
        double pos = score * static_cast<double>(bins) / 10.0;
        auto idx = static_cast<long long>(std::floor(pos));
        idx = std::clamp<long long>(idx, 0, bins - 1);
        ++counts[static_cast<size_t>(idx)];
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write distribution: " + path);
    char buf[96];
    for (int i = 0; i < bins; ++i) {
        double lo = 10.0 * static_cast<double>(i) / static_cast<double>(bins);
        double hi = 10.0 * static_cast<double>(i + 1) / static_cast<double>(bins);
        std::snprintf(buf, sizeof(buf), "%.2f, %.2f, %zu", lo, hi,
                      counts[static_cast<size_t>(i)]);
        out << buf << '\n';
    }
    if (!out) throw data_error("failed while writing distribution: " + path);
}

nlohmann::ordered_json report_json(const RunReport& report) {
    ordered_json j;
    j["mode"] = to_string(report.mode);
    j["seed"] = report.seed;
    ordered_json chosen = ordered_json::object();
    for (const auto& [type, label] : report.chosen)
        chosen[std::string(to_string(type))] = label;
    j["chosen"] = chosen;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["label"] = r.label;
        row["reduction_pct"] = r.reduction_pct;
        if (r.feasible) {
            row["accuracy_delta"] = r.accuracy_delta;
            row["f1_delta"] = r.f1_delta;
        }
        row["feasible"] = r.feasible;
        row["baseline"] = r.baseline;
        rows.push_back(row);
    }
    j["rows"] = rows;
    ordered_json manifests = ordered_json::object();
    for (const auto& [name, m] : report.manifests) manifests[name] = m;
    j["manifests"] = manifests;
    j["outputs"] = report.outputs;
    j["warnings"] = report.warnings;
    ordered_json timings = ordered_json::object();
    for (const auto& [stage, seconds] : report.timings) timings[stage] = seconds;
    j["timings"] = timings;
    return j;
}

std::string render_report(const nlohmann::json& report) {
    if (!report.is_object() || !report.contains("mode") || !report.contains("rows"))
        throw data_error("not a run report");
    std::string out;
    out += "mode: " + report.at("mode").get<std::string>() + "\n";
    if (report.contains("seed"))
        out += "seed: " + std::to_string(report.at("seed").get<uint64_t>()) + "\n";
    if (report.contains("chosen") && !report.at("chosen").empty()) {
        out += "chosen:";
        for (auto it = report.at("chosen").begin(); it != report.at("chosen").end(); ++it)
            out += " " + it.key() + " " + it.value().get<std::string>();
        out += "\n";
    }
    const auto& rows = report.at("rows");
    if (!rows.empty()) {
        out += "rows:\n";
        for (const auto& r : rows) {
            TableRow row;
            row.label = r.at("label").get<std::string>();
            row.reduction_pct = r.at("reduction_pct").get<double>();
            row.feasible = r.at("feasible").get<bool>();
            row.baseline = r.value("baseline", false);
            if (row.feasible) {
                row.accuracy_delta = r.at("accuracy_delta").get<double>();
                row.f1_delta = r.at("f1_delta").get<double>();
            }
            out += render_table_row(row) + "\n";
        }
    }
    if (report.contains("warnings") && !report.at("warnings").empty()) {
        out += "warnings:\n";
        for (const auto& w : report.at("warnings"))
            out += "- " + w.get<std::string>() + "\n";
    }
    return out;
}

namespace {

struct StageClock {
    RunReport& report;

    template <typename F>
    void run(const std::string& name, F&& f) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            f();
        } catch (const Error& e) {
            throw Error(e.kind(), "stage " + name + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorKind::data, "stage " + name + ": " + e.what());
        }
        auto t1 = std::chrono::steady_clock::now();
        report.timings.emplace_back(
            name, std::chrono::duration<double>(t1 - t0).count());
    }
};

} // namespace

RunReport run_pipeline(const RunConfig& cfg) {
    RunReport report;
    report.mode = cfg.mode;
    report.seed = cfg.seed;

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec)
        throw data_error("cannot create output directory " + cfg.out_dir + ": " +
                         ec.message());

    std::vector<std::string> created;
    auto out_path = [&](const std::string& name) {
        return (fs::path(cfg.out_dir) / name).string();
    };
    auto track = [&](const std::string& path) {
        created.push_back(path);
        report.outputs.push_back(path);
    };

    try {
        StageClock clock{report};

        Dataset ori, syn;
        bool has_ori = false, has_syn = false;
        clock.run("load", [&] {
            if (!cfg.original_path.empty()) {
                ori = load_dataset(cfg.original_path, Source::original, "", cfg.task);
                has_ori = true;
            }
            if (!cfg.synthetic_path.empty()) {
                syn = load_dataset(cfg.synthetic_path, Source::synthetic, "", cfg.task);
                has_syn = true;
            }
        });
        const Dataset& primary = has_ori ? ori : syn;
        bool primary_is_ori = has_ori;
        bool wants_mix = cfg.mode == RunMode::mix ||
                         (cfg.mode == RunMode::run && cfg.mix.strategy != "none");

        bool need_ge = cfg.entropy_types.count(EntropyType::GE) > 0;
        std::map<std::string, EntropyVector> raw_primary, raw_syn;
        std::unique_ptr<TokenScorer> loaded_scorer, trained_primary, trained_syn;
        clock.run("score", [&] {
            if (need_ge && !cfg.scorer_load.empty())
                loaded_scorer = load_scorer(cfg.scorer_load);
            auto score_pool = [&](const Dataset& pool,
                                  std::unique_ptr<TokenScorer>& trained) {
                ScoreConfig sc;
                sc.ie = cfg.ie;
                sc.scorer = cfg.scorer;
                if (loaded_scorer) {
                    sc.ge_scorer = loaded_scorer.get();
                } else if (need_ge) {
                    bool all_sidecar = true;
                    for (const auto& s : pool.samples)
                        if (!s.logprobs) { all_sidecar = false; break; }
                    if (!all_sidecar) {
                        trained = train_ngram_scorer(pool, cfg.scorer);
                        sc.ge_scorer = trained.get();
                    }
                }
                return score_dataset(pool, cfg.entropy_types, sc);
            };
            raw_primary = score_pool(primary, trained_primary);
            if (has_ori && has_syn) raw_syn = score_pool(syn, trained_syn);
            if (!cfg.scorer_save.empty()) {
                const TokenScorer* to_save =
                    loaded_scorer ? loaded_scorer.get() : trained_primary.get();
                if (!to_save)
                    throw config_error("no scorer to save; saving needs GE scoring "
                                       "without full sidecar coverage");
                to_save->save(cfg.scorer_save);
                track(cfg.scorer_save);
            }
        });

        std::map<EntropyType, std::map<std::string, double>> norm_primary, norm_syn;
        clock.run("normalize", [&] {
            auto normalize_pool =
                [&](const std::map<std::string, EntropyVector>& raw,
                    std::map<EntropyType, std::map<std::string, double>>& dst) {
                    for (EntropyType t : cfg.entropy_types) {
                        std::map<std::string, double> raws;
                        for (const auto& [id, v] : raw) raws[id] = v.get(t);
                        dst[t] = normalize_scores(raws, cfg.normalize);
                    }
                };
            normalize_pool(raw_primary, norm_primary);
            if (!raw_syn.empty()) normalize_pool(raw_syn, norm_syn);
        });

        bool do_search =
            cfg.mode == RunMode::search || (cfg.mode == RunMode::run && !cfg.interval);
        bool do_select = cfg.mode != RunMode::score;
        bool multi_type = cfg.entropy_types.size() > 1;

        SearchOutcome outcome;
        if (do_search) {
            clock.run("search", [&] {
                SearchConfig sc = cfg.search;
                if (cfg.quantile_k) {
                    for (EntropyType t : cfg.entropy_types) {
                        std::vector<double> values;
                        values.reserve(norm_primary[t].size());
                        for (const auto& [id, v] : norm_primary[t]) {
                            (void)id;
                            values.push_back(v);
                        }
                        sc.candidates_by_type[t] =
                            quantile_intervals(values, *cfg.quantile_k);
                    }
                }
                outcome = search_optimal_interval(primary, norm_primary, sc);
                for (const auto& r : outcome.reports) {
                    TableRow row;
                    row.label = r.baseline ? r.interval.label
                                : multi_type ? std::string(to_string(r.type)) + " " +
                                                   r.interval.label
                                             : r.interval.label;
                    row.reduction_pct = r.reduction_pct;
                    row.feasible = r.feasible;
                    row.baseline = r.baseline;
                    if (r.feasible && !r.baseline) {
                        const auto& base = outcome.reports.front().eval;
                        row.accuracy_delta = (r.eval.accuracy - base.accuracy) * 100.0;
                        row.f1_delta = (r.eval.macro_f1 - base.macro_f1) * 100.0;
                    }
                    report.rows.push_back(row);
                }
                for (const auto& [type, iv] : outcome.chosen)
                    report.chosen[type] = iv.label;
                for (const auto& w : outcome.warnings) report.warnings.push_back(w);
            });
        }

        std::map<EntropyType, Interval> primary_ivs, syn_ivs;
        SelectionResult sel_primary, sel_syn;
        Dataset mixed;
        bool have_sel_syn = false;
        if (do_select) {
            clock.run("select", [&] {
                if (do_search) {
                    primary_ivs = outcome.chosen;
                } else {
                    for (EntropyType t : cfg.entropy_types)
                        primary_ivs.emplace(t, *cfg.interval);
                }
                auto select_pool =
                    [&](const Dataset& pool,
                        const std::map<EntropyType, std::map<std::string, double>>& norm,
                        const std::map<EntropyType, Interval>& ivs) {
                        if (cfg.entropy_types.size() == 1) {
                            EntropyType t = *cfg.entropy_types.begin();
                            return select_by_interval(pool, norm.at(t), ivs.at(t), t);
                        }
                        SelectionSpec spec;
                        spec.entropy_types.assign(cfg.entropy_types.begin(),
                                                  cfg.entropy_types.end());
                        spec.interval_per_type = ivs;
                        spec.combine_mode = cfg.combine_mode;
                        spec.fused_weights = cfg.fused_weights;
                        std::map<std::string, EntropyVector> vectors;
                        for (const auto& [t, scores] : norm)
                            for (const auto& [id, v] : scores) {
                                auto& vec = vectors[id];
                                if (t == EntropyType::IE) vec.ie = v;
                                if (t == EntropyType::GE) vec.ge = v;
                                if (t == EntropyType::SE) vec.se = v;
                            }
                        return select_combined(pool, vectors, spec);
                    };
                sel_primary = select_pool(primary, norm_primary, primary_ivs);
                if (sel_primary.selected_count == 0)
                    report.warnings.push_back("selection over " + primary.name +
                                              " is empty");
                if (wants_mix) {
                    if (cfg.syn_interval) {
                        for (EntropyType t : cfg.entropy_types)
                            syn_ivs.emplace(t, *cfg.syn_interval);
                    } else {
                        syn_ivs = primary_ivs;
                    }
                    sel_syn = select_pool(syn, norm_syn, syn_ivs);
                    have_sel_syn = true;
                    if (sel_syn.selected_count == 0)
                        report.warnings.push_back("selection over " + syn.name +
                                                  " is empty");
                }
            });
        }

        if (wants_mix) {
            clock.run("mix", [&] {
                if (cfg.mix.strategy == "sumdata") {
                    mixed = build_sumdata(ori, syn, sel_syn);
                } else {
                    mixed = build_joseldata(ori, sel_primary, syn, sel_syn, cfg.mix.mode);
                    if (mixed.empty())
                        report.warnings.push_back("joseldata selection is empty");
                }
            });
        }

        clock.run("emit", [&] {
            auto table_name = [&](bool is_ori) {
                return std::string("scores_") + (is_ori ? "original" : "synthetic") +
                       ".csv";
            };
            auto write_scores =
                [&](const Dataset& pool,
                    const std::map<std::string, EntropyVector>& raw,
                    const std::map<EntropyType, std::map<std::string, double>>& norm,
                    bool is_ori) {
                    std::vector<ScoreRecord> records;
                    for (const auto& s : pool.samples) {
                        for (EntropyType t : cfg.entropy_types) {
                            ScoreRecord r;
                            r.sample_id = s.id;
                            r.entropy_type = t;
                            r.raw = raw.at(s.id).get(t);
                            r.normalized = norm.at(t).at(s.id);
                            records.push_back(r);
                        }
                    }
                    std::string path = out_path(table_name(is_ori));
                    write_score_table(records, path);
                    track(path);
                    for (EntropyType t : cfg.entropy_types) {
                        std::string name = std::string("distribution_") +
                                           (is_ori ? "original" : "synthetic") + "_" +
                                           lower_name(t) + ".csv";
                        std::string dpath = out_path(name);
                        emit_distribution(norm.at(t), cfg.bins, dpath);
                        track(dpath);
                    }
                };
            write_scores(primary, raw_primary, norm_primary, primary_is_ori);
            if (!raw_syn.empty()) write_scores(syn, raw_syn, norm_syn, false);

            if (do_select) {
                std::string base =
                    std::string("selected_") +
                    (primary_is_ori ? "original" : "synthetic");
                Dataset picked = materialize(primary, sel_primary);
                std::string dpath = out_path(base + ".jsonl");
                save_dataset(picked, dpath);
                track(dpath);
                auto manifest = manifest_json(sel_primary, cfg.seed, do_search);
                std::string mpath = out_path(base + ".manifest.json");
                write_manifest(manifest, mpath);
                track(mpath);
                report.manifests[base] = manifest;
            }
            if (have_sel_syn) {
                Dataset picked = materialize(syn, sel_syn);
                std::string dpath = out_path("selected_synthetic.jsonl");
                save_dataset(picked, dpath);
                track(dpath);
                auto manifest = manifest_json(sel_syn, cfg.seed, do_search);
                std::string mpath = out_path("selected_synthetic.manifest.json");
                write_manifest(manifest, mpath);
                track(mpath);
                report.manifests["selected_synthetic"] = manifest;
            }
            if (wants_mix) {
                const std::string& name = cfg.mix.strategy;
                std::string dpath = out_path(name + ".jsonl");
                save_dataset(mixed, dpath);
                track(dpath);

                ordered_json m;
                m["parent"] = ori.name + "+" + syn.name;
                m["strategy"] = name;
                if (name == "joseldata") m["mode"] = to_string(cfg.mix.mode);
                ordered_json types = ordered_json::array();
                for (EntropyType t : cfg.entropy_types) types.push_back(to_string(t));
                m["entropy_types"] = types;
                ordered_json intervals;
                if (name == "joseldata") {
                    ordered_json ori_iv, syn_iv;
                    for (const auto& [t, iv] : primary_ivs)
                        ori_iv[std::string(to_string(t))] = iv.label;
                    for (const auto& [t, iv] : syn_ivs)
                        syn_iv[std::string(to_string(t))] = iv.label;
                    intervals["original"] = ori_iv;
                    intervals["synthetic"] = syn_iv;
                } else {
                    ordered_json syn_iv;
                    for (const auto& [t, iv] : syn_ivs)
                        syn_iv[std::string(to_string(t))] = iv.label;
                    intervals["synthetic"] = syn_iv;
                }
                m["intervals"] = intervals;
                m["combine_mode"] = cfg.entropy_types.size() > 1
                                        ? to_string(cfg.combine_mode)
                                        : "none";
                m["original_count"] = ori.size() + syn.size();
                m["selected_count"] = mixed.size();
                m["reduction_pct"] = reduction_stats(ori.size() + syn.size(),
                                                     mixed.size());
                m["tool_version"] = kToolVersion;
                m["seed"] = cfg.seed;
                std::string mpath = out_path(name + ".manifest.json");
                write_manifest(m, mpath);
                track(mpath);
                report.manifests[name] = m;
            }
            if (!report.rows.empty()) {
                std::string tpath = out_path("result_table.csv");
                emit_result_table(report.rows, tpath);
                track(tpath);
            }
        });

        std::string rpath = out_path("run_report.json");
        {
            std::ofstream out(rpath, std::ios::binary);
            if (!out) throw data_error("cannot write run report: " + rpath);
            report.outputs.push_back(rpath);
            out << report_json(report).dump(2) << '\n';
            if (!out) throw data_error("failed while writing run report: " + rpath);
        }
        created.push_back(rpath);
        return report;
    } catch (...) {
        for (const auto& p : created) {
            std::error_code rm_ec;
            fs::remove(p, rm_ec);
        }
        throw;
    }
}

} // namespace euds
