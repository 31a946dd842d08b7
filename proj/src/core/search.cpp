#include "search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace euds {

namespace {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
};

std::string temp_path(const std::string& workdir, const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    fs::path dir = workdir.empty() ? fs::temp_directory_path() : fs::path(workdir);
    std::string name = "euds-eval-" + std::to_string(getpid()) + "-" +
                       std::to_string(counter.fetch_add(1)) + "-" + tag;
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

EvalResult dispatch_evaluator(const Evaluator& ev, const Dataset& train,
                              const Dataset& val, const std::string& workdir,
                              std::vector<std::string>* warnings) {
    if (ev.kind == EvaluatorKind::builtin_proxy)
        return proxy_train_eval(train, val, warnings);

    TempFile train_file(temp_path(workdir, "train.jsonl"));
    TempFile val_file(temp_path(workdir, "val.jsonl"));
    save_dataset(train, train_file.path);
    save_dataset(val, val_file.path);
    EvalResult r = run_external_evaluator(ev.command, train_file.path, val_file.path);
    r.train_count = train.size();
    r.val_count = val.size();
    return r;
}

} // namespace

Evaluator parse_evaluator(const std::string& text) {
    Evaluator ev;
    if (text == "builtin") return ev;
    const std::string prefix = "external:";
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
        ev.kind = EvaluatorKind::external;
        ev.command = text.substr(prefix.size());
        return ev;
    }
    throw config_error("unknown evaluator: \"" + text +
                       "\" (expected builtin or external:<command>)");
}

Dataset sample_subset(const Dataset& d, const SearchConfig& cfg) {
    size_t n = d.size();
    if (n == 0) throw data_error("cannot sample from an empty pool");

    size_t size;
    if (cfg.subset_size > 0) {
        size = cfg.subset_size;
    } else if (cfg.subset_fraction > 0.0) {
        if (cfg.subset_fraction > 1.0)
            throw config_error("subset fraction must be in (0, 1]");
        size = static_cast<size_t>(
            std::llround(cfg.subset_fraction * static_cast<double>(n)));
        size = std::max<size_t>(size, 1);
    } else {
        size = std::min<size_t>(
            2000, static_cast<size_t>(std::llround(0.2 * static_cast<double>(n))));
        size = std::max<size_t>(size, 1);
    }
    if (size > n)
        throw config_error("subset size " + std::to_string(size) +
                           " exceeds pool size " + std::to_string(n));
    size_t floor_size = 10 * d.label_set.size();
    if (size < floor_size)
        throw config_error("subset size " + std::to_string(size) +
                           " is below 10 samples per label (" +
                           std::to_string(floor_size) + " needed)");

    std::map<std::string, size_t> stratum_sizes;
    for (const auto& s : d.samples) ++stratum_sizes[s.label];

    // Largest-remainder allocation proportional to stratum size; leftover
    // slots go to the largest fractional parts, bigger strata first.
    std::map<std::string, size_t> quota;
    std::vector<std::pair<std::string, double>> fracs;
    size_t used = 0;
    for (const auto& [label, count] : stratum_sizes) {
        double exact = static_cast<double>(size) * static_cast<double>(count) /
                       static_cast<double>(n);
        size_t q = static_cast<size_t>(std::floor(exact));
        quota[label] = q;
        used += q;
        fracs.emplace_back(label, exact - static_cast<double>(q));
    }
    std::stable_sort(fracs.begin(), fracs.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (stratum_sizes.at(a.first) != stratum_sizes.at(b.first))
            return stratum_sizes.at(a.first) > stratum_sizes.at(b.first);
        return a.first < b.first;
    });
    for (size_t i = 0; used < size && i < fracs.size(); ++i) {
        if (fracs[i].second <= 0.0) continue;
        ++quota[fracs[i].first];
        ++used;
    }
    for (auto it = stratum_sizes.begin(); used < size && it != stratum_sizes.end(); ++it) {
        while (used < size && quota[it->first] < it->second) {
            ++quota[it->first];
            ++used;
        }
    }

    auto rng = make_rng(cfg.seed, 2);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    det_shuffle(order, rng);

    Dataset out;
    out.name = d.name + "-subset";
    out.task = d.task;
    size_t taken = 0;
    for (size_t idx : order) {
        if (taken == size) break;
        const Sample& s = d.samples[idx];
        auto& q = quota[s.label];
        if (q == 0) continue;
        --q;
        ++taken;
        out.label_set.insert(s.label);
        out.samples.push_back(s);
    }
    return out;
}

IntervalReport evaluate_interval(const Dataset& train_split, const Dataset& val_split,
                                 const std::map<std::string, double>& scores,
                                 const Interval& iv, const Evaluator& evaluator,
                                 const std::string& workdir,
                                 std::vector<std::string>* warnings) {
    IntervalReport report;
    report.interval = iv;

    SelectionResult sel = select_by_interval(train_split, scores, iv);
    report.reduction_pct = sel.reduction_pct;
    if (sel.selected_count == 0) {
        report.feasible = false;
        return report;
    }

    Dataset reduced = materialize(train_split, sel);
    report.eval = dispatch_evaluator(evaluator, reduced, val_split, workdir, warnings);
    return report;
}

SearchOutcome search_optimal_interval(
    const Dataset& pool,
    const std::map<EntropyType, std::map<std::string, double>>& scores_by_type,
    const SearchConfig& cfg) {
    if (scores_by_type.empty())
        throw config_error("interval search needs scores for at least one entropy type");
    const std::vector<Interval>& shared_candidates =
        cfg.candidates.empty() ? interval_catalog() : cfg.candidates;
    if (cfg.tradeoff_lambda < 0.0)
        throw config_error("trade-off lambda must be nonnegative");

    SearchOutcome outcome;
    std::set<std::string> seen_warnings;
    std::vector<std::string> raw_warnings;
    auto note_warnings = [&]() {
        for (const auto& w : raw_warnings)
            if (seen_warnings.insert(w).second) outcome.warnings.push_back(w);
        raw_warnings.clear();
    };

    Dataset subset = sample_subset(pool, cfg);
    outcome.subset_size = subset.size();
    Splits splits = split_dataset(subset, cfg.split);

    IntervalReport baseline;
    baseline.interval = make_interval(0.0, 10.0, "full");
    baseline.baseline = true;
    baseline.eval = dispatch_evaluator(cfg.evaluator, splits.train, splits.val,
                                       cfg.workdir, &raw_warnings);
    note_warnings();
    outcome.reports.push_back(baseline);

    for (const auto& [type, scores] : scores_by_type) {
        auto per_type = cfg.candidates_by_type.find(type);
        const std::vector<Interval>& candidates = per_type != cfg.candidates_by_type.end()
                                                      ? per_type->second
                                                      : shared_candidates;
        size_t best_idx = 0;
        bool has_best = false;
        for (const auto& iv : candidates) {
            IntervalReport r = evaluate_interval(splits.train, splits.val, scores, iv,
                                                 cfg.evaluator, cfg.workdir,
                                                 &raw_warnings);
            note_warnings();
            r.type = type;
            if (r.feasible)
                r.score = (r.eval.accuracy - baseline.eval.accuracy) * 100.0 +
                          cfg.tradeoff_lambda * r.reduction_pct;
            outcome.reports.push_back(std::move(r));
            const IntervalReport& stored = outcome.reports.back();
            if (!stored.feasible) continue;
            if (!has_best) {
                best_idx = outcome.reports.size() - 1;
                has_best = true;
                continue;
            }
            const IntervalReport& best = outcome.reports[best_idx];
            if (stored.score > best.score ||
                (stored.score == best.score &&
                 (stored.reduction_pct > best.reduction_pct ||
                  (stored.reduction_pct == best.reduction_pct &&
                   stored.eval.macro_f1 > best.eval.macro_f1)))) {
                best_idx = outcome.reports.size() - 1;
            }
        }
        if (!has_best)
            throw data_error(std::string("every candidate interval is infeasible for ") +
                             to_string(type) + " on the search subset");
        outcome.chosen.emplace(type, outcome.reports[best_idx].interval);
    }
    return outcome;
}

SelectionResult apply_to_full(const Dataset& pool,
                              const std::map<std::string, double>& scores,
                              const Interval& iv, EntropyType type) {
    return select_by_interval(pool, scores, iv, type);
}

EvalResult run_external_evaluator(const std::string& command,
                                  const std::string& train_path,
                                  const std::string& val_path) {
    TempFile err_file(temp_path("", "stderr"));
    std::string cmd = command + " " + shell_quote(train_path) + " " +
                      shell_quote(val_path) + " 2>" + shell_quote(err_file.path);

    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw evaluator_error("cannot start evaluator: " + command);
    std::string output;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
    int status = pclose(pipe);

    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        std::string diag = trimmed(slurp(err_file.path));
        std::string code = WIFEXITED(status) ? std::to_string(WEXITSTATUS(status))
                                             : "signal";
        throw evaluator_error("evaluator exited with " + code +
                              (diag.empty() ? "" : ": " + diag));
    }

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(trimmed(output));
    } catch (const nlohmann::json::parse_error&) {
        throw evaluator_error("cannot parse evaluator output: " + trimmed(output));
    }
    if (!parsed.is_object() || !parsed.contains("accuracy") ||
        !parsed.contains("macro_f1") || !parsed["accuracy"].is_number() ||
        !parsed["macro_f1"].is_number())
        throw evaluator_error("evaluator output misses accuracy/macro_f1: " +
                              trimmed(output));

    EvalResult r;
    r.accuracy = parsed["accuracy"].get<double>();
    r.macro_f1 = parsed["macro_f1"].get<double>();
    if (r.accuracy < 0.0 || r.accuracy > 1.0 || r.macro_f1 < 0.0 || r.macro_f1 > 1.0)
        throw evaluator_error("evaluator metrics out of [0,1]: accuracy " +
                              std::to_string(r.accuracy) + ", macro_f1 " +
                              std::to_string(r.macro_f1));
    return r;
}

} // namespace euds
