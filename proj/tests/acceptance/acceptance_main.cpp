// Acceptance gate: one self-contained check per release criterion, each
// printed as its own pass/fail line. Exit status is 0 only when every
// criterion passes.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "entropy.hpp"
#include "planted.hpp"
#include "rng.hpp"
#include "scorer.hpp"
#include "scoring.hpp"
#include "search.hpp"
#include "selection.hpp"
#include "tmpdir.hpp"

using nlohmann::json;
using namespace euds;
using testsupport::TempDir;
using testsupport::planted_two_class;

namespace {

std::string g_cli;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, ap);
    va_end(ap);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable: " + path + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string shq(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& args, const std::string& errfile) {
    std::string cmd = shq(g_cli) + " " + args + " >/dev/null 2>" + shq(errfile);
    int st = std::system(cmd.c_str());
    if (st == -1) return -1;
    if (WIFEXITED(st)) return WEXITSTATUS(st);
    return -2;
}

std::set<std::string> jsonl_ids(const std::string& path) {
    std::set<std::string> ids;
    std::ifstream in(path, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ids.insert(json::parse(line).at("id").get<std::string>());
    }
    return ids;
}

// ---------------------------------------------------------------- criterion 1

double oracle_ie(const std::vector<std::string>& tokens, const IEConfig& cfg) {
    double total = 0.0;
    for (int n = 1; n <= 3; ++n) {
        if (tokens.size() < static_cast<size_t>(n)) continue;
        size_t m = tokens.size() - n + 1;
        std::vector<std::string> grams(m);
        for (size_t i = 0; i < m; ++i) {
            std::string g = tokens[i];
            for (int j = 1; j < n; ++j) {
                g += '\x1f';
                g += tokens[i + j];
            }
            grams[i] = std::move(g);
        }
        double h = 0.0;
        for (size_t i = 0; i < m; ++i) {
            size_t c = 0;
            for (size_t j = 0; j < m; ++j)
                if (grams[j] == grams[i]) ++c;
            h -= std::log2(static_cast<double>(c) / static_cast<double>(m)) /
                 static_cast<double>(m);
        }
        total += cfg.weights[n - 1] * h;
    }
    return total;
}

std::string criterion_entropy_oracle() {
    const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
    const std::vector<IEConfig> weightings = {
        IEConfig{},
        IEConfig{{1.0, 0.0, 0.0}},
        IEConfig{{0.2, 0.5, 0.3}},
        IEConfig{{0.6, 0.1, 0.3}},
    };
    auto rng = make_rng(424242, 1);
    const size_t cases = 100000;
    double start = now_s();
    for (size_t c = 0; c < cases; ++c) {
        size_t v = 1 + uniform_below(rng, 4);
        size_t len = 1 + uniform_below(rng, 12);
        std::vector<std::string> tokens(len);
        for (auto& t : tokens) t = alphabet[uniform_below(rng, v)];
        const IEConfig& cfg = weightings[c % weightings.size()];
        double got = information_entropy_tokens(tokens, cfg);
        double want = oracle_ie(tokens, cfg);
        if (std::fabs(got - want) > 1e-9)
            return fmt("case %zu: got %.12f, oracle %.12f", c, got, want);
    }
    double elapsed = now_s() - start;
    if (elapsed >= 60.0) return fmt("took %.1fs, limit 60s", elapsed);
    return "";
}

// ---------------------------------------------------------------- criterion 2

std::string criterion_closed_forms() {
    auto rng = make_rng(7, 2);
    const size_t vocab_sizes[] = {2, 4, 17, 100};
    for (size_t c = 0; c < 100; ++c) {
        size_t v = vocab_sizes[c % 4];
        UniformScorer scorer(v);
        size_t len = 3 + uniform_below(rng, 18);
        std::vector<std::string> tokens(len);
        for (auto& t : tokens) t = "t" + std::to_string(uniform_below(rng, 9));
        double ge = generative_entropy(tokens, scorer);
        if (std::fabs(ge - std::log2(static_cast<double>(v))) > 1e-9)
            return fmt("uniform V=%zu gave %.12f", v, ge);
    }
    for (size_t k : {size_t{1}, size_t{2}, size_t{3}, size_t{7}, size_t{50}}) {
        std::vector<int64_t> labels(2 * k);
        for (size_t i = k; i < 2 * k; ++i) labels[i] = 1;
        double se = semantic_entropy(clusters_from_labels(labels));
        if (std::fabs(se - 1.0) > 1e-12)
            return fmt("equal clusters k=%zu gave %.15f", k, se);
    }
    std::vector<std::string> same(6, "the very same answer");
    if (semantic_entropy(cluster_generations(same)) != 0.0)
        return "identical generations did not give exactly 0";
    if (information_entropy("a a a a") != 0.0)
        return "repeated-token text did not give exactly 0";
    return "";
}

// ---------------------------------------------------------------- criterion 3

Dataset flat_pool(const std::string& prefix, size_t n, Source source) {
    Dataset d;
    d.name = prefix;
    for (size_t i = 0; i < n; ++i) {
        Sample s;
        s.id = prefix + std::to_string(i);
        s.text = "alpha beta gamma";
        s.label = (i % 2 == 0) ? "pos" : "neg";
        s.source = source;
        d.samples.push_back(std::move(s));
    }
    d.label_set = {"pos", "neg"};
    return d;
}

std::map<std::string, double> head_scores(const Dataset& d, size_t inside) {
    std::map<std::string, double> scores;
    for (size_t i = 0; i < d.samples.size(); ++i)
        scores[d.samples[i].id] = i < inside ? 5.0 : 1.0;
    return scores;
}

std::string criterion_pinned_arithmetic() {
    if (reduction_stats(2000, 1038) != 48.10)
        return fmt("reduction_stats(2000, 1038) = %.4f", reduction_stats(2000, 1038));

    Dataset ori = flat_pool("o", 2000, Source::original);
    Dataset syn = flat_pool("s", 2000, Source::synthetic);
    Interval band = parse_interval("3-10");

    SelectionResult syn_full = select_by_interval(syn, head_scores(syn, 2000), band);
    Dataset sum_full = build_sumdata(ori, syn, syn_full);
    if (sum_full.size() != 4000)
        return fmt("full-pool sumdata size %zu, want 4000", sum_full.size());

    SelectionResult syn_669 = select_by_interval(syn, head_scores(syn, 669), band);
    Dataset sum_669 = build_sumdata(ori, syn, syn_669);
    if (sum_669.size() != 2669)
        return fmt("sumdata with 669 selected gave %zu, want 2669", sum_669.size());

    SelectionResult ori_1038 = select_by_interval(ori, head_scores(ori, 1038), band);
    SelectionResult syn_682 = select_by_interval(syn, head_scores(syn, 682), band);
    Dataset josel = build_joseldata(ori, ori_1038, syn, syn_682,
                                    JoSelMode::same_interval);
    if (josel.size() != 1720)
        return fmt("joseldata 1038+682 gave %zu, want 1720", josel.size());

    struct Row {
        double lower, upper;
        const char* label;
    };
    const Row want[9] = {{0, 3, "0-3"}, {3, 5, "3-5"},  {0, 5, "0-5"},
                         {0, 8, "0-8"}, {3, 10, "3-10"}, {3, 8, "3-8"},
                         {5, 8, "5-8"}, {8, 10, "8-10"}, {5, 10, "5-10"}};
    const auto& catalog = interval_catalog();
    if (catalog.size() != 9) return fmt("catalog has %zu entries", catalog.size());
    for (size_t i = 0; i < 9; ++i) {
        if (catalog[i].lower != want[i].lower || catalog[i].upper != want[i].upper ||
            catalog[i].label != want[i].label)
            return fmt("catalog[%zu] is %s [%g, %g)", i, catalog[i].label.c_str(),
                       catalog[i].lower, catalog[i].upper);
    }
    return "";
}

// ---------------------------------------------------------------- criterion 4

std::string criterion_normalization() {
    auto rng = make_rng(99, 4);
    for (size_t trial = 0; trial < 1000; ++trial) {
        size_t n = 2 + uniform_below(rng, 59);
        std::map<std::string, double> raw;
        for (size_t i = 0; i < n; ++i) {
            double v = static_cast<double>(uniform_below(rng, 2000001)) / 1000.0 -
                       1000.0;
            raw["x" + std::to_string(i)] = v;
        }
        auto mm = normalize_scores(raw, NormalizeMethod::minmax);
        auto pc = normalize_scores(raw, NormalizeMethod::percentile);

        std::vector<std::pair<double, std::string>> order;
        for (const auto& [id, v] : raw) order.emplace_back(v, id);
        std::sort(order.begin(), order.end());

        if (order.front().first == order.back().first) {
            for (const auto& [id, v] : mm)
                if (v != 5.0) return fmt("trial %zu: degenerate minmax %.4f", trial, v);
            continue;
        }
        if (mm.at(order.front().second) != 0.0)
            return fmt("trial %zu: min mapped to %.17g", trial,
                       mm.at(order.front().second));
        if (mm.at(order.back().second) != 10.0)
            return fmt("trial %zu: max mapped to %.17g", trial,
                       mm.at(order.back().second));
        for (size_t i = 1; i < order.size(); ++i) {
            const auto& [va, ia] = order[i - 1];
            const auto& [vb, ib] = order[i];
            if (va == vb) {
                if (mm.at(ia) != mm.at(ib) || pc.at(ia) != pc.at(ib))
                    return fmt("trial %zu: ties diverged", trial);
            } else {
                if (mm.at(ia) > mm.at(ib) || pc.at(ia) > pc.at(ib))
                    return fmt("trial %zu: rank inversion", trial);
            }
        }
    }

    std::map<std::string, double> flat;
    for (size_t i = 0; i < 5; ++i) flat["f" + std::to_string(i)] = 7.7;
    for (auto method : {NormalizeMethod::minmax, NormalizeMethod::percentile})
        for (const auto& [id, v] : normalize_scores(flat, method))
            if (v != 5.0) return fmt("all-equal input gave %.4f", v);

    const auto& catalog = interval_catalog();
    std::map<std::string, double> base;
    for (size_t t = 0; t < 100; ++t) {
        if (t % 10 == 0) {
            base.clear();
            for (size_t i = 0; i < 40; ++i)
                base["b" + std::to_string(i)] =
                    static_cast<double>(uniform_below(rng, 2000001)) / 1000.0 - 1000.0;
        }
        double a = 0.05 + static_cast<double>(uniform_below(rng, 1000)) / 250.0;
        double b = static_cast<double>(uniform_below(rng, 40001)) / 1000.0 - 20.0;
        std::map<std::string, double> moved;
        for (const auto& [id, v] : base) moved[id] = a * v + b;

        auto mm0 = normalize_scores(base, NormalizeMethod::minmax);
        auto mm1 = normalize_scores(moved, NormalizeMethod::minmax);
        auto pc0 = normalize_scores(base, NormalizeMethod::percentile);
        auto pc1 = normalize_scores(moved, NormalizeMethod::percentile);
        for (const auto& [id, v0] : mm0) {
            double v1 = mm1.at(id);
            if (std::fabs(v0 - v1) > 1e-9)
                return fmt("transform %zu: minmax drifted %.12f vs %.12f", t, v0, v1);
            for (const auto& iv : catalog) {
                bool near_edge = std::fabs(v0 - iv.lower) < 1e-6 ||
                                 std::fabs(v0 - iv.upper) < 1e-6;
                if (!near_edge &&
                    interval_contains(iv, v0) != interval_contains(iv, v1))
                    return fmt("transform %zu: %s membership flipped", t,
                               iv.label.c_str());
            }
        }
        for (const auto& [id, v0] : pc0) {
            if (pc1.at(id) != v0)
                return fmt("transform %zu: percentile rank moved", t);
        }
    }
    return "";
}

// ---------------------------------------------------------------- criterion 5

struct SeedOutcome {
    bool ok = false;
    std::string detail;
};

SeedOutcome planted_seed_run(uint64_t seed) {
    SeedOutcome out;
    TempDir tmp("euds-acc5");
    auto planted = planted_two_class(5000, 0.4, seed);
    std::string input = tmp.file("pool.jsonl");
    save_dataset(planted.data, input);
    std::string outdir = tmp.file("out");
    std::string errfile = tmp.file("stderr.txt");
    int rc = run_cli("run --original " + shq(input) + " --out " + shq(outdir) +
                         " --seed " + std::to_string(seed) + " --quiet",
                     errfile);
    if (rc != 0) {
        out.detail = fmt("cli exit %d: %s", rc, slurp(errfile).c_str());
        return out;
    }

    std::set<std::string> kept = jsonl_ids(outdir + "/selected_original.jsonl");
    size_t noise_kept = 0;
    for (const auto& id : planted.noise_ids)
        if (kept.count(id)) ++noise_kept;
    double excluded = 1.0 - static_cast<double>(noise_kept) /
                                static_cast<double>(planted.noise_ids.size());
    if (excluded < 0.8) {
        out.detail = fmt("only %.1f%% of noise excluded", excluded * 100.0);
        return out;
    }

    json report = json::parse(slurp(outdir + "/run_report.json"));
    std::string chosen = report.at("chosen").at("IE").get<std::string>();
    double delta = 0.0;
    bool found = false;
    for (const auto& row : report.at("rows")) {
        if (row.at("baseline").get<bool>()) continue;
        if (row.at("label").get<std::string>() == chosen &&
            row.at("feasible").get<bool>()) {
            delta = row.at("accuracy_delta").get<double>();
            found = true;
            break;
        }
    }
    if (!found) {
        out.detail = "chosen interval missing from the result rows";
        return out;
    }
    if (delta < 0.0) {
        out.detail = fmt("accuracy delta %.2f below baseline", delta);
        return out;
    }

    double reduction = report.at("manifests")
                           .at("selected_original")
                           .at("reduction_pct")
                           .get<double>();
    if (reduction < 30.0) {
        out.detail = fmt("reduction %.2f%% below 30%%", reduction);
        return out;
    }
    out.ok = true;
    return out;
}

std::string criterion_planted_signal() {
    if (g_cli.empty()) return "cli path not provided (--cli)";
    size_t passed = 0;
    double slowest = 0.0;
    std::string first_fail;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        double t0 = now_s();
        SeedOutcome r = planted_seed_run(seed);
        double took = now_s() - t0;
        slowest = std::max(slowest, took);
        if (took >= 120.0)
            return fmt("seed %llu took %.1fs, limit 120s",
                       static_cast<unsigned long long>(seed), took);
        if (r.ok) {
            ++passed;
        } else if (first_fail.empty()) {
            first_fail = fmt("seed %llu: %s", static_cast<unsigned long long>(seed),
                             r.detail.c_str());
        }
    }
    if (passed < 8)
        return fmt("%zu/10 seeds passed (need 8); first failure: %s", passed,
                   first_fail.c_str());
    return "";
}

// ---------------------------------------------------------------- criterion 6

std::string criterion_subset_generalization() {
    size_t agreed = 0;
    for (uint64_t seed = 101; seed <= 110; ++seed) {
        Dataset pool = planted_two_class(1500, 0.4, seed).data;
        auto raw = score_dataset(pool, {EntropyType::IE});
        std::map<std::string, double> ie;
        for (const auto& [id, v] : raw) ie[id] = v.get(EntropyType::IE);
        auto norm = normalize_scores(ie, NormalizeMethod::minmax);
        std::map<EntropyType, std::map<std::string, double>> by_type{
            {EntropyType::IE, norm}};

        SearchConfig subset_cfg;
        subset_cfg.subset_fraction = 0.2;
        subset_cfg.seed = seed;
        subset_cfg.split.seed = seed;
        SearchConfig full_cfg;
        full_cfg.subset_size = pool.size();
        full_cfg.seed = seed;
        full_cfg.split.seed = seed;

        auto on_subset = search_optimal_interval(pool, by_type, subset_cfg);
        auto on_full = search_optimal_interval(pool, by_type, full_cfg);
        const Interval& a = on_subset.chosen.at(EntropyType::IE);
        const Interval& b = on_full.chosen.at(EntropyType::IE);
        if (a.lower == b.lower && a.upper == b.upper) ++agreed;
    }
    if (agreed < 7) return fmt("subset matched full pool in %zu/10 trials", agreed);
    return "";
}

// ---------------------------------------------------------------- criterion 7

Dataset corpus_with_generations(uint64_t seed) {
    Dataset d = planted_two_class(400, 0.3, seed).data;
    auto rng = make_rng(seed, 55);
    for (auto& s : d.samples) {
        size_t k = 2 + uniform_below(rng, 4);
        size_t classes = 1 + uniform_below(rng, k);
        std::vector<std::string> gens;
        std::vector<int64_t> labels;
        for (size_t g = 0; g < k; ++g) {
            int64_t cl = static_cast<int64_t>(uniform_below(rng, classes));
            labels.push_back(cl);
            gens.push_back("variant " + std::to_string(cl));
        }
        s.generations = gens;
        s.equivalence_labels = labels;
    }
    return d;
}

std::string criterion_combined_containment() {
    const auto& catalog = interval_catalog();
    const EntropyType all_types[] = {EntropyType::IE, EntropyType::GE,
                                     EntropyType::SE};
    for (uint64_t seed : {uint64_t{3}, uint64_t{4}}) {
        Dataset d = corpus_with_generations(seed);
        auto raw = score_dataset(
            d, {EntropyType::IE, EntropyType::GE, EntropyType::SE});

        std::map<std::string, EntropyVector> norm;
        std::map<EntropyType, std::map<std::string, double>> norm_by_type;
        for (EntropyType t : all_types) {
            std::map<std::string, double> r;
            for (const auto& [id, v] : raw) r[id] = v.get(t);
            auto n = normalize_scores(r, NormalizeMethod::minmax);
            norm_by_type[t] = n;
            for (const auto& [id, v] : n) {
                switch (t) {
                    case EntropyType::IE: norm[id].ie = v; break;
                    case EntropyType::GE: norm[id].ge = v; break;
                    case EntropyType::SE: norm[id].se = v; break;
                }
            }
        }

        std::map<EntropyType, std::vector<std::set<std::string>>> single;
        for (EntropyType t : all_types) {
            auto& per_iv = single[t];
            for (const auto& iv : catalog) {
                auto sel = select_by_interval(d, norm_by_type[t], iv, t);
                per_iv.emplace_back(sel.selected_ids.begin(), sel.selected_ids.end());
            }
        }

        auto contained = [&](const std::vector<EntropyType>& types,
                             const std::vector<size_t>& iv_idx) -> std::string {
            SelectionSpec spec;
            spec.entropy_types = types;
            for (size_t i = 0; i < types.size(); ++i)
                spec.interval_per_type[types[i]] = catalog[iv_idx[i]];
            spec.combine_mode = CombineMode::intersection;
            auto sel = select_combined(d, norm, spec);
            for (const auto& id : sel.selected_ids)
                for (size_t i = 0; i < types.size(); ++i)
                    if (!single[types[i]][iv_idx[i]].count(id))
                        return fmt("seed %llu: %s escaped %s %s",
                                   static_cast<unsigned long long>(seed), id.c_str(),
                                   to_string(types[i]),
                                   catalog[iv_idx[i]].label.c_str());
            return "";
        };

        const std::vector<std::vector<EntropyType>> pairs = {
            {EntropyType::IE, EntropyType::GE},
            {EntropyType::IE, EntropyType::SE},
            {EntropyType::GE, EntropyType::SE}};
        for (const auto& combo : pairs)
            for (size_t i = 0; i < catalog.size(); ++i)
                for (size_t j = 0; j < catalog.size(); ++j)
                    if (auto bad = contained(combo, {i, j}); !bad.empty()) return bad;

        const std::vector<EntropyType> triple = {EntropyType::IE, EntropyType::GE,
                                                 EntropyType::SE};
        for (size_t i = 0; i < catalog.size(); ++i)
            for (size_t j = 0; j < catalog.size(); ++j)
                for (size_t k = 0; k < catalog.size(); ++k)
                    if (auto bad = contained(triple, {i, j, k}); !bad.empty())
                        return bad;
    }
    return "";
}

// ---------------------------------------------------------------- criterion 8

std::string criterion_determinism() {
    if (g_cli.empty()) return "cli path not provided (--cli)";
    TempDir tmp("euds-acc8");
    Dataset pool = planted_two_class(800, 0.3, 12).data;
    std::string input = tmp.file("pool.jsonl");
    save_dataset(pool, input);

    std::string dirs[2] = {tmp.file("a"), tmp.file("b")};
    for (const auto& dir : dirs) {
        std::string errfile = tmp.file("stderr.txt");
        int rc = run_cli("run --original " + shq(input) + " --out " + shq(dir) +
                             " --seed 12 --quiet",
                         errfile);
        if (rc != 0) return fmt("cli exit %d: %s", rc, slurp(errfile).c_str());
    }

    std::set<std::string> names[2];
    for (int i = 0; i < 2; ++i)
        for (const auto& entry : std::filesystem::directory_iterator(dirs[i]))
            names[i].insert(entry.path().filename().string());
    if (names[0] != names[1]) return "the two runs emitted different file sets";

    for (const auto& name : names[0]) {
        std::string a = slurp(dirs[0] + "/" + name);
        std::string b = slurp(dirs[1] + "/" + name);
        if (name == "run_report.json") {
            json ja = json::parse(a);
            json jb = json::parse(b);
            ja.erase("timings");
            jb.erase("timings");
            ja.erase("outputs");
            jb.erase("outputs");
            if (ja != jb) return "run reports differ beyond timings and paths";
        } else if (a != b) {
            return name + " differs between identically seeded runs";
        }
    }
    return "";
}

// ---------------------------------------------------------------- criterion 9

std::string criterion_scaling() {
    auto make_docs = [](size_t ndocs) {
        auto rng = make_rng(31337, 9);
        std::vector<std::string> vocab;
        for (int i = 0; i < 50; ++i) vocab.push_back("w" + std::to_string(i));
        std::vector<std::vector<std::string>> docs(ndocs);
        for (auto& doc : docs) {
            doc.resize(100);
            for (auto& t : doc) t = vocab[uniform_below(rng, 50)];
        }
        return docs;
    };
    IEConfig cfg;
    auto time_once = [&](const std::vector<std::vector<std::string>>& docs) {
        double sink = 0.0;
        double t0 = now_s();
        for (const auto& doc : docs) sink += information_entropy_tokens(doc, cfg);
        double took = now_s() - t0;
        volatile double keep = sink;
        (void)keep;
        return took;
    };
    auto median5 = [&](const std::vector<std::vector<std::string>>& docs) {
        std::vector<double> times;
        time_once(docs);
        for (int r = 0; r < 5; ++r) times.push_back(time_once(docs));
        std::sort(times.begin(), times.end());
        return times[2];
    };
    auto small = make_docs(1000);
    auto large = make_docs(2000);
    double t_small = median5(small);
    double t_large = median5(large);
    if (t_small <= 0.0) return "small-run timing came back empty";
    double ratio = t_large / t_small;
    if (ratio >= 2.6)
        return fmt("time(2N)/time(N) = %.2f (%.4fs / %.4fs)", ratio, t_large,
                   t_small);
    return "";
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];

    struct Criterion {
        int id;
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "entropy-oracle-equivalence", criterion_entropy_oracle},
        {2, "closed-form-anchors", criterion_closed_forms},
        {3, "pinned-arithmetic", criterion_pinned_arithmetic},
        {4, "normalization-properties", criterion_normalization},
        {5, "planted-signal-end-to-end", criterion_planted_signal},
        {6, "subset-generalization", criterion_subset_generalization},
        {7, "combined-entropy-containment", criterion_combined_containment},
        {8, "determinism", criterion_determinism},
        {9, "scaling-smoke", criterion_scaling},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        double t0 = now_s();
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double took = now_s() - t0;
        if (detail.empty()) {
            std::printf("criterion %d (%s): PASS (%.1fs)\n", c.id, c.name, took);
        } else {
            std::printf("criterion %d (%s): FAIL - %s\n", c.id, c.name,
                        detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
