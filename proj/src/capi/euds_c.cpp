#include <euds/euds.h>

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/corpus.hpp"
#include "../core/entropy.hpp"
#include "../core/errors.hpp"
#include "../core/pipeline.hpp"
#include "../core/scoring.hpp"
#include "../core/selection.hpp"
#include "../core/types.hpp"

struct euds_dataset {
    euds::Dataset d;
};

struct euds_scores {
    std::vector<std::string> ids;
    std::map<std::string, euds::EntropyVector> raw;
};

struct euds_selection {
    euds::SelectionResult r;
};

namespace {

thread_local std::string g_last_error;

int fail(const euds::Error& e) {
    g_last_error = e.what();
    return e.code();
}

int fail_data(const std::exception& e) {
    g_last_error = e.what();
    return EUDS_ERR_DATA;
}

template <typename F>
int guarded(F&& f) {
    try {
        f();
        return EUDS_OK;
    } catch (const euds::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail_data(e);
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw euds::config_error(what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::set<euds::EntropyType> parse_types(const char* types) {
    require(types && *types, "entropy type list must be nonempty");
    std::set<euds::EntropyType> out;
    std::string text(types);
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string part = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        size_t a = part.find_first_not_of(" \t");
        size_t b = part.find_last_not_of(" \t");
        if (a != std::string::npos)
            out.insert(euds::entropy_type_from_string(part.substr(a, b - a + 1)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    require(!out.empty(), "entropy type list must be nonempty");
    return out;
}

std::map<std::string, double> aligned_scores(const euds::Dataset& d,
                                             const double* values, size_t size) {
    require(values != nullptr, "score array must not be null");
    require(size == d.size(), "score array size must match the dataset size");
    std::map<std::string, double> out;
    for (size_t i = 0; i < d.size(); ++i) out[d.samples[i].id] = values[i];
    return out;
}

} // namespace

extern "C" {

const char* euds_version(void) { return euds::kToolVersion; }

const char* euds_last_error(void) { return g_last_error.c_str(); }

void euds_string_free(char* s) { std::free(s); }

int euds_dataset_load(const char* path, const char* source, euds_dataset** out) {
    return guarded([&] {
        require(path && *path, "path must be nonempty");
        require(out != nullptr, "output handle must not be null");
        euds::Source tag = euds::Source::original;
        if (source && *source) tag = euds::source_from_string(source);
        auto holder = std::make_unique<euds_dataset>();
        holder->d = euds::load_dataset(path, tag);
        *out = holder.release();
    });
}

int euds_dataset_save(const euds_dataset* d, const char* path) {
    return guarded([&] {
        require(d != nullptr, "dataset handle must not be null");
        require(path && *path, "path must be nonempty");
        euds::save_dataset(d->d, path);
    });
}

void euds_dataset_free(euds_dataset* d) { delete d; }

size_t euds_dataset_size(const euds_dataset* d) { return d ? d->d.size() : 0; }

const char* euds_dataset_id(const euds_dataset* d, size_t index) {
    if (!d || index >= d->d.size()) return nullptr;
    return d->d.samples[index].id.c_str();
}

const char* euds_dataset_label(const euds_dataset* d, size_t index) {
    if (!d || index >= d->d.size()) return nullptr;
    return d->d.samples[index].label.c_str();
}

const char* euds_dataset_text(const euds_dataset* d, size_t index) {
    if (!d || index >= d->d.size()) return nullptr;
    return d->d.samples[index].text.c_str();
}

int euds_dataset_merge(const euds_dataset* a, const euds_dataset* b,
                       euds_dataset** out) {
    return guarded([&] {
        require(a && b, "dataset handles must not be null");
        require(out != nullptr, "output handle must not be null");
        auto holder = std::make_unique<euds_dataset>();
        holder->d = euds::merge_datasets(a->d, b->d);
        *out = holder.release();
    });
}

int euds_dataset_split(const euds_dataset* d, double train_ratio, double val_ratio,
                       double test_ratio, uint64_t seed, euds_dataset** out_train,
                       euds_dataset** out_val, euds_dataset** out_test) {
    return guarded([&] {
        require(d != nullptr, "dataset handle must not be null");
        require(out_train && out_val && out_test,
                "output handles must not be null");
        euds::SplitSpec spec;
        spec.train_ratio = train_ratio;
        spec.val_ratio = val_ratio;
        spec.test_ratio = test_ratio;
        spec.seed = seed;
        euds::Splits splits = euds::split_dataset(d->d, spec);
        auto train = std::make_unique<euds_dataset>();
        auto val = std::make_unique<euds_dataset>();
        auto test = std::make_unique<euds_dataset>();
        train->d = std::move(splits.train);
        val->d = std::move(splits.val);
        test->d = std::move(splits.test);
        *out_train = train.release();
        *out_val = val.release();
        *out_test = test.release();
    });
}

int euds_scores_compute(const euds_dataset* d, const char* types, euds_scores** out) {
    return guarded([&] {
        require(d != nullptr, "dataset handle must not be null");
        require(out != nullptr, "output handle must not be null");
        auto which = parse_types(types);
        auto holder = std::make_unique<euds_scores>();
        holder->raw = euds::score_dataset(d->d, which);
        holder->ids.reserve(d->d.size());
        for (const auto& s : d->d.samples) holder->ids.push_back(s.id);
        *out = holder.release();
    });
}

void euds_scores_free(euds_scores* s) { delete s; }

int euds_scores_raw(const euds_scores* s, const char* type, double* out,
                    size_t size) {
    return guarded([&] {
        require(s != nullptr, "scores handle must not be null");
        require(type && *type, "entropy type must be nonempty");
        require(out != nullptr, "output array must not be null");
        require(size == s->ids.size(), "output size must match the dataset size");
        euds::EntropyType t = euds::entropy_type_from_string(type);
        for (size_t i = 0; i < s->ids.size(); ++i)
            out[i] = s->raw.at(s->ids[i]).get(t);
    });
}

int euds_scores_normalized(const euds_scores* s, const char* type,
                           const char* method, double* out, size_t size) {
    return guarded([&] {
        require(s != nullptr, "scores handle must not be null");
        require(type && *type, "entropy type must be nonempty");
        require(method && *method, "normalization method must be nonempty");
        require(out != nullptr, "output array must not be null");
        require(size == s->ids.size(), "output size must match the dataset size");
        euds::EntropyType t = euds::entropy_type_from_string(type);
        std::map<std::string, double> raws;
        for (const auto& [id, v] : s->raw) raws[id] = v.get(t);
        auto normalized =
            euds::normalize_scores(raws, euds::normalize_method_from_string(method));
        for (size_t i = 0; i < s->ids.size(); ++i) out[i] = normalized.at(s->ids[i]);
    });
}

int euds_select(const euds_dataset* d, const char* type, const double* normalized,
                size_t size, const char* interval, euds_selection** out) {
    return guarded([&] {
        require(d != nullptr, "dataset handle must not be null");
        require(type && *type, "entropy type must be nonempty");
        require(interval && *interval, "interval must be nonempty");
        require(out != nullptr, "output handle must not be null");
        auto scores = aligned_scores(d->d, normalized, size);
        auto holder = std::make_unique<euds_selection>();
        holder->r = euds::select_by_interval(d->d, scores,
                                             euds::parse_interval(interval),
                                             euds::entropy_type_from_string(type));
        *out = holder.release();
    });
}

void euds_selection_free(euds_selection* s) { delete s; }

size_t euds_selection_size(const euds_selection* s) {
    return s ? s->r.selected_count : 0;
}

double euds_selection_reduction_pct(const euds_selection* s) {
    return s ? s->r.reduction_pct : 0.0;
}

int euds_selection_materialize(const euds_dataset* d, const euds_selection* s,
                               euds_dataset** out) {
    return guarded([&] {
        require(d && s, "handles must not be null");
        require(out != nullptr, "output handle must not be null");
        auto holder = std::make_unique<euds_dataset>();
        holder->d = euds::materialize(d->d, s->r);
        *out = holder.release();
    });
}

int euds_selection_manifest(const euds_selection* s, uint64_t seed,
                            int subset_derived, char** out_json) {
    return guarded([&] {
        require(s != nullptr, "selection handle must not be null");
        require(out_json != nullptr, "output handle must not be null");
        auto manifest = euds::manifest_json(s->r, seed, subset_derived != 0);
        *out_json = dup_string(manifest.dump(2));
    });
}

int euds_build_sumdata(const euds_dataset* ori, const euds_dataset* syn,
                       const euds_selection* syn_sel, euds_dataset** out) {
    return guarded([&] {
        require(ori && syn && syn_sel, "handles must not be null");
        require(out != nullptr, "output handle must not be null");
        auto holder = std::make_unique<euds_dataset>();
        holder->d = euds::build_sumdata(ori->d, syn->d, syn_sel->r);
        *out = holder.release();
    });
}

int euds_build_joseldata(const euds_dataset* ori, const euds_selection* ori_sel,
                         const euds_dataset* syn, const euds_selection* syn_sel,
                         const char* mode, euds_dataset** out) {
    return guarded([&] {
        require(ori && ori_sel && syn && syn_sel, "handles must not be null");
        require(out != nullptr, "output handle must not be null");
        euds::JoSelMode m = euds::JoSelMode::same_interval;
        if (mode && *mode) m = euds::josel_mode_from_string(mode);
        auto holder = std::make_unique<euds_dataset>();
        holder->d = euds::build_joseldata(ori->d, ori_sel->r, syn->d, syn_sel->r, m);
        *out = holder.release();
    });
}

int euds_reduction_pct(size_t original_count, size_t selected_count, double* out) {
    return guarded([&] {
        require(out != nullptr, "output pointer must not be null");
        *out = euds::reduction_stats(original_count, selected_count);
    });
}

int euds_emit_distribution(const double* normalized, size_t size, int bins,
                           const char* path) {
    return guarded([&] {
        require(normalized != nullptr || size == 0, "score array must not be null");
        require(path && *path, "path must be nonempty");
        std::map<std::string, double> scores;
        for (size_t i = 0; i < size; ++i) scores[std::to_string(i)] = normalized[i];
        euds::emit_distribution(scores, bins, path);
    });
}

int euds_run_pipeline(const char* mode, const char* config_json,
                      char** out_report_json) {
    return guarded([&] {
        require(mode && *mode, "mode must be nonempty");
        require(config_json && *config_json, "configuration must be nonempty");
        require(out_report_json != nullptr, "output handle must not be null");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::exception& e) {
            throw euds::config_error(std::string("configuration is not valid JSON: ") +
                                     e.what());
        }
        euds::RunConfig cfg =
            euds::config_from_json(j, euds::run_mode_from_string(mode));
        euds::RunReport report = euds::run_pipeline(cfg);
        *out_report_json = dup_string(euds::report_json(report).dump(2));
    });
}

int euds_render_report(const char* report_json, char** out_text) {
    return guarded([&] {
        require(report_json && *report_json, "report must be nonempty");
        require(out_text != nullptr, "output handle must not be null");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(report_json);
        } catch (const nlohmann::json::exception& e) {
            throw euds::data_error(std::string("report is not valid JSON: ") +
                                   e.what());
        }
        *out_text = dup_string(euds::render_report(j));
    });
}

} // extern "C"
