#include "selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "errors.hpp"

namespace euds {

std::string to_string(CombineMode m) {
    return m == CombineMode::intersection ? "intersection" : "fused_score";
}

CombineMode combine_mode_from_string(const std::string& s) {
    if (s == "intersection") return CombineMode::intersection;
    if (s == "fused_score") return CombineMode::fused_score;
    throw config_error("unknown combine mode: \"" + s +
                       "\" (expected intersection or fused_score)");
}

std::string to_string(JoSelMode m) {
    return m == JoSelMode::same_interval ? "same_interval" : "independent";
}

JoSelMode josel_mode_from_string(const std::string& s) {
    if (s == "same_interval") return JoSelMode::same_interval;
    if (s == "independent") return JoSelMode::independent;
    throw config_error("unknown joseldata mode: \"" + s +
                       "\" (expected same_interval or independent)");
}

double reduction_stats(size_t original_count, size_t selected_count) {
    if (original_count == 0)
        throw data_error("reduction undefined for an empty original set");
    if (selected_count > original_count)
        throw data_error("selected count exceeds original count");
    uint64_t removed = original_count - selected_count;
    uint64_t num = removed * 10000;
    uint64_t q = num / original_count;
    uint64_t rem = num % original_count;
    if (rem * 2 >= original_count) ++q;
    return static_cast<double>(q) / 100.0;
}

SelectionResult select_by_interval(const Dataset& d,
                                   const std::map<std::string, double>& scores,
                                   const Interval& iv, EntropyType type) {
    SelectionResult r;
    r.parent = d.name;
    r.original_count = d.size();
    r.spec.entropy_types = {type};
    r.spec.interval_per_type.emplace(type, iv);
    for (const auto& s : d.samples) {
        auto it = scores.find(s.id);
        if (it == scores.end())
            throw data_error("no score for sample \"" + s.id + "\"");
        if (interval_contains(iv, it->second)) r.selected_ids.push_back(s.id);
    }
    r.selected_count = r.selected_ids.size();
    r.reduction_pct = reduction_stats(r.original_count, r.selected_count);
    return r;
}

namespace {

const Interval& shared_interval(const SelectionSpec& spec) {
    if (spec.interval_per_type.empty())
        throw config_error("fused_score selection needs an interval");
    const Interval& first = spec.interval_per_type.begin()->second;
    for (const auto& [type, iv] : spec.interval_per_type) {
        (void)type;
        if (iv.lower != first.lower || iv.upper != first.upper)
            throw config_error("fused_score selection needs one shared interval, got \"" +
                               first.label + "\" and \"" + iv.label + "\"");
    }
    return first;
}

std::map<EntropyType, double> resolve_weights(const SelectionSpec& spec) {
    std::map<EntropyType, double> w;
    if (spec.fused_weights.empty()) {
        double eq = 1.0 / static_cast<double>(spec.entropy_types.size());
        for (EntropyType t : spec.entropy_types) w[t] = eq;
        return w;
    }
    double sum = 0.0;
    for (EntropyType t : spec.entropy_types) {
        auto it = spec.fused_weights.find(t);
        if (it == spec.fused_weights.end())
            throw config_error(std::string("no fused weight for entropy type ") +
                               to_string(t));
        if (it->second < 0.0)
            throw config_error("fused weights must be nonnegative");
        w[t] = it->second;
        sum += it->second;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("fused weights must sum to 1");
    return w;
}

} // namespace

SelectionResult select_combined(const Dataset& d,
                                const std::map<std::string, EntropyVector>& normalized,
                                const SelectionSpec& spec) {
    if (spec.entropy_types.empty())
        throw config_error("selection needs at least one entropy type");
    std::set<EntropyType> unique(spec.entropy_types.begin(), spec.entropy_types.end());
    if (unique.size() != spec.entropy_types.size())
        throw config_error("duplicate entropy types in selection spec");

    if (spec.combine_mode == CombineMode::intersection) {
        for (EntropyType t : spec.entropy_types)
            if (!spec.interval_per_type.count(t))
                throw config_error(std::string("no interval for entropy type ") +
                                   to_string(t));
    }
    const Interval* fused_iv = nullptr;
    std::map<EntropyType, double> weights;
    if (spec.combine_mode == CombineMode::fused_score) {
        fused_iv = &shared_interval(spec);
        weights = resolve_weights(spec);
    }

    SelectionResult r;
    r.parent = d.name;
    r.original_count = d.size();
    r.spec = spec;
    for (const auto& s : d.samples) {
        auto it = normalized.find(s.id);
        if (it == normalized.end())
            throw data_error("no scores for sample \"" + s.id + "\"");
        const EntropyVector& v = it->second;
        for (EntropyType t : spec.entropy_types)
            if (!v.has(t))
                throw data_error(std::string("no ") + to_string(t) +
                                 " score for sample \"" + s.id + "\"");

        bool keep;
        if (spec.combine_mode == CombineMode::intersection) {
            keep = true;
            for (EntropyType t : spec.entropy_types) {
                if (!interval_contains(spec.interval_per_type.at(t), v.get(t))) {
                    keep = false;
                    break;
                }
            }
        } else {
            double fused = 0.0;
            for (EntropyType t : spec.entropy_types) fused += weights.at(t) * v.get(t);
            keep = interval_contains(*fused_iv, fused);
        }
        if (keep) r.selected_ids.push_back(s.id);
    }
    r.selected_count = r.selected_ids.size();
    r.reduction_pct = reduction_stats(r.original_count, r.selected_count);
    return r;
}

Dataset materialize(const Dataset& d, const SelectionResult& r) {
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < d.samples.size(); ++i) index.emplace(d.samples[i].id, i);

    Dataset out;
    out.name = d.name + "-selected";
    out.task = d.task;
    for (const auto& id : r.selected_ids) {
        auto it = index.find(id);
        if (it == index.end())
            throw data_error("selected id \"" + id + "\" is not in dataset \"" +
                             d.name + "\"");
        const Sample& s = d.samples[it->second];
        out.label_set.insert(s.label);
        out.samples.push_back(s);
    }
    return out;
}

Dataset build_sumdata(const Dataset& full_ori, const Dataset& syn_pool,
                      const SelectionResult& selected_syn) {
    Dataset picked = materialize(syn_pool, selected_syn);
    for (const auto& s : picked.samples)
        if (s.source != Source::synthetic)
            throw data_error("sumdata selection contains non-synthetic sample \"" +
                             s.id + "\"");
    if (!picked.empty()) {
        bool overlap = false;
        for (const auto& l : picked.label_set)
            if (full_ori.label_set.count(l)) { overlap = true; break; }
        if (!overlap)
            throw data_error("sumdata label sets share no labels between original and "
                             "selected synthetic data");
    }
    Dataset out = merge_datasets(full_ori, picked);
    out.name = "sumdata";
    return out;
}

Dataset build_joseldata(const Dataset& ori_pool, const SelectionResult& selected_ori,
                        const Dataset& syn_pool, const SelectionResult& selected_syn,
                        JoSelMode mode) {
    if (mode == JoSelMode::same_interval) {
        auto describe = [](const SelectionSpec& spec) {
            std::string out;
            for (EntropyType t : spec.entropy_types) {
                if (!out.empty()) out += ", ";
                out += std::string(to_string(t)) + " " +
                       spec.interval_per_type.at(t).label;
            }
            return out;
        };
        const auto& a = selected_ori.spec;
        const auto& b = selected_syn.spec;
        bool same = a.entropy_types == b.entropy_types;
        if (same) {
            for (EntropyType t : a.entropy_types) {
                const Interval& ia = a.interval_per_type.at(t);
                const Interval& ib = b.interval_per_type.at(t);
                if (ia.lower != ib.lower || ia.upper != ib.upper) { same = false; break; }
            }
        }
        if (!same)
            throw config_error("joseldata same_interval mode needs matching selections; "
                               "original used [" + describe(a) + "], synthetic used [" +
                               describe(b) + "]");
    }
    Dataset out = merge_datasets(materialize(ori_pool, selected_ori),
                                 materialize(syn_pool, selected_syn));
    out.name = "joseldata";
    return out;
}

nlohmann::ordered_json manifest_json(const SelectionResult& r, uint64_t seed,
                                     bool subset_derived) {
    nlohmann::ordered_json m;
    m["parent"] = r.parent;
    nlohmann::ordered_json types = nlohmann::ordered_json::array();
    nlohmann::ordered_json intervals;
    for (EntropyType t : r.spec.entropy_types) {
        types.push_back(to_string(t));
        intervals[std::string(to_string(t))] = r.spec.interval_per_type.at(t).label;
    }
    m["entropy_types"] = types;
    m["intervals"] = intervals;
    m["combine_mode"] =
        r.spec.entropy_types.size() > 1 ? to_string(r.spec.combine_mode) : "none";
    m["original_count"] = r.original_count;
    m["selected_count"] = r.selected_count;
    m["reduction_pct"] = r.reduction_pct;
    m["tool_version"] = kToolVersion;
    m["seed"] = seed;
    m["subset_derived"] = subset_derived;
    return m;
}

void write_manifest(const nlohmann::ordered_json& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write manifest: " + path);
    out << manifest.dump(2) << '\n';
    if (!out) throw data_error("failed while writing manifest: " + path);
}

} // namespace euds
