#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace euds {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string path_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string require_string(const ordered_json& rec, const char* key,
                           const std::string& where) {
    if (!rec.contains(key))
        throw data_error(where + ": missing field \"" + key + "\"");
    const auto& v = rec.at(key);
    if (!v.is_string())
        throw data_error(where + ": field \"" + std::string(key) + "\" must be a string");
    return v.get<std::string>();
}

} // namespace

void validate_sample(const Sample& s, const std::string& where) {
    if (s.id.empty())
        throw data_error(where + ": empty id");
    if (!has_visible_text(s.text))
        throw data_error(where + ": sample \"" + s.id + "\" has no visible text");
    if (s.label.empty())
        throw data_error(where + ": sample \"" + s.id + "\" has an empty label");
    if (s.equivalence_labels) {
        if (!s.generations)
            throw data_error(where + ": sample \"" + s.id +
                             "\" has equivalence_labels but no generations");
        if (s.equivalence_labels->size() != s.generations->size())
            throw data_error(where + ": sample \"" + s.id +
                             "\" equivalence_labels length " +
                             std::to_string(s.equivalence_labels->size()) +
                             " does not match generations length " +
                             std::to_string(s.generations->size()));
    }
    if (s.logprobs) {
        for (double lp : s.logprobs.value()) {
            if (!(lp <= 0.0) || std::isnan(lp))
                throw data_error(where + ": sample \"" + s.id +
                                 "\" has a positive or invalid log probability");
        }
    }
}

Dataset load_dataset(const std::string& path, Source source_tag,
                     const std::string& name, Task task) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot open dataset file: " + path);

    Dataset d;
    d.name = name.empty() ? path_stem(path) : name;
    d.task = task;

    std::map<std::string, size_t> seen_ids;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        std::string where = path + " line " + std::to_string(lineno);

        ordered_json rec;
        try {
            rec = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw data_error(where + ": malformed record: " + e.what());
        }
        if (!rec.is_object())
            throw data_error(where + ": record must be a JSON object");

        Sample s;
        s.id = require_string(rec, "id", where);
        s.text = require_string(rec, "text", where);
        s.label = require_string(rec, "label", where);
        s.source = source_tag;
        if (rec.contains("source")) {
            const auto& v = rec.at("source");
            if (!v.is_string())
                throw data_error(where + ": field \"source\" must be a string");
            s.source = source_from_string(v.get<std::string>());
        }
        if (rec.contains("generations")) {
            const auto& v = rec.at("generations");
            if (!v.is_array())
                throw data_error(where + ": field \"generations\" must be an array");
            std::vector<std::string> gens;
            for (const auto& g : v) {
                if (!g.is_string())
                    throw data_error(where + ": generations entries must be strings");
                gens.push_back(g.get<std::string>());
            }
            s.generations = std::move(gens);
        }
        if (rec.contains("equivalence_labels")) {
            const auto& v = rec.at("equivalence_labels");
            if (!v.is_array())
                throw data_error(where + ": field \"equivalence_labels\" must be an array");
            std::vector<int64_t> labs;
            for (const auto& g : v) {
                if (!g.is_number_integer())
                    throw data_error(where + ": equivalence_labels entries must be integers");
                labs.push_back(g.get<int64_t>());
            }
            s.equivalence_labels = std::move(labs);
        }
        if (rec.contains("logprobs")) {
            const auto& v = rec.at("logprobs");
            if (!v.is_array())
                throw data_error(where + ": field \"logprobs\" must be an array");
            std::vector<double> lps;
            for (const auto& g : v) {
                if (!g.is_number())
                    throw data_error(where + ": logprobs entries must be numbers");
                lps.push_back(g.get<double>());
            }
            s.logprobs = std::move(lps);
        }

        validate_sample(s, where);

        auto [it, inserted] = seen_ids.emplace(s.id, lineno);
        if (!inserted)
            throw data_error(where + ": duplicate id \"" + s.id +
                             "\" (first seen at line " + std::to_string(it->second) + ")");

        d.label_set.insert(s.label);
        d.samples.push_back(std::move(s));
    }

    if (d.samples.empty())
        throw data_error(path + ": no records");
    return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error("cannot write dataset file: " + path);
    for (const auto& s : d.samples) {
        ordered_json rec;
        rec["id"] = s.id;
        rec["text"] = s.text;
        rec["label"] = s.label;
        rec["source"] = to_string(s.source);
        if (s.generations) rec["generations"] = *s.generations;
        if (s.equivalence_labels) rec["equivalence_labels"] = *s.equivalence_labels;
        if (s.logprobs) rec["logprobs"] = *s.logprobs;
        out << rec.dump() << '\n';
    }
    if (!out)
        throw data_error("failed while writing dataset file: " + path);
}

Splits split_dataset(const Dataset& d, const SplitSpec& spec) {
    if (spec.train_ratio <= 0 || spec.val_ratio <= 0 || spec.test_ratio <= 0)
        throw config_error("split ratios must be positive");
    double sum = spec.train_ratio + spec.val_ratio + spec.test_ratio;
    if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("split ratios must sum to 1, got " + std::to_string(sum));
    if (d.empty())
        throw data_error("cannot split an empty dataset");

    // Strata in sorted label order so the assignment is reproducible.
    std::map<std::string, std::vector<size_t>> strata;
    if (spec.stratified) {
        for (size_t i = 0; i < d.samples.size(); ++i)
            strata[d.samples[i].label].push_back(i);
        std::vector<std::string> thin;
        for (const auto& [label, idx] : strata)
            if (idx.size() < 3) thin.push_back(label);
        if (!thin.empty()) {
            std::string msg = "stratified split needs at least 3 samples per label; too few for:";
            for (const auto& l : thin) msg += " \"" + l + "\"";
            throw data_error(msg);
        }
    } else {
        auto& all = strata[""];
        for (size_t i = 0; i < d.samples.size(); ++i) all.push_back(i);
    }

    auto rng = make_rng(spec.seed, 1);
    std::vector<size_t> order(d.samples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    det_shuffle(order, rng);

    std::vector<size_t> shuffled_pos(d.samples.size());
    for (size_t r = 0; r < order.size(); ++r) shuffled_pos[order[r]] = r;

    // 0 = train, 1 = val, 2 = test
    std::vector<int> assign(d.samples.size(), 0);
    const double ratios[3] = {spec.train_ratio, spec.val_ratio, spec.test_ratio};
    for (auto& [label, idx] : strata) {
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            return shuffled_pos[a] < shuffled_pos[b];
        });
        size_t n = idx.size();
        size_t quota[3];
        double frac[3];
        size_t used = 0;
        for (int k = 0; k < 3; ++k) {
            double exact = ratios[k] * static_cast<double>(n);
            quota[k] = static_cast<size_t>(std::floor(exact));
            frac[k] = exact - static_cast<double>(quota[k]);
            used += quota[k];
        }
        // Largest remainder; ties go to train, then val, then test.
        int by_frac[3] = {0, 1, 2};
        std::stable_sort(by_frac, by_frac + 3,
                         [&](int a, int b) { return frac[a] > frac[b]; });
        for (size_t extra = 0; extra < n - used; ++extra)
            ++quota[by_frac[extra % 3]];

        size_t pos = 0;
        for (int k = 0; k < 3; ++k)
            for (size_t j = 0; j < quota[k]; ++j) assign[idx[pos++]] = k;
    }

    Splits out;
    Dataset* parts[3] = {&out.train, &out.val, &out.test};
    const char* suffix[3] = {"-train", "-val", "-test"};
    for (int k = 0; k < 3; ++k) {
        parts[k]->name = d.name + suffix[k];
        parts[k]->task = d.task;
    }
    // Splits keep the original dataset order.
    for (size_t i = 0; i < d.samples.size(); ++i) {
        Dataset* p = parts[assign[i]];
        p->samples.push_back(d.samples[i]);
        p->label_set.insert(d.samples[i].label);
    }
    return out;
}

Dataset merge_datasets(const Dataset& a, const Dataset& b) {
    if (a.task != b.task)
        throw data_error("cannot merge datasets with different tasks: " +
                         std::string(to_string(a.task)) + " vs " +
                         std::string(to_string(b.task)));

    Dataset out;
    out.name = a.name + "+" + b.name;
    out.task = a.task;

    std::map<std::string, size_t> ids_a;
    for (size_t i = 0; i < a.samples.size(); ++i) ids_a.emplace(a.samples[i].id, i);
    std::set<std::string> colliding;
    for (const auto& s : b.samples)
        if (ids_a.count(s.id)) colliding.insert(s.id);

    auto prefixed = [](const Sample& s) {
        Sample c = s;
        c.id = std::string(to_string(s.source)) + ":" + s.id;
        return c;
    };

    std::set<std::string> seen;
    auto push = [&](Sample s) {
        if (!seen.insert(s.id).second)
            throw data_error("id collision survives source prefixing: \"" + s.id + "\"");
        out.label_set.insert(s.label);
        out.samples.push_back(std::move(s));
    };

    for (const auto& s : a.samples)
        push(colliding.count(s.id) ? prefixed(s) : s);
    for (const auto& s : b.samples)
        push(colliding.count(s.id) ? prefixed(s) : s);
    return out;
}

} // namespace euds
