#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "types.hpp"

namespace euds {

struct Sample {
    std::string id;
    std::string text;
    std::string label;
    Source source = Source::original;
    std::optional<std::vector<std::string>> generations;
    std::optional<std::vector<int64_t>> equivalence_labels;
    std::optional<std::vector<double>> logprobs;
};

struct Dataset {
    std::string name;
    Task task = Task::other;
    std::vector<Sample> samples;
    std::set<std::string> label_set;

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

struct SplitSpec {
    double train_ratio = 0.8;
    double val_ratio = 0.1;
    double test_ratio = 0.1;
    uint64_t seed = 0;
    bool stratified = true;
};

struct Splits {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Reads one JSON record per line (see README for the schema). `source_tag`
/// fills the source field of records that do not carry one.
Dataset load_dataset(const std::string& path, Source source_tag,
                     const std::string& name = "", Task task = Task::other);

/// Writes the dataset back in the same line-record format, one sample per
/// line, LF endings, stable field order.
void save_dataset(const Dataset& d, const std::string& path);

/// Validates one sample against the record invariants, `where` names the
/// offending location in error messages (e.g. "file.jsonl line 7").
void validate_sample(const Sample& s, const std::string& where);

Splits split_dataset(const Dataset& d, const SplitSpec& spec);

Dataset merge_datasets(const Dataset& a, const Dataset& b);

} // namespace euds
