#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "scorer.hpp"
#include "types.hpp"

namespace euds {

/// Relative-frequency distribution over n-gram strings.
using ProbDist = std::map<std::string, double>;

/// Empty result when |t| < n; caller decides what that means.
ProbDist ngram_distribution(const std::vector<std::string>& tokens, int n);

/// -sum p log2 p in bits; 0 log 0 contributes nothing.
double shannon_entropy(const ProbDist& p);

struct IEConfig {
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
};

void validate(const IEConfig& cfg);

/// Weighted sum of 1..3-gram Shannon entropies of the tokenized text.
/// Levels with too few tokens contribute 0.
double information_entropy(const std::string& text, const IEConfig& cfg = {});
double information_entropy_tokens(const std::vector<std::string>& tokens,
                                  const IEConfig& cfg);

struct ClusterSet {
    std::vector<std::pair<int64_t, size_t>> clusters;
    size_t total = 0;
};

using EquivalenceFn =
    std::function<bool(const std::string&, const std::string&)>;

/// Default equivalence: equal after lowercasing, punctuation stripping and
/// whitespace collapse.
bool normalized_equal(const std::string& a, const std::string& b);

/// Partitions generations by the pairwise predicate, closed transitively
/// through union-find.
ClusterSet cluster_generations(const std::vector<std::string>& generations,
                               const EquivalenceFn& eq = normalized_equal);

/// Clusters taken directly from precomputed class ids.
ClusterSet clusters_from_labels(const std::vector<int64_t>& labels);

/// -sum (c_i/total) log2(c_i/total) over cluster sizes.
double semantic_entropy(const ClusterSet& c);

struct EntropyVector {
    std::optional<double> ie;
    std::optional<double> ge;
    std::optional<double> se;

    double get(EntropyType t) const;
    bool has(EntropyType t) const;
};

struct ScoreConfig {
    IEConfig ie;
    ScorerConfig scorer;
    /// Pre-trained model override; when absent and a model is needed, one is
    /// trained on the dataset being scored.
    const TokenScorer* ge_scorer = nullptr;
};

/// Computes the requested raw entropies for every sample, keyed by id.
std::map<std::string, EntropyVector> score_dataset(const Dataset& d,
                                                   const std::set<EntropyType>& which,
                                                   const ScoreConfig& cfg = {});

} // namespace euds
