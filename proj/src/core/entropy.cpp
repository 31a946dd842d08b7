#include "entropy.hpp"

#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "text.hpp"

namespace euds {

ProbDist ngram_distribution(const std::vector<std::string>& tokens, int n) {
    if (n < 1) throw config_error("n-gram order must be at least 1");
    ProbDist dist;
    size_t un = static_cast<size_t>(n);
    if (tokens.size() < un) return dist;
    size_t windows = tokens.size() - un + 1;

    std::map<std::string, size_t> counts;
    std::string key;
    for (size_t i = 0; i < windows; ++i) {
        key.clear();
        for (size_t j = 0; j < un; ++j) {
            if (j) key.push_back(' ');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    for (const auto& [gram, c] : counts)
        dist[gram] = static_cast<double>(c) / static_cast<double>(windows);
    return dist;
}

double shannon_entropy(const ProbDist& p) {
    double sum = 0.0;
    for (const auto& [unit, prob] : p) {
        (void)unit;
        if (prob > 0.0) sum += prob * std::log2(prob);
    }
    return -sum + 0.0;
}

void validate(const IEConfig& cfg) {
    double sum = 0.0;
    for (double w : cfg.weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw config_error("entropy weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("entropy weights must sum to 1, got " + std::to_string(sum));
}

double information_entropy_tokens(const std::vector<std::string>& tokens,
                                  const IEConfig& cfg) {
    validate(cfg);
    double total = 0.0;
    for (int n = 1; n <= 3; ++n) {
        double w = cfg.weights[static_cast<size_t>(n - 1)];
        if (w == 0.0) continue;
        total += w * shannon_entropy(ngram_distribution(tokens, n));
    }
    return total;
}

double information_entropy(const std::string& text, const IEConfig& cfg) {
    return information_entropy_tokens(tokenize(text), cfg);
}

bool normalized_equal(const std::string& a, const std::string& b) {
    return normalize_for_equivalence(a) == normalize_for_equivalence(b);
}

namespace {

size_t uf_find(std::vector<size_t>& parent, size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

ClusterSet cluster_generations(const std::vector<std::string>& generations,
                               const EquivalenceFn& eq) {
    if (generations.empty())
        throw data_error("cannot cluster an empty generation list");
    size_t n = generations.size();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            size_t ri = uf_find(parent, i), rj = uf_find(parent, j);
            if (ri != rj && eq(generations[i], generations[j]))
                parent[std::max(ri, rj)] = std::min(ri, rj);
        }
    }

    ClusterSet out;
    out.total = n;
    std::map<size_t, size_t> root_to_cluster;
    for (size_t i = 0; i < n; ++i) {
        size_t r = uf_find(parent, i);
        auto [it, inserted] = root_to_cluster.emplace(r, out.clusters.size());
        if (inserted)
            out.clusters.emplace_back(static_cast<int64_t>(it->second), 0);
        ++out.clusters[it->second].second;
    }
    return out;
}

ClusterSet clusters_from_labels(const std::vector<int64_t>& labels) {
    if (labels.empty())
        throw data_error("cannot cluster an empty label list");
    ClusterSet out;
    out.total = labels.size();
    std::map<int64_t, size_t> label_to_cluster;
    for (int64_t lab : labels) {
        auto [it, inserted] = label_to_cluster.emplace(lab, out.clusters.size());
        if (inserted) out.clusters.emplace_back(lab, 0);
        ++out.clusters[it->second].second;
    }
    return out;
}

double semantic_entropy(const ClusterSet& c) {
    if (c.total == 0) throw data_error("cannot compute entropy of an empty cluster set");
    double sum = 0.0;
    for (const auto& [id, count] : c.clusters) {
        (void)id;
        double p = static_cast<double>(count) / static_cast<double>(c.total);
        if (p > 0.0) sum += p * std::log2(p);
    }
    return -sum + 0.0;
}

double EntropyVector::get(EntropyType t) const {
    const std::optional<double>* v = nullptr;
    switch (t) {
        case EntropyType::IE: v = &ie; break;
        case EntropyType::GE: v = &ge; break;
        case EntropyType::SE: v = &se; break;
    }
    if (!v || !v->has_value())
        throw data_error(std::string("entropy value not computed: ") + to_string(t));
    return v->value();
}

bool EntropyVector::has(EntropyType t) const {
    switch (t) {
        case EntropyType::IE: return ie.has_value();
        case EntropyType::GE: return ge.has_value();
        case EntropyType::SE: return se.has_value();
    }
    return false;
}

std::map<std::string, EntropyVector> score_dataset(const Dataset& d,
                                                   const std::set<EntropyType>& which,
                                                   const ScoreConfig& cfg) {
    if (which.empty()) throw config_error("no entropy types requested");
    validate(cfg.ie);

    bool want_ie = which.count(EntropyType::IE) > 0;
    bool want_ge = which.count(EntropyType::GE) > 0;
    bool want_se = which.count(EntropyType::SE) > 0;

    std::unique_ptr<TokenScorer> trained;
    const TokenScorer* scorer = cfg.ge_scorer;
    if (want_ge && !scorer) {
        bool all_sidecar = true;
        for (const auto& s : d.samples)
            if (!s.logprobs) { all_sidecar = false; break; }
        if (!all_sidecar) {
            trained = train_ngram_scorer(d, cfg.scorer);
            scorer = trained.get();
        }
    }

    std::map<std::string, EntropyVector> out;
    for (const auto& s : d.samples) {
        EntropyVector v;
        std::vector<std::string> toks;
        if (want_ie || want_ge) toks = tokenize(s.text);

        if (want_ie) v.ie = information_entropy_tokens(toks, cfg.ie);

        if (want_ge) {
            if (s.logprobs) {
                if (s.logprobs->size() != toks.size())
                    throw data_error("sample \"" + s.id + "\": logprobs length " +
                                     std::to_string(s.logprobs->size()) +
                                     " does not match token count " +
                                     std::to_string(toks.size()));
                v.ge = ge_from_logprobs(*s.logprobs);
            } else {
                if (toks.empty())
                    throw data_error("sample \"" + s.id +
                                     "\" has no tokens after tokenization");
                v.ge = generative_entropy(toks, *scorer);
            }
        }

        if (want_se) {
            if (s.equivalence_labels && !s.equivalence_labels->empty())
                v.se = semantic_entropy(clusters_from_labels(*s.equivalence_labels));
            else if (s.generations && !s.generations->empty())
                v.se = semantic_entropy(cluster_generations(*s.generations));
            else
                throw data_error("semantic entropy requested but sample \"" + s.id +
                                 "\" has no generations");
        }

        for (EntropyType t : which) {
            double val = v.get(t);
            if (!std::isfinite(val) || val < 0.0)
                throw data_error("sample \"" + s.id + "\": invalid " +
                                 std::string(to_string(t)) + " value");
        }
        out.emplace(s.id, std::move(v));
    }
    return out;
}

} // namespace euds
