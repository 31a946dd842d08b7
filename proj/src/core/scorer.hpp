#pragma once

#include <memory>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace euds {

/// Conditional token-probability model. Context is oldest-first; queries use
/// the last min(order-1, available) context tokens.
class TokenScorer {
public:
    virtual ~TokenScorer() = default;
    virtual double log2_prob(const std::vector<std::string>& context,
                             const std::string& token) const = 0;
    /// Vocabulary size including the unknown symbol.
    virtual size_t vocab_size() const = 0;
    virtual int order() const = 0;
    virtual void save(const std::string& path) const = 0;
};

/// Assigns every token probability 1/V. Useful as a reference model and for
/// calibration checks.
class UniformScorer : public TokenScorer {
public:
    explicit UniformScorer(size_t vocab_size);
    explicit UniformScorer(std::vector<std::string> vocab);

    double log2_prob(const std::vector<std::string>&, const std::string&) const override;
    size_t vocab_size() const override { return vocab_size_; }
    int order() const override { return 1; }
    void save(const std::string& path) const override;

private:
    size_t vocab_size_;
    std::vector<std::string> vocab_;
};

enum class Smoothing { add_k, kneser_ney };

std::string to_string(Smoothing s);
Smoothing smoothing_from_string(const std::string& s);

struct ScorerConfig {
    int n = 2;
    Smoothing smoothing = Smoothing::add_k;
    double k = 1.0;
};

/// Trains an n-gram model over the tokenized corpus. The vocabulary is the
/// corpus token types plus an unknown symbol; conditional distributions over
/// that vocabulary sum to 1 for every context.
std::unique_ptr<TokenScorer> train_ngram_scorer(const Dataset& corpus,
                                                const ScorerConfig& cfg);

std::unique_ptr<TokenScorer> load_scorer(const std::string& path);

/// Mean per-token surprisal in bits: -(1/|t|) sum_i log2 P(t_i | t_<i).
double generative_entropy(const std::vector<std::string>& tokens,
                          const TokenScorer& scorer);

/// Same quantity when per-token log2-probabilities are supplied directly.
double ge_from_logprobs(const std::vector<double>& logprobs);

} // namespace euds
