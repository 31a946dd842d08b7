#include "proxy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "errors.hpp"
#include "text.hpp"

namespace euds {

namespace {

constexpr int kEpochs = 10;
constexpr double kLearningRate = 0.1;

} // namespace

EvalResult proxy_train_eval(const Dataset& train, const Dataset& val,
                            std::vector<std::string>* warnings) {
    if (train.empty()) throw data_error("evaluator needs a nonempty training set");
    if (val.empty()) throw data_error("evaluator needs a nonempty validation set");

    std::vector<std::string> labels(train.label_set.begin(), train.label_set.end());
    std::map<std::string, size_t> label_idx;
    for (size_t i = 0; i < labels.size(); ++i) label_idx.emplace(labels[i], i);

    if (warnings) {
        for (const auto& l : val.label_set)
            if (!label_idx.count(l))
                warnings->push_back("validation label \"" + l +
                                    "\" is absent from the training set");
    }

    std::map<std::string, size_t> vocab_idx;
    std::vector<std::vector<std::pair<size_t, double>>> train_feats(train.size());
    std::vector<size_t> train_labels(train.size());
    for (size_t i = 0; i < train.samples.size(); ++i) {
        const auto& s = train.samples[i];
        train_labels[i] = label_idx.at(s.label);
        std::map<size_t, double> counts;
        for (const auto& tok : tokenize(s.text)) {
            auto [it, inserted] = vocab_idx.emplace(tok, vocab_idx.size());
            counts[it->second] += 1.0;
        }
        train_feats[i].assign(counts.begin(), counts.end());
    }

    size_t L = labels.size();
    size_t V = vocab_idx.size();

    // Multinomial add-1 estimates as the starting point.
    std::vector<std::vector<double>> weights(L, std::vector<double>(V, 0.0));
    std::vector<double> bias(L, 0.0);
    {
        std::vector<std::vector<double>> token_count(L, std::vector<double>(V, 0.0));
        std::vector<double> label_total(L, 0.0);
        std::vector<double> label_freq(L, 0.0);
        for (size_t i = 0; i < train_feats.size(); ++i) {
            size_t l = train_labels[i];
            label_freq[l] += 1.0;
            for (const auto& [v, c] : train_feats[i]) {
                token_count[l][v] += c;
                label_total[l] += c;
            }
        }
        double n = static_cast<double>(train.size());
        for (size_t l = 0; l < L; ++l) {
            bias[l] = std::log(label_freq[l] / n);
            double denom = label_total[l] + static_cast<double>(V);
            for (size_t v = 0; v < V; ++v)
                weights[l][v] = std::log((token_count[l][v] + 1.0) / denom);
        }
    }

    auto logits_of = [&](const std::vector<std::pair<size_t, double>>& feats,
                         std::vector<double>& logits) {
        for (size_t l = 0; l < L; ++l) {
            double z = bias[l];
            for (const auto& [v, c] : feats) z += weights[l][v] * c;
            logits[l] = z;
        }
    };

    auto softmax_inplace = [&](std::vector<double>& z) {
        double mx = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double& x : z) {
            x = std::exp(x - mx);
            sum += x;
        }
        for (double& x : z) x /= sum;
    };

    std::vector<double> logits(L), probs(L);
    std::vector<std::vector<double>> grad_w(L, std::vector<double>(V, 0.0));
    std::vector<double> grad_b(L, 0.0);
    double inv_n = 1.0 / static_cast<double>(train.size());
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        for (auto& row : grad_w) std::fill(row.begin(), row.end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        for (size_t i = 0; i < train_feats.size(); ++i) {
            logits_of(train_feats[i], logits);
            probs = logits;
            softmax_inplace(probs);
            for (size_t l = 0; l < L; ++l) {
                double err = probs[l] - (l == train_labels[i] ? 1.0 : 0.0);
                grad_b[l] += err;
                for (const auto& [v, c] : train_feats[i]) grad_w[l][v] += err * c;
            }
        }
        for (size_t l = 0; l < L; ++l) {
            bias[l] -= kLearningRate * inv_n * grad_b[l];
            for (size_t v = 0; v < V; ++v)
                weights[l][v] -= kLearningRate * inv_n * grad_w[l][v];
        }
    }

    // Evaluate. Ties go to the first label in sorted order; unknown tokens
    // carry no signal.
    size_t correct = 0;
    std::map<std::string, size_t> tp, fp, fn;
    for (const auto& s : val.samples) {
        std::map<size_t, double> counts;
        for (const auto& tok : tokenize(s.text)) {
            auto it = vocab_idx.find(tok);
            if (it != vocab_idx.end()) counts[it->second] += 1.0;
        }
        std::vector<std::pair<size_t, double>> feats(counts.begin(), counts.end());
        logits_of(feats, logits);
        size_t best = 0;
        for (size_t l = 1; l < L; ++l)
            if (logits[l] > logits[best]) best = l;
        const std::string& predicted = labels[best];
        if (predicted == s.label) {
            ++correct;
            ++tp[s.label];
        } else {
            ++fp[predicted];
            ++fn[s.label];
        }
    }

    std::set<std::string> f1_labels(val.label_set.begin(), val.label_set.end());
    for (const auto& [l, c] : fp) {
        (void)c;
        f1_labels.insert(l);
    }
    double f1_sum = 0.0;
    for (const auto& l : f1_labels) {
        double tpl = static_cast<double>(tp.count(l) ? tp.at(l) : 0);
        double fpl = static_cast<double>(fp.count(l) ? fp.at(l) : 0);
        double fnl = static_cast<double>(fn.count(l) ? fn.at(l) : 0);
        double precision = tpl + fpl > 0 ? tpl / (tpl + fpl) : 0.0;
        double recall = tpl + fnl > 0 ? tpl / (tpl + fnl) : 0.0;
        double f1 = precision + recall > 0
                        ? 2.0 * precision * recall / (precision + recall)
                        : 0.0;
        f1_sum += f1;
    }

    EvalResult r;
    r.train_count = train.size();
    r.val_count = val.size();
    r.accuracy = static_cast<double>(correct) / static_cast<double>(val.size());
    r.macro_f1 = f1_labels.empty() ? 0.0 : f1_sum / static_cast<double>(f1_labels.size());
    return r;
}

} // namespace euds
