#include "scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "text.hpp"

namespace euds {

namespace {

constexpr const char* kUnk = "<unk>";
constexpr const char* kBackoff = "<bo>";
constexpr double kDiscount = 0.75;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_tokens(const std::vector<std::string>& toks, size_t lo, size_t hi) {
    std::string out;
    for (size_t i = lo; i < hi; ++i) {
        if (i > lo) out.push_back(' ');
        out += toks[i];
    }
    return out;
}

std::string drop_first_token(const std::string& ctx) {
    auto sp = ctx.find(' ');
    return sp == std::string::npos ? std::string() : ctx.substr(sp + 1);
}

size_t context_level(const std::string& ctx) {
    if (ctx.empty()) return 0;
    return static_cast<size_t>(std::count(ctx.begin(), ctx.end(), ' ')) + 1;
}

struct ContextCounts {
    std::map<std::string, uint64_t> by_token;
    uint64_t total = 0;
};

using LevelCounts = std::map<std::string, ContextCounts>;

class NGramScorer : public TokenScorer {
public:
    NGramScorer(const Dataset& corpus, const ScorerConfig& cfg) : cfg_(cfg) {
        std::set<std::string> types;
        std::vector<std::vector<std::string>> seqs;
        seqs.reserve(corpus.samples.size());
        for (const auto& s : corpus.samples) {
            auto toks = tokenize(s.text);
            for (const auto& t : toks) types.insert(t);
            seqs.push_back(std::move(toks));
        }
        vocab_.assign(types.begin(), types.end());
        vocab_size_ = vocab_.size() + 1;

        size_t n = static_cast<size_t>(cfg_.n);
        raw_.resize(n);
        for (const auto& toks : seqs) {
            for (size_t i = 0; i < toks.size(); ++i) {
                for (size_t m = 0; m + 1 <= n && m <= i; ++m) {
                    auto& ctx = raw_[m][join_tokens(toks, i - m, i)];
                    ++ctx.by_token[toks[i]];
                    ++ctx.total;
                }
            }
        }

        if (cfg_.smoothing == Smoothing::kneser_ney) build_kn_tables();
    }

    double log2_prob(const std::vector<std::string>& context,
                     const std::string& token) const override {
        size_t m = std::min<size_t>(static_cast<size_t>(cfg_.n) - 1, context.size());
        std::string ctx = map_context(context, m);
        std::string tok = in_vocab(token) ? token : kUnk;
        if (cfg_.smoothing == Smoothing::add_k) return addk_log2(m, ctx, tok);
        return kn_log2(m, ctx, tok);
    }

    size_t vocab_size() const override { return vocab_size_; }
    int order() const override { return cfg_.n; }
    void save(const std::string& path) const override;

private:
    bool in_vocab(const std::string& t) const {
        return std::binary_search(vocab_.begin(), vocab_.end(), t);
    }

    std::string map_context(const std::vector<std::string>& context, size_t m) const {
        std::string out;
        size_t start = context.size() - m;
        for (size_t i = start; i < context.size(); ++i) {
            if (i > start) out.push_back(' ');
            out += in_vocab(context[i]) ? context[i] : kUnk;
        }
        return out;
    }

    double addk_log2(size_t m, const std::string& ctx, const std::string& tok) const {
        double V = static_cast<double>(vocab_size_);
        auto it = raw_[m].find(ctx);
        if (it == raw_[m].end()) return -std::log2(V);
        auto jt = it->second.by_token.find(tok);
        uint64_t c = jt == it->second.by_token.end() ? 0 : jt->second;
        return std::log2((static_cast<double>(c) + cfg_.k) /
                         (static_cast<double>(it->second.total) + cfg_.k * V));
    }

    // Kneser-Ney tables. eff_[m] holds the counts level m interpolates over:
    // raw counts at the top order, continuation counts below. The base
    // distribution is add-1 smoothed continuation unigrams so every token,
    // including the unknown symbol, keeps strictly positive probability.
    void build_kn_tables() {
        size_t n = static_cast<size_t>(cfg_.n);
        eff_.resize(n);
        eff_[n - 1] = raw_[n - 1];
        for (size_t m = n - 1; m >= 2; --m) {
            for (const auto& [ctx, cc] : eff_[m]) {
                std::string shorter = drop_first_token(ctx);
                for (const auto& [tok, c] : cc.by_token) {
                    if (c == 0) continue;
                    auto& dst = eff_[m - 1][shorter];
                    ++dst.by_token[tok];
                    ++dst.total;
                }
            }
        }
        for (const auto& [ctx, cc] : raw_[1]) {
            (void)ctx;
            for (const auto& [tok, c] : cc.by_token) {
                if (c == 0) continue;
                ++continuation_[tok];
                ++continuation_total_;
            }
        }
    }

    double kn_base(const std::string& tok) const {
        double V = static_cast<double>(vocab_size_);
        auto it = continuation_.find(tok);
        double cont = it == continuation_.end() ? 0.0 : static_cast<double>(it->second);
        return (cont + 1.0) / (static_cast<double>(continuation_total_) + V);
    }

    double kn_prob(size_t m, const std::string& ctx, const std::string& tok) const {
        if (m == 0) return kn_base(tok);
        auto it = eff_[m].find(ctx);
        if (it == eff_[m].end() || it->second.total == 0)
            return kn_prob(m - 1, drop_first_token(ctx), tok);
        const auto& cc = it->second;
        double tot = static_cast<double>(cc.total);
        double lam = kDiscount * static_cast<double>(cc.by_token.size()) / tot;
        auto jt = cc.by_token.find(tok);
        double disc = jt == cc.by_token.end()
                          ? 0.0
                          : (static_cast<double>(jt->second) - kDiscount) / tot;
        return disc + lam * kn_prob(m - 1, drop_first_token(ctx), tok);
    }

    // Log-space twin of kn_prob that matches what a reloaded model computes:
    // seen tokens resolve to log2 of the full interpolated probability, unseen
    // ones to log2(lambda) plus the lower-order answer.
    double kn_log2(size_t m, const std::string& ctx, const std::string& tok) const {
        if (m == 0) return std::log2(kn_base(tok));
        auto it = eff_[m].find(ctx);
        if (it == eff_[m].end() || it->second.total == 0)
            return kn_log2(m - 1, drop_first_token(ctx), tok);
        const auto& cc = it->second;
        double tot = static_cast<double>(cc.total);
        double lam = kDiscount * static_cast<double>(cc.by_token.size()) / tot;
        if (cc.by_token.count(tok))
            return std::log2(kn_prob(m, ctx, tok));
        return std::log2(lam) + kn_log2(m - 1, drop_first_token(ctx), tok);
    }

    ScorerConfig cfg_;
    std::vector<std::string> vocab_;
    size_t vocab_size_ = 1;
    std::vector<LevelCounts> raw_;
    std::vector<LevelCounts> eff_;
    std::map<std::string, uint64_t> continuation_;
    uint64_t continuation_total_ = 0;
};

void write_header(std::ostream& out, int n, const std::string& smoothing, double k,
                  size_t vocab_size, const std::vector<std::string>& vocab) {
    out << "euds-scorer 1\n";
    out << "n " << n << '\n';
    out << "smoothing " << smoothing << '\n';
    out << "k " << fmt_double(k) << '\n';
    out << "vocab_size " << vocab_size << '\n';
    out << "vocab_count " << vocab.size() << '\n';
    for (const auto& t : vocab) out << t << '\n';
}

// A scorer reconstructed from the flat text format. Rows keyed by context;
// the level of a context is implied by its token count.
class LoadedScorer : public TokenScorer {
public:
    LoadedScorer(int n, Smoothing smoothing, double k, size_t vocab_size,
                 std::vector<std::string> vocab,
                 std::map<std::string, std::map<std::string, double>> rows)
        : n_(n), smoothing_(smoothing), k_(k), vocab_size_(vocab_size),
          vocab_(std::move(vocab)), rows_(std::move(rows)) {}

    double log2_prob(const std::vector<std::string>& context,
                     const std::string& token) const override {
        size_t m = std::min<size_t>(static_cast<size_t>(n_) - 1, context.size());
        std::string ctx = map_context(context, m);
        std::string tok = in_vocab(token) ? token : kUnk;
        return lookup(m, ctx, tok);
    }

    size_t vocab_size() const override { return vocab_size_; }
    int order() const override { return n_; }

    void save(const std::string& path) const override {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw data_error("cannot write scorer file: " + path);
        write_header(out, n_, to_string(smoothing_), k_, vocab_size_, vocab_);
        size_t count = 0;
        for (const auto& [ctx, toks] : rows_) count += toks.size();
        out << "rows " << count << '\n';
        for (const auto& [ctx, toks] : rows_)
            for (const auto& [tok, lp] : toks)
                out << ctx << '\t' << tok << '\t' << fmt_double(lp) << '\n';
        if (!out) throw data_error("failed while writing scorer file: " + path);
    }

private:
    bool in_vocab(const std::string& t) const {
        return std::binary_search(vocab_.begin(), vocab_.end(), t);
    }

    std::string map_context(const std::vector<std::string>& context, size_t m) const {
        std::string out;
        size_t start = context.size() - m;
        for (size_t i = start; i < context.size(); ++i) {
            if (i > start) out.push_back(' ');
            out += in_vocab(context[i]) ? context[i] : kUnk;
        }
        return out;
    }

    double lookup(size_t m, const std::string& ctx, const std::string& tok) const {
        auto it = rows_.find(ctx);
        if (it != rows_.end() && context_level(ctx) == m) {
            auto jt = it->second.find(tok);
            if (jt != it->second.end()) return jt->second;
            if (smoothing_ == Smoothing::add_k) {
                auto ut = it->second.find(kUnk);
                if (ut != it->second.end()) return ut->second;
                throw data_error("scorer model misses the unknown-token row for context \"" +
                                 ctx + "\"");
            }
            auto bt = it->second.find(kBackoff);
            if (bt == it->second.end())
                throw data_error("scorer model misses the backoff row for context \"" +
                                 ctx + "\"");
            return bt->second + lookup(m - 1, drop_first_token(ctx), tok);
        }
        if (smoothing_ == Smoothing::add_k)
            return -std::log2(static_cast<double>(vocab_size_));
        if (m == 0)
            throw data_error("scorer model misses its base distribution");
        return lookup(m - 1, drop_first_token(ctx), tok);
    }

    int n_;
    Smoothing smoothing_;
    double k_;
    size_t vocab_size_;
    std::vector<std::string> vocab_;
    std::map<std::string, std::map<std::string, double>> rows_;
};

void NGramScorer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write scorer file: " + path);
    write_header(out, cfg_.n, to_string(cfg_.smoothing), cfg_.k, vocab_size_, vocab_);

    std::vector<std::string> lines;
    if (cfg_.smoothing == Smoothing::add_k) {
        for (size_t m = 0; m < raw_.size(); ++m) {
            for (const auto& [ctx, cc] : raw_[m]) {
                for (const auto& [tok, c] : cc.by_token) {
                    (void)c;
                    lines.push_back(ctx + '\t' + tok + '\t' +
                                    fmt_double(addk_log2(m, ctx, tok)));
                }
                lines.push_back(ctx + '\t' + kUnk + '\t' +
                                fmt_double(addk_log2(m, ctx, kUnk)));
            }
        }
    } else {
        for (const auto& t : vocab_)
            lines.push_back(std::string() + '\t' + t + '\t' +
                            fmt_double(std::log2(kn_base(t))));
        lines.push_back(std::string() + '\t' + kUnk + '\t' +
                        fmt_double(std::log2(kn_base(kUnk))));
        for (size_t m = 1; m < eff_.size(); ++m) {
            for (const auto& [ctx, cc] : eff_[m]) {
                if (cc.total == 0) continue;
                double lam = kDiscount * static_cast<double>(cc.by_token.size()) /
                             static_cast<double>(cc.total);
                for (const auto& [tok, c] : cc.by_token) {
                    (void)c;
                    lines.push_back(ctx + '\t' + tok + '\t' +
                                    fmt_double(std::log2(kn_prob(m, ctx, tok))));
                }
                lines.push_back(ctx + '\t' + kBackoff + '\t' +
                                fmt_double(std::log2(lam)));
            }
        }
    }

    out << "rows " << lines.size() << '\n';
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw data_error("failed while writing scorer file: " + path);
}

} // namespace

UniformScorer::UniformScorer(size_t vocab_size) : vocab_size_(vocab_size) {
    if (vocab_size == 0) throw config_error("uniform scorer needs a nonzero vocabulary");
}

UniformScorer::UniformScorer(std::vector<std::string> vocab)
    : vocab_size_(vocab.size() + 1), vocab_(std::move(vocab)) {
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    vocab_size_ = vocab_.size() + 1;
}

double UniformScorer::log2_prob(const std::vector<std::string>&,
                                const std::string&) const {
    return -std::log2(static_cast<double>(vocab_size_));
}

void UniformScorer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write scorer file: " + path);
    write_header(out, 1, "uniform", 0.0, vocab_size_, vocab_);
    out << "rows 0\n";
    if (!out) throw data_error("failed while writing scorer file: " + path);
}

std::string to_string(Smoothing s) {
    return s == Smoothing::add_k ? "add_k" : "kneser_ney";
}

Smoothing smoothing_from_string(const std::string& s) {
    if (s == "add_k") return Smoothing::add_k;
    if (s == "kneser_ney") return Smoothing::kneser_ney;
    throw config_error("unknown smoothing: \"" + s + "\" (expected add_k or kneser_ney)");
}

std::unique_ptr<TokenScorer> train_ngram_scorer(const Dataset& corpus,
                                                const ScorerConfig& cfg) {
    if (corpus.empty()) throw data_error("cannot train a scorer on an empty corpus");
    if (cfg.n < 1) throw config_error("scorer order must be at least 1");
    if (cfg.n > 5) throw config_error("scorer order above 5 is not supported");
    if (cfg.smoothing == Smoothing::add_k && cfg.k <= 0)
        throw config_error("add_k smoothing needs k > 0");
    if (cfg.smoothing == Smoothing::kneser_ney && cfg.n < 2)
        throw config_error("kneser_ney smoothing needs order 2 or higher");
    return std::make_unique<NGramScorer>(corpus, cfg);
}

std::unique_ptr<TokenScorer> load_scorer(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open scorer file: " + path);

    auto fail = [&](const std::string& what) -> Error {
        return data_error(path + ": " + what);
    };

    std::string line;
    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) throw fail("truncated scorer file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line() != "euds-scorer 1") throw fail("not a scorer file");
    auto read_kv = [&](const char* key) -> std::string {
        std::string l = next_line();
        std::string prefix = std::string(key) + " ";
        if (l.rfind(prefix, 0) != 0) throw fail("expected \"" + std::string(key) + "\" line");
        return l.substr(prefix.size());
    };

    int n;
    std::string smoothing_name;
    double k;
    size_t vocab_size, vocab_count, row_count;
    std::vector<std::string> vocab;
    std::map<std::string, std::map<std::string, double>> rows;
    try {
        n = std::stoi(read_kv("n"));
        smoothing_name = read_kv("smoothing");
        k = std::stod(read_kv("k"));
        vocab_size = std::stoul(read_kv("vocab_size"));
        vocab_count = std::stoul(read_kv("vocab_count"));
        vocab.reserve(vocab_count);
        for (size_t i = 0; i < vocab_count; ++i) vocab.push_back(next_line());
        if (!std::is_sorted(vocab.begin(), vocab.end()))
            throw fail("vocabulary section is not sorted");

        row_count = std::stoul(read_kv("rows"));
        for (size_t i = 0; i < row_count; ++i) {
            std::string l = next_line();
            auto t1 = l.find('\t');
            auto t2 = l.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
            if (t1 == std::string::npos || t2 == std::string::npos)
                throw fail("malformed row: \"" + l + "\"");
            std::string ctx = l.substr(0, t1);
            std::string tok = l.substr(t1 + 1, t2 - t1 - 1);
            double lp = std::stod(l.substr(t2 + 1));
            rows[ctx][tok] = lp;
        }
    } catch (const std::invalid_argument&) {
        throw fail("malformed number");
    } catch (const std::out_of_range&) {
        throw fail("number out of range");
    }

    if (smoothing_name == "uniform") {
        if (!vocab.empty()) return std::make_unique<UniformScorer>(std::move(vocab));
        return std::make_unique<UniformScorer>(vocab_size);
    }
    Smoothing sm = smoothing_from_string(smoothing_name);
    if (n < 1 || n > 5) throw fail("scorer order out of range");
    return std::make_unique<LoadedScorer>(n, sm, k, vocab_size, std::move(vocab),
                                          std::move(rows));
}

double generative_entropy(const std::vector<std::string>& tokens,
                          const TokenScorer& scorer) {
    if (tokens.empty()) throw data_error("cannot score an empty token sequence");
    double sum = 0.0;
    std::vector<std::string> context;
    context.reserve(tokens.size());
    for (const auto& tok : tokens) {
        sum += scorer.log2_prob(context, tok);
        context.push_back(tok);
    }
    return -sum / static_cast<double>(tokens.size());
}

double ge_from_logprobs(const std::vector<double>& logprobs) {
    if (logprobs.empty()) throw data_error("cannot score an empty log-probability list");
    double sum = 0.0;
    for (double lp : logprobs) sum += lp;
    return -sum / static_cast<double>(logprobs.size());
}

} // namespace euds
