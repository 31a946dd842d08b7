#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "entropy.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace euds;

namespace {

// Independent oracle: positional match counting instead of map-based
// frequency tables. H = -(1/m) sum_i log2(c_i / m) where c_i counts the
// positions whose n-gram equals position i's.
double brute_force_ie(const std::vector<std::string>& tokens,
                      const std::array<double, 3>& weights) {
    double total = 0.0;
    for (int n = 1; n <= 3; ++n) {
        if (weights[n - 1] == 0.0) continue;
        if (tokens.size() < static_cast<size_t>(n)) continue;
        size_t m = tokens.size() - n + 1;
        double h = 0.0;
        for (size_t i = 0; i < m; ++i) {
            size_t c = 0;
            for (size_t j = 0; j < m; ++j) {
                bool same = true;
                for (int k = 0; k < n; ++k)
                    if (tokens[i + k] != tokens[j + k]) { same = false; break; }
                c += same;
            }
            h -= std::log2(static_cast<double>(c) / static_cast<double>(m)) /
                 static_cast<double>(m);
        }
        total += weights[n - 1] * h;
    }
    return total;
}

} // namespace

TEST_CASE("ngram_distribution on repeats") {
    ProbDist p = ngram_distribution({"a", "a", "a", "a"}, 1);
    REQUIRE(p.size() == 1);
    CHECK(p.at("a") == 1.0);
}

TEST_CASE("ngram_distribution splits evenly") {
    ProbDist p = ngram_distribution({"a", "b"}, 1);
    CHECK(p.at("a") == 0.5);
    CHECK(p.at("b") == 0.5);
}

TEST_CASE("ngram_distribution counts bigrams") {
    ProbDist p = ngram_distribution({"a", "b", "a"}, 2);
    REQUIRE(p.size() == 2);
    CHECK(p.at("a b") == 0.5);
    CHECK(p.at("b a") == 0.5);
}

TEST_CASE("ngram_distribution is empty for short sequences") {
    CHECK(ngram_distribution({"a"}, 2).empty());
    CHECK(ngram_distribution({}, 1).empty());
}

TEST_CASE("ngram_distribution sums to one") {
    std::mt19937_64 rng = make_rng(404, 1);
    const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> tokens;
        size_t len = 1 + uniform_below(rng, 30);
        for (size_t i = 0; i < len; ++i)
            tokens.push_back(alphabet[uniform_below(rng, alphabet.size())]);
        for (int n = 1; n <= 3; ++n) {
            ProbDist p = ngram_distribution(tokens, n);
            if (p.empty()) continue;
            double sum = 0.0;
            for (const auto& [gram, prob] : p) sum += prob;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("shannon_entropy closed forms") {
    CHECK(shannon_entropy({{"a", 1.0}}) == 0.0);
    CHECK(shannon_entropy({{"a", 0.5}, {"b", 0.5}}) == doctest::Approx(1.0));
    CHECK(shannon_entropy(
              {{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}}) ==
          doctest::Approx(2.0));
}

TEST_CASE("information_entropy of a constant text is exactly zero") {
    CHECK(information_entropy("a a a a") == 0.0);
    IEConfig cfg;
    cfg.weights = {0.2, 0.5, 0.3};
    CHECK(information_entropy("a a a a", cfg) == 0.0);
}

TEST_CASE("information_entropy with unigram-only weights is Shannon entropy") {
    IEConfig cfg;
    cfg.weights = {1.0, 0.0, 0.0};
    CHECK(information_entropy("a b", cfg) == 1.0);
    // Exact equality with the unigram Shannon entropy on a richer text.
    std::vector<std::string> tokens{"x", "y", "y", "z", "x", "x"};
    CHECK(information_entropy_tokens(tokens, cfg) ==
          shannon_entropy(ngram_distribution(tokens, 1)));
}

TEST_CASE("information_entropy matches the hand oracle on a b a b") {
    // H1 = 1 (two symbols, even), H2 = H({a b: 2/3, b a: 1/3}), H3 = 1.
    double h2 = -(2.0 / 3) * std::log2(2.0 / 3) - (1.0 / 3) * std::log2(1.0 / 3);
    double expected = (1.0 + h2 + 1.0) / 3.0;
    CHECK(information_entropy("a b a b") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(information_entropy("a b a b") ==
          doctest::Approx(0.9727652780181632).epsilon(1e-12));
}

TEST_CASE("information_entropy agrees with the brute-force oracle") {
    std::mt19937_64 rng = make_rng(2024, 9);
    const std::vector<std::string> alphabet{"a", "b", "c", "d"};
    IEConfig cfg;
    for (int round = 0; round < 2000; ++round) {
        std::vector<std::string> tokens;
        size_t len = uniform_below(rng, 13);
        for (size_t i = 0; i < len; ++i)
            tokens.push_back(alphabet[uniform_below(rng, alphabet.size())]);
        double got = information_entropy_tokens(tokens, cfg);
        double want = brute_force_ie(tokens, cfg.weights);
        CHECK(std::abs(got - want) < 1e-9);
    }
}

TEST_CASE("information_entropy weight validation") {
    IEConfig cfg;
    cfg.weights = {-0.1, 0.6, 0.5};
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.weights = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("cluster_generations groups identical generations") {
    std::vector<std::string> g(10, "The same sentence.");
    ClusterSet c = cluster_generations(g);
    REQUIRE(c.clusters.size() == 1);
    CHECK(c.clusters[0].second == 10);
    CHECK(c.total == 10);
}

TEST_CASE("cluster_generations uses normalized equality") {
    ClusterSet c = cluster_generations({"Yes.", "yes", "No"});
    REQUIRE(c.clusters.size() == 2);
    std::vector<size_t> sizes;
    for (const auto& [id, size] : c.clusters) sizes.push_back(size);
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<size_t>{1, 2});
}

TEST_CASE("clusters_from_labels takes labels as authoritative") {
    ClusterSet c = clusters_from_labels({0, 0, 1, 1, 1, 2});
    REQUIRE(c.clusters.size() == 3);
    CHECK(c.clusters[0].second == 2);
    CHECK(c.clusters[1].second == 3);
    CHECK(c.clusters[2].second == 1);
    CHECK(c.total == 6);
}

TEST_CASE("semantic_entropy closed forms") {
    CHECK(semantic_entropy(clusters_from_labels({0, 0, 0, 0, 0, 1, 1, 1, 1, 1})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(semantic_entropy(clusters_from_labels({7, 7, 7, 7, 7, 7, 7, 7, 7, 7})) ==
          0.0);
}

TEST_CASE("semantic_entropy matches the direct formula on 4-3-2-1") {
    ClusterSet c = clusters_from_labels({0, 0, 0, 0, 1, 1, 1, 2, 2, 3});
    double expected = 0.0;
    for (double p : {0.4, 0.3, 0.2, 0.1}) expected -= p * std::log2(p);
    CHECK(semantic_entropy(c) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(semantic_entropy(c) ==
          doctest::Approx(1.8464393446710154).epsilon(1e-12));
}

TEST_CASE("semantic_entropy is invariant under generation permutations") {
    std::vector<std::string> g{"a", "b", "a", "c", "b", "a"};
    double reference = semantic_entropy(cluster_generations(g));
    std::mt19937_64 rng = make_rng(5, 5);
    for (int round = 0; round < 50; ++round) {
        det_shuffle(g, rng);
        CHECK(semantic_entropy(cluster_generations(g)) ==
              doctest::Approx(reference).epsilon(1e-12));
    }
}

namespace {

Dataset make_pool(std::initializer_list<const char*> texts) {
    Dataset d;
    d.name = "pool";
    int i = 0;
    for (const char* t : texts) {
        Sample s;
        s.id = "s" + std::to_string(i++);
        s.text = t;
        s.label = "x";
        d.label_set.insert(s.label);
        d.samples.push_back(std::move(s));
    }
    return d;
}

} // namespace

TEST_CASE("score_dataset computes only the requested entries") {
    Dataset d = make_pool({"a b c", "d d d", "e f"});
    auto scores = score_dataset(d, {EntropyType::IE});
    REQUIRE(scores.size() == 3);
    for (const auto& [id, v] : scores) {
        CHECK(v.has(EntropyType::IE));
        CHECK_FALSE(v.has(EntropyType::GE));
        CHECK_FALSE(v.has(EntropyType::SE));
    }
}

TEST_CASE("score_dataset rejects an empty request") {
    Dataset d = make_pool({"a b"});
    CHECK_THROWS_AS(score_dataset(d, {}), Error);
}

TEST_CASE("score_dataset names the sample missing generations") {
    Dataset d = make_pool({"a b", "c d"});
    d.samples[0].generations = std::vector<std::string>{"g", "g"};
    CHECK_THROWS_WITH_AS(score_dataset(d, {EntropyType::SE}),
                         doctest::Contains("s1"), Error);
}

TEST_CASE("score_dataset SE prefers equivalence labels over generations") {
    Dataset d = make_pool({"a b"});
    d.samples[0].generations = std::vector<std::string>{"x", "y", "z", "w"};
    d.samples[0].equivalence_labels = std::vector<int64_t>{0, 0, 1, 1};
    auto scores = score_dataset(d, {EntropyType::SE});
    CHECK(scores.at("s0").get(EntropyType::SE) == doctest::Approx(1.0));
}

TEST_CASE("score_dataset GE uses sidecar logprobs verbatim") {
    Dataset d = make_pool({"a b"});
    d.samples[0].logprobs = std::vector<double>{-1.0, -3.0};
    auto scores = score_dataset(d, {EntropyType::GE});
    CHECK(scores.at("s0").get(EntropyType::GE) == doctest::Approx(2.0));
}

TEST_CASE("score_dataset names the sample with mismatched sidecar length") {
    Dataset d = make_pool({"a b", "c d e"});
    d.samples[0].logprobs = std::vector<double>{-1.0, -3.0};
    d.samples[1].logprobs = std::vector<double>{-1.0};
    CHECK_THROWS_WITH_AS(score_dataset(d, {EntropyType::GE}),
                         doctest::Contains("s1"), Error);
}

TEST_CASE("score_dataset trains the pool model when sidecars are missing") {
    Dataset d = make_pool({"a b a", "b a b", "a a a"});
    auto scores = score_dataset(d, {EntropyType::GE});
    for (const auto& [id, v] : scores) {
        double ge = v.get(EntropyType::GE);
        CHECK(std::isfinite(ge));
        CHECK(ge >= 0.0);
    }
}

TEST_CASE("score_dataset computes complete vectors on a 2000-sample pool") {
    Dataset d;
    d.name = "big";
    std::mt19937_64 rng = make_rng(606, 2);
    const std::vector<std::string> words{"red",  "blue", "green", "cold",
                                         "warm", "wet",  "dry",   "old"};
    for (int i = 0; i < 2000; ++i) {
        Sample s;
        s.id = "b" + std::to_string(i);
        std::string text;
        for (int t = 0; t < 8; ++t) {
            if (t) text += ' ';
            text += words[uniform_below(rng, words.size())];
        }
        s.text = text;
        s.label = i % 2 ? "x" : "y";
        s.generations = std::vector<std::string>{
            words[uniform_below(rng, words.size())],
            words[uniform_below(rng, words.size())],
            words[uniform_below(rng, words.size())]};
        d.label_set.insert(s.label);
        d.samples.push_back(std::move(s));
    }
    auto scores =
        score_dataset(d, {EntropyType::IE, EntropyType::GE, EntropyType::SE});
    REQUIRE(scores.size() == 2000);
    for (const auto& [id, v] : scores) {
        for (EntropyType t :
             {EntropyType::IE, EntropyType::GE, EntropyType::SE}) {
            REQUIRE(v.has(t));
            CHECK(std::isfinite(v.get(t)));
            CHECK(v.get(t) >= 0.0);
        }
    }
}

TEST_CASE("EntropyVector rejects access to absent entries") {
    EntropyVector v;
    v.ie = 1.0;
    CHECK(v.get(EntropyType::IE) == 1.0);
    CHECK_THROWS_AS(v.get(EntropyType::GE), Error);
}
