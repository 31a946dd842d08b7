#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "errors.hpp"

namespace euds {

std::string to_string(NormalizeMethod m) {
    return m == NormalizeMethod::minmax ? "minmax" : "percentile";
}

NormalizeMethod normalize_method_from_string(const std::string& s) {
    if (s == "minmax") return NormalizeMethod::minmax;
    if (s == "percentile") return NormalizeMethod::percentile;
    throw config_error("unknown normalization method: \"" + s +
                       "\" (expected minmax or percentile)");
}

std::map<std::string, double> normalize_scores(const std::map<std::string, double>& raws,
                                               NormalizeMethod method) {
    if (raws.empty()) throw data_error("cannot normalize an empty score map");
    for (const auto& [id, v] : raws)
        if (!std::isfinite(v))
            throw data_error("non-finite raw score for sample \"" + id + "\"");

    std::map<std::string, double> out;
    if (method == NormalizeMethod::minmax) {
        double lo = raws.begin()->second, hi = lo;
        for (const auto& [id, v] : raws) {
            (void)id;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) {
            for (const auto& [id, v] : raws) {
                (void)v;
                out[id] = 5.0;
            }
            return out;
        }
        double span = hi - lo;
        // Divide before scaling so the extremes land on exactly 0 and 10.
        for (const auto& [id, v] : raws) out[id] = (v - lo) / span * 10.0;
        return out;
    }

    std::vector<double> sorted;
    sorted.reserve(raws.size());
    for (const auto& [id, v] : raws) {
        (void)id;
        sorted.push_back(v);
    }
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    for (const auto& [id, v] : raws) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
        double less = static_cast<double>(lo - sorted.begin());
        double equal = static_cast<double>(hi - lo);
        out[id] = 10.0 * (less + 0.5 * equal) / n;
    }
    return out;
}

namespace {

std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string fmt_bound(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

void write_score_table(const std::vector<ScoreRecord>& records,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write score table: " + path);
    out << "sample_id, entropy_type, raw_bits, normalized\n";
    for (const auto& r : records)
        out << r.sample_id << ", " << to_string(r.entropy_type) << ", "
            << fmt_fixed(r.raw, 6) << ", " << fmt_fixed(r.normalized, 6) << '\n';
    if (!out) throw data_error("failed while writing score table: " + path);
}

Interval make_interval(double lower, double upper, std::string label) {
    if (!(lower >= 0.0 && lower < upper && upper <= 10.0))
        throw config_error("invalid interval bounds: " + fmt_bound(lower) + ".." +
                           fmt_bound(upper) + " (need 0 <= lower < upper <= 10)");
    Interval iv;
    iv.lower = lower;
    iv.upper = upper;
    iv.label = label.empty() ? fmt_bound(lower) + "-" + fmt_bound(upper)
                             : std::move(label);
    return iv;
}

const std::vector<Interval>& interval_catalog() {
    static const std::vector<Interval> catalog = {
        make_interval(0, 3, "0-3"),  make_interval(3, 5, "3-5"),
        make_interval(0, 5, "0-5"),  make_interval(0, 8, "0-8"),
        make_interval(3, 10, "3-10"), make_interval(3, 8, "3-8"),
        make_interval(5, 8, "5-8"),  make_interval(8, 10, "8-10"),
        make_interval(5, 10, "5-10"),
    };
    return catalog;
}

bool interval_contains(const Interval& iv, double score) {
    if (score >= iv.lower && score < iv.upper) return true;
    return iv.upper == 10.0 && score == 10.0;
}

Interval parse_interval(const std::string& text) {
    for (const auto& iv : interval_catalog())
        if (iv.label == text) return iv;

    auto sep = text.find(':');
    if (sep == std::string::npos) sep = text.find('-');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
        throw config_error("cannot parse interval \"" + text +
                           "\" (expected a catalog label or lo:hi)");
    try {
        size_t used_lo = 0, used_hi = 0;
        double lo = std::stod(text.substr(0, sep), &used_lo);
        std::string hi_part = text.substr(sep + 1);
        double hi = std::stod(hi_part, &used_hi);
        if (used_lo != sep || used_hi != hi_part.size())
            throw config_error("cannot parse interval \"" + text + "\"");
        return make_interval(lo, hi);
    } catch (const std::invalid_argument&) {
        throw config_error("cannot parse interval \"" + text + "\"");
    } catch (const std::out_of_range&) {
        throw config_error("cannot parse interval \"" + text + "\"");
    }
}

std::vector<Interval> quantile_intervals(const std::vector<double>& scores, int k) {
    if (k < 2) throw config_error("quantile partitioning needs k >= 2");
    if (static_cast<size_t>(k) > scores.size())
        throw config_error("quantile partitioning needs at least k scores (k = " +
                           std::to_string(k) + ", scores = " +
                           std::to_string(scores.size()) + ")");

    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();

    // q(p): midpoint of the two straddling order statistics when p*n lands on
    // an index boundary, otherwise the element containing p*n.
    auto quantile = [&](int i) {
        double pos = static_cast<double>(i) * static_cast<double>(n) /
                     static_cast<double>(k);
        double floor_pos = std::floor(pos);
        if (pos == floor_pos) {
            size_t idx = static_cast<size_t>(pos);
            return (sorted[idx - 1] + sorted[idx]) / 2.0;
        }
        return sorted[static_cast<size_t>(floor_pos)];
    };

    std::vector<double> bounds;
    bounds.push_back(0.0);
    for (int i = 1; i < k; ++i)
        bounds.push_back(std::clamp(quantile(i), 0.0, 10.0));
    bounds.push_back(10.0);

    std::vector<Interval> out;
    double prev = bounds.front();
    for (size_t i = 1; i < bounds.size(); ++i) {
        if (bounds[i] > prev) {
            out.push_back(make_interval(prev, bounds[i]));
            prev = bounds[i];
        }
    }
    if (out.size() < 2)
        throw data_error("scores are too concentrated for a quantile partition");
    return out;
}

} // namespace euds
