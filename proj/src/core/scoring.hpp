#pragma once

#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace euds {

enum class NormalizeMethod { minmax, percentile };

std::string to_string(NormalizeMethod m);
NormalizeMethod normalize_method_from_string(const std::string& s);

/// Maps raw entropies onto [0, 10]. minmax is the linear endpoint map;
/// percentile uses midpoint-rank empirical CDF. All-equal input degenerates
/// to 5.0 everywhere.
std::map<std::string, double> normalize_scores(const std::map<std::string, double>& raws,
                                               NormalizeMethod method);

struct ScoreRecord {
    std::string sample_id;
    EntropyType entropy_type;
    double raw = 0.0;
    double normalized = 0.0;
};

void write_score_table(const std::vector<ScoreRecord>& records,
                       const std::string& path);

/// Half-open interval on the 0-10 scale: [lower, upper), except that a score
/// of 10 belongs to any interval whose upper bound is 10.
struct Interval {
    double lower = 0.0;
    double upper = 10.0;
    std::string label;
};

Interval make_interval(double lower, double upper, std::string label = "");

/// The nine fixed intervals in catalog order.
const std::vector<Interval>& interval_catalog();

bool interval_contains(const Interval& iv, double score);

/// Accepts a catalog label ("3-8") or explicit bounds ("2.5:7.5").
Interval parse_interval(const std::string& text);

/// Splits [0,10] at the i/k empirical quantiles of the scores. Duplicate
/// boundaries collapse, so fewer than k intervals can come back.
std::vector<Interval> quantile_intervals(const std::vector<double>& scores, int k);

} // namespace euds
