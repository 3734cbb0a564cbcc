#pragma once

#include <map>
#include <vector>

#include "neundiff/raster.hpp"

namespace neundiff {

struct MatchPair {
    int index_a = 0;
    int index_b = 0;
    double distance = 0.0;
};

/// Greedy ascending-distance 1-1 correspondence under a distance cap.
/// Deterministic and independent of input point order: both sets are ranked
/// canonically (by (x,y)) before the greedy pass; ties in distance break by
/// lower canonical A rank, then lower canonical B rank. Reported indices
/// refer to the original input order.
struct Matching {
    std::vector<MatchPair> pairs; // selection order = ascending distance
    double radius = 0.0;
    std::vector<int> unmatched_a; // original indices, ascending
    std::vector<int> unmatched_b;
};

Matching match_points(const PointSet& a, const PointSet& b, double radius);

/// Pairwise agreement delta = |matched| / (|a| + |b| - |matched|);
/// 1.0 when both sets are empty.
double pairwise_agreement(const PointSet& a, const PointSet& b, double radius);

/// Ratio of mean inter-expert agreement to mean expert-method agreement
/// (unordered expert pairs). Throws ValidationError with fewer than 2 experts
/// or when every expert-method agreement is zero.
double delta_ratio(const std::vector<PointSet>& experts, const PointSet& method, double radius);

/// Fraction of union clusters annotated by exactly k raters, k = 1..n.
/// Clusters grow by matching each rater in turn against the consensus set.
std::map<int, double> overlap_breakdown(const std::vector<PointSet>& experts, double radius);

struct DetectionStats {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double sensitivity = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    // tp/(tp+fp+fn); reported instead of an accuracy that would need true
    // negatives, which point annotations do not have
    double agreement_accuracy = 0.0;
};

/// Empty truth and empty detected gives all rates 1.0; a 0/0 rate against a
/// nonempty counterpart is 0.
DetectionStats detection_stats(const PointSet& truth, const PointSet& detected, double radius);

} // namespace neundiff
