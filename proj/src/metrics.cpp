#include "neundiff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace neundiff {

namespace {

struct Candidate {
    int64_t d2; // exact squared distance (integer coordinates)
    int rank_a; // canonical rank, the deterministic tie-break
    int rank_b;

    bool operator<(const Candidate& o) const {
        if (d2 != o.d2) return d2 < o.d2;
        if (rank_a != o.rank_a) return rank_a < o.rank_a;
        return rank_b < o.rank_b;
    }
};

// Original indices sorted by coordinates; makes the greedy pass independent
// of input point order.
std::vector<int> canonical_order(const PointSet& s) {
    std::vector<int> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return s.points[i] < s.points[j];
    });
    return order;
}

int64_t sq_dist(const Point& p, const Point& q) {
    const int64_t dx = p.x - q.x;
    const int64_t dy = p.y - q.y;
    return dx * dx + dy * dy;
}

} // namespace

Matching match_points(const PointSet& a, const PointSet& b, double radius) {
    if (!(radius > 0.0)) throw ValidationError("matching radius must be positive");

    Matching m;
    m.radius = radius;

    const std::vector<int> order_a = canonical_order(a);
    const std::vector<int> order_b = canonical_order(b);
    const double r2 = radius * radius;

    // bucket B by radius-sized grid cells so candidate enumeration is local
    const int64_t cell = std::max<int64_t>(1, static_cast<int64_t>(std::floor(radius)));
    std::unordered_map<int64_t, std::vector<int>> grid; // cell key -> canonical ranks in b
    auto key_of = [cell](int64_t cx, int64_t cy) { return cx * 0x100000000ll + cy; };
    for (size_t rb = 0; rb < order_b.size(); ++rb) {
        const Point& p = b.points[order_b[rb]];
        grid[key_of(p.x / cell, p.y / cell)].push_back(static_cast<int>(rb));
    }

    std::vector<Candidate> cands;
    for (size_t ra = 0; ra < order_a.size(); ++ra) {
        const Point& p = a.points[order_a[ra]];
        const int64_t cx = p.x / cell;
        const int64_t cy = p.y / cell;
        const int64_t reach = static_cast<int64_t>(std::ceil(radius / static_cast<double>(cell)));
        for (int64_t gx = cx - reach; gx <= cx + reach; ++gx) {
            for (int64_t gy = cy - reach; gy <= cy + reach; ++gy) {
                auto it = grid.find(key_of(gx, gy));
                if (it == grid.end()) continue;
                for (int rb : it->second) {
                    const int64_t d2 = sq_dist(p, b.points[order_b[rb]]);
                    if (static_cast<double>(d2) <= r2)
                        cands.push_back({d2, static_cast<int>(ra), rb});
                }
            }
        }
    }
    std::sort(cands.begin(), cands.end());

    std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
    for (const Candidate& c : cands) {
        if (used_a[c.rank_a] || used_b[c.rank_b]) continue;
        used_a[c.rank_a] = 1;
        used_b[c.rank_b] = 1;
        m.pairs.push_back({order_a[c.rank_a], order_b[c.rank_b],
                           std::sqrt(static_cast<double>(c.d2))});
    }
    for (size_t ra = 0; ra < used_a.size(); ++ra)
        if (!used_a[ra]) m.unmatched_a.push_back(order_a[ra]);
    for (size_t rb = 0; rb < used_b.size(); ++rb)
        if (!used_b[rb]) m.unmatched_b.push_back(order_b[rb]);
    std::sort(m.unmatched_a.begin(), m.unmatched_a.end());
    std::sort(m.unmatched_b.begin(), m.unmatched_b.end());
    return m;
}

double pairwise_agreement(const PointSet& a, const PointSet& b, double radius) {
    if (a.empty() && b.empty()) return 1.0;
    const double matched = static_cast<double>(match_points(a, b, radius).pairs.size());
    return matched / (static_cast<double>(a.size()) + static_cast<double>(b.size()) - matched);
}

double delta_ratio(const std::vector<PointSet>& experts, const PointSet& method, double radius) {
    if (experts.size() < 2) throw ValidationError("delta_ratio needs at least 2 expert sets");
    double expert_sum = 0.0;
    long expert_pairs = 0;
    for (size_t i = 0; i < experts.size(); ++i) {
        for (size_t j = i + 1; j < experts.size(); ++j) {
            expert_sum += pairwise_agreement(experts[i], experts[j], radius);
            ++expert_pairs;
        }
    }
    double method_sum = 0.0;
    for (const PointSet& e : experts) method_sum += pairwise_agreement(e, method, radius);

    const double numerator = expert_sum / static_cast<double>(expert_pairs);
    const double denominator = method_sum / static_cast<double>(experts.size());
    if (denominator == 0.0)
        throw ValidationError("degenerate input: method agrees with no expert");
    return numerator / denominator;
}

std::map<int, double> overlap_breakdown(const std::vector<PointSet>& experts, double radius) {
    if (experts.size() < 2) throw ValidationError("overlap_breakdown needs at least 2 expert sets");

    struct Cluster {
        Point rep;
        std::vector<char> raters;
    };
    std::vector<Cluster> clusters;
    PointSet consensus;
    consensus.source_label = "consensus";

    for (size_t r = 0; r < experts.size(); ++r) {
        const Matching m = match_points(experts[r], consensus, radius);
        for (const MatchPair& p : m.pairs) clusters[p.index_b].raters[r] = 1;
        for (int ia : m.unmatched_a) {
            Cluster c;
            c.rep = experts[r].points[ia];
            c.raters.assign(experts.size(), 0);
            c.raters[r] = 1;
            clusters.push_back(c);
            consensus.points.push_back(c.rep);
        }
    }

    std::map<int, double> frac;
    for (size_t k = 1; k <= experts.size(); ++k) frac[static_cast<int>(k)] = 0.0;
    if (clusters.empty()) return frac;
    for (const Cluster& c : clusters) {
        const int k = static_cast<int>(std::count(c.raters.begin(), c.raters.end(), 1));
        frac[k] += 1.0;
    }
    for (auto& [k, v] : frac) v /= static_cast<double>(clusters.size());
    return frac;
}

DetectionStats detection_stats(const PointSet& truth, const PointSet& detected, double radius) {
    if (!(radius > 0.0)) throw ValidationError("matching radius must be positive");
    DetectionStats s;
    const long tp = truth.empty() || detected.empty()
                        ? 0
                        : static_cast<long>(match_points(truth, detected, radius).pairs.size());
    s.tp = tp;
    s.fn = static_cast<long>(truth.size()) - tp;
    s.fp = static_cast<long>(detected.size()) - tp;
    s.sensitivity = (s.tp + s.fn) == 0 ? 1.0 : static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
    s.precision = (s.tp + s.fp) == 0 ? ((s.tp + s.fn) == 0 ? 1.0 : 0.0)
                                     : static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    s.f1 = (s.precision + s.sensitivity) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.sensitivity / (s.precision + s.sensitivity);
    s.agreement_accuracy = (s.tp + s.fp + s.fn) == 0
                               ? 1.0
                               : static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp + s.fn);
    return s;
}

} // namespace neundiff
