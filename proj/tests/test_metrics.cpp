#include <algorithm>

#include "doctest.h"
#include "neundiff/metrics.hpp"
#include "neundiff/rng.hpp"
#include "oracles.hpp"

using namespace neundiff;

namespace {

PointSet make_set(std::vector<Point> pts, std::string label = "s") {
    PointSet ps;
    ps.points = std::move(pts);
    ps.source_label = std::move(label);
    return ps;
}

PointSet random_set(SplitMix64& rng, int max_n, int coord_range) {
    PointSet ps;
    const int n = static_cast<int>(rng.uniform_int(max_n + 1));
    for (int i = 0; i < n; ++i) {
        Point p{static_cast<int>(rng.uniform_int(coord_range)),
                static_cast<int>(rng.uniform_int(coord_range))};
        if (std::find(ps.points.begin(), ps.points.end(), p) == ps.points.end())
            ps.points.push_back(p);
    }
    return ps;
}

} // namespace

TEST_CASE("match_points worked examples") {
    SUBCASE("identical sets match at distance 0") {
        const PointSet a = make_set({{1, 2}, {5, 5}, {9, 0}});
        const Matching m = match_points(a, a, 3.0);
        REQUIRE(m.pairs.size() == 3);
        for (const MatchPair& p : m.pairs) CHECK(p.distance == 0.0);
        CHECK(m.unmatched_a.empty());
        CHECK(m.unmatched_b.empty());
    }
    SUBCASE("radius cap excludes") {
        const Matching m = match_points(make_set({{0, 0}}), make_set({{5, 0}}), 4.0);
        CHECK(m.pairs.empty());
        CHECK(m.unmatched_a == std::vector<int>{0});
        CHECK(m.unmatched_b == std::vector<int>{0});
    }
    SUBCASE("greedy picks the two distance-1 pairs") {
        const PointSet a = make_set({{0, 0}, {10, 0}});
        const PointSet b = make_set({{1, 0}, {9, 0}});
        const Matching m = match_points(a, b, 3.0);
        REQUIRE(m.pairs.size() == 2);
        for (const MatchPair& p : m.pairs) CHECK(p.distance == 1.0);
        CHECK(m.pairs[0].index_a != m.pairs[1].index_a);
    }
    SUBCASE("each point matched at most once") {
        const PointSet a = make_set({{0, 0}, {2, 0}});
        const PointSet b = make_set({{1, 0}});
        const Matching m = match_points(a, b, 5.0);
        REQUIRE(m.pairs.size() == 1);
        CHECK(m.unmatched_a.size() == 1);
    }
    CHECK_THROWS_AS(match_points(make_set({}), make_set({}), 0.0), ValidationError);
}

TEST_CASE("matching is independent of input point order") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        PointSet a = random_set(rng, 15, 12);
        PointSet b = random_set(rng, 15, 12);
        const Matching m1 = match_points(a, b, 3.0);

        PointSet ar = a, br = b;
        std::reverse(ar.points.begin(), ar.points.end());
        std::reverse(br.points.begin(), br.points.end());
        const Matching m2 = match_points(ar, br, 3.0);

        REQUIRE(m1.pairs.size() == m2.pairs.size());
        // compare as coordinate pairs, independent of index space
        auto coords = [](const Matching& m, const PointSet& pa, const PointSet& pb) {
            std::vector<std::pair<Point, Point>> c;
            for (const MatchPair& p : m.pairs) c.push_back({pa.points[p.index_a], pb.points[p.index_b]});
            std::sort(c.begin(), c.end());
            return c;
        };
        CHECK(coords(m1, a, b) == coords(m2, ar, br));
    }
}

TEST_CASE("pairwise_agreement values and symmetry") {
    SUBCASE("identical nonempty sets -> 1") {
        const PointSet a = make_set({{3, 3}, {8, 1}});
        CHECK(pairwise_agreement(a, a, 2.0) == 1.0);
    }
    SUBCASE("disjoint sets -> 0") {
        CHECK(pairwise_agreement(make_set({{0, 0}}), make_set({{50, 50}}), 3.0) == 0.0);
    }
    SUBCASE("4 vs 4 with 3 matched -> 0.6") {
        const PointSet a = make_set({{0, 0}, {10, 0}, {20, 0}, {30, 0}});
        const PointSet b = make_set({{1, 0}, {11, 0}, {21, 0}, {90, 90}});
        CHECK(pairwise_agreement(a, b, 3.0) == 0.6);
    }
    SUBCASE("both empty -> 1") {
        CHECK(pairwise_agreement(make_set({}), make_set({}), 3.0) == 1.0);
    }
    SUBCASE("symmetry under swap on random sets") {
        SplitMix64 rng(99);
        for (int trial = 0; trial < 200; ++trial) {
            const PointSet a = random_set(rng, 20, 10); // dense: plenty of distance ties
            const PointSet b = random_set(rng, 20, 10);
            CHECK(pairwise_agreement(a, b, 4.0) == pairwise_agreement(b, a, 4.0));
        }
    }
}

TEST_CASE("radius below 1 reduces to exact-set Jaccard") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const PointSet a = random_set(rng, 20, 16);
        const PointSet b = random_set(rng, 20, 16);
        CHECK(pairwise_agreement(a, b, 0.5) == oracles::exact_set_jaccard(a, b));
    }
}

TEST_CASE("delta_ratio") {
    const PointSet e = make_set({{0, 0}, {10, 10}, {20, 5}});
    SUBCASE("identical experts and method -> 1") {
        CHECK(delta_ratio({e, e, e}, e, 3.0) == 1.0);
    }
    SUBCASE("equal averages -> 1") {
        // experts pairwise delta = method delta to each expert
        const PointSet a = make_set({{0, 0}, {10, 0}, {20, 0}, {30, 0}, {40, 0}});
        const PointSet b = make_set({{0, 0}, {10, 0}, {20, 0}, {30, 0}, {41, 5}});
        const PointSet c = make_set({{0, 0}, {10, 0}, {20, 0}, {30, 0}, {42, 10}});
        const PointSet m = make_set({{0, 0}, {10, 0}, {20, 0}, {30, 0}, {43, 15}});
        const double dab = pairwise_agreement(a, b, 2.0);
        REQUIRE(pairwise_agreement(a, c, 2.0) == dab);
        REQUIRE(pairwise_agreement(b, c, 2.0) == dab);
        REQUIRE(pairwise_agreement(a, m, 2.0) == dab);
        CHECK(delta_ratio({a, b, c}, m, 2.0) == 1.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(delta_ratio({e}, e, 3.0), ValidationError);
        const PointSet far = make_set({{500, 500}});
        CHECK_THROWS_AS(delta_ratio({e, e}, far, 3.0), ValidationError);
    }
}

TEST_CASE("overlap_breakdown") {
    SUBCASE("three identical sets -> all by three") {
        const PointSet e = make_set({{0, 0}, {30, 30}});
        const auto frac = overlap_breakdown({e, e, e}, 3.0);
        CHECK(frac.at(3) == 1.0);
        CHECK(frac.at(2) == 0.0);
        CHECK(frac.at(1) == 0.0);
    }
    SUBCASE("two disjoint sets -> all by one") {
        const auto frac = overlap_breakdown({make_set({{0, 0}}), make_set({{90, 90}})}, 3.0);
        CHECK(frac.at(1) == 1.0);
        CHECK(frac.at(2) == 0.0);
    }
    SUBCASE("toy 50/50 split") {
        const Point p1{0, 0}, p2{100, 100};
        const auto frac = overlap_breakdown({make_set({p1, p2}), make_set({p1}), make_set({p1})}, 3.0);
        CHECK(frac.at(3) == 0.5);
        CHECK(frac.at(1) == 0.5);
        CHECK(frac.at(2) == 0.0);
    }
    SUBCASE("fractions sum to one over the union") {
        SplitMix64 rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<PointSet> raters;
            for (int r = 0; r < 3; ++r) raters.push_back(random_set(rng, 15, 30));
            if (raters[0].empty() && raters[1].empty() && raters[2].empty()) continue;
            const auto frac = overlap_breakdown(raters, 3.0);
            double sum = 0.0;
            for (const auto& [k, v] : frac) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("detection_stats") {
    const PointSet truth = make_set({{0, 0}, {10, 0}, {20, 0}});
    SUBCASE("perfect detection") {
        const DetectionStats s = detection_stats(truth, truth, 3.0);
        CHECK(s.tp == 3);
        CHECK(s.sensitivity == 1.0);
        CHECK(s.precision == 1.0);
        CHECK(s.f1 == 1.0);
        CHECK(s.agreement_accuracy == 1.0);
    }
    SUBCASE("empty detected -> sensitivity 0, precision 0 by convention") {
        const DetectionStats s = detection_stats(truth, make_set({}), 3.0);
        CHECK(s.sensitivity == 0.0);
        CHECK(s.precision == 0.0);
        CHECK(s.f1 == 0.0);
    }
    SUBCASE("both empty -> all rates 1") {
        const DetectionStats s = detection_stats(make_set({}), make_set({}), 3.0);
        CHECK(s.sensitivity == 1.0);
        CHECK(s.precision == 1.0);
        CHECK(s.f1 == 1.0);
        CHECK(s.agreement_accuracy == 1.0);
    }
    SUBCASE("9 of 10 plus one spurious") {
        PointSet t, d;
        for (int i = 0; i < 10; ++i) t.points.push_back({10 * i, 0});
        for (int i = 0; i < 9; ++i) d.points.push_back({10 * i, 1});
        d.points.push_back({500, 500});
        const DetectionStats s = detection_stats(t, d, 3.0);
        CHECK(s.tp == 9);
        CHECK(s.fn == 1);
        CHECK(s.fp == 1);
        CHECK(s.sensitivity == 0.9);
        CHECK(s.precision == 0.9);
        CHECK(s.f1 == doctest::Approx(0.9).epsilon(1e-15));
    }
    SUBCASE("f1 equals the harmonic mean recomputed from counts") {
        SplitMix64 rng(55);
        for (int trial = 0; trial < 50; ++trial) {
            const PointSet t = random_set(rng, 15, 20);
            const PointSet d = random_set(rng, 15, 20);
            const DetectionStats s = detection_stats(t, d, 2.0);
            const double prec = (s.tp + s.fp) ? double(s.tp) / double(s.tp + s.fp)
                                              : (t.empty() && d.empty() ? 1.0 : 0.0);
            const double sens = (s.tp + s.fn) ? double(s.tp) / double(s.tp + s.fn) : 1.0;
            const double f1 = (prec + sens) ? 2 * prec * sens / (prec + sens) : 0.0;
            CHECK(s.f1 == doctest::Approx(f1).epsilon(1e-15));
        }
    }
}
