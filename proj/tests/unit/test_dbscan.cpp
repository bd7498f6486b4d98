#include <doctest.h>

#include <algorithm>
#include <map>

#include "stormcast/canny.hpp"
#include "stormcast/dbscan.hpp"
#include "stormcast/rng.hpp"

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace stormcast;

namespace {

std::vector<Point2D> random_points(size_t n, uint64_t seed, double extent) {
    std::vector<Point2D> pts(n);
    Rng rng(seed);
    for (auto& p : pts) {
        p.x = rng.next_unit() * extent;
        p.y = rng.next_unit() * extent;
    }
    return pts;
}

// partition equality modulo cluster-id renaming
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, rev;
    for (size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == ClusterLabeling::kNoise) != (b[i] == ClusterLabeling::kNoise)) return false;
        if (a[i] == ClusterLabeling::kNoise) continue;
        auto f = fwd.emplace(a[i], b[i]);
        auto r = rev.emplace(b[i], a[i]);
        if (f.first->second != b[i] || r.first->second != a[i]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("dbscan on an empty set") {
    const auto labeling = dbscan({}, DbscanParams{});
    CHECK(labeling.n_clusters == 0);
    CHECK(count_regions(labeling) == 0);
}

TEST_CASE("dbscan puts min_pts mutually-close points into one cluster") {
    DbscanParams params{.eps = 2.0, .min_pts = 4};
    std::vector<Point2D> pts = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const auto labeling = dbscan(pts, params);
    CHECK(labeling.n_clusters == 1);
    for (int l : labeling.labels) CHECK(l == 0);
}

TEST_CASE("dbscan separates two distant blobs and matches the oracle") {
    std::vector<Point2D> pts;
    Rng rng(5);
    for (int i = 0; i < 20; ++i)
        pts.push_back({rng.next_unit() * 4.0, rng.next_unit() * 4.0});
    for (int i = 0; i < 20; ++i)
        pts.push_back({100.0 + rng.next_unit() * 4.0, 100.0 + rng.next_unit() * 4.0});

    DbscanParams params{.eps = 5.0, .min_pts = 4};
    const auto got = dbscan(pts, params);
    CHECK(got.n_clusters == 2);

    const auto ref = oracle::dbscan_reference(pts, params.eps, params.min_pts);
    CHECK(ref.n_clusters == 2);
    CHECK(same_partition(got.labels, ref.labels));
}

TEST_CASE("dbscan agrees with the brute-force reference on random instances") {
    int trials = 0;
    for (uint64_t seed = 0; seed < 210; ++seed) {
        const size_t n = 1 + seed % 60;
        const double extent = 10.0 + double(seed % 5) * 10.0;
        const auto pts = random_points(n, 900 + seed, extent);
        DbscanParams params{.eps = 2.0 + double(seed % 4), .min_pts = 2 + int(seed % 5)};

        const auto got = dbscan(pts, params);
        const auto ref = oracle::dbscan_reference(pts, params.eps, params.min_pts);

        CHECK(got.n_clusters == ref.n_clusters);

        // the core-point partition must match the reference exactly
        // (modulo cluster renaming); border attachment may legitimately differ
        std::map<int, int> fwd, rev;
        for (size_t i = 0; i < n; ++i) {
            if (!ref.core[i]) continue;
            REQUIRE(got.labels[i] != ClusterLabeling::kNoise);
            auto f = fwd.emplace(ref.labels[i], got.labels[i]);
            auto r = rev.emplace(got.labels[i], ref.labels[i]);
            CHECK(f.first->second == got.labels[i]);
            CHECK(r.first->second == ref.labels[i]);
        }

        // non-core points: noise iff no core neighbor within eps
        for (size_t i = 0; i < n; ++i) {
            if (ref.core[i]) continue;
            bool near_core = false;
            for (size_t j = 0; j < n && !near_core; ++j) {
                if (!ref.core[j]) continue;
                const double dx = pts[i].x - pts[j].x;
                const double dy = pts[i].y - pts[j].y;
                near_core = dx * dx + dy * dy <= params.eps * params.eps;
            }
            CHECK((got.labels[i] != ClusterLabeling::kNoise) == near_core);
        }
        ++trials;
    }
    CHECK(trials >= 200);
}

TEST_CASE("core-point partition is invariant under input permutation") {
    const auto pts = random_points(50, 31, 30.0);
    DbscanParams params{.eps = 4.0, .min_pts = 3};
    const auto base = dbscan(pts, params);
    const auto ref = oracle::dbscan_reference(pts, params.eps, params.min_pts);

    std::vector<size_t> perm(pts.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rng rng(77);
    rng.shuffle(perm);

    std::vector<Point2D> shuffled(pts.size());
    for (size_t i = 0; i < perm.size(); ++i) shuffled[i] = pts[perm[i]];
    const auto moved = dbscan(shuffled, params);

    CHECK(moved.n_clusters == base.n_clusters);
    // compare the partition restricted to core points, mapped through perm
    std::map<int, int> mapping;
    for (size_t i = 0; i < perm.size(); ++i) {
        if (!ref.core[perm[i]]) continue;
        const int a = base.labels[perm[i]];
        const int b = moved.labels[i];
        REQUIRE(a != ClusterLabeling::kNoise);
        REQUIRE(b != ClusterLabeling::kNoise);
        auto it = mapping.emplace(a, b);
        CHECK(it.first->second == b);
    }
}

TEST_CASE("labeling is scale invariant when eps scales along") {
    const auto pts = random_points(40, 8, 25.0);
    DbscanParams params{.eps = 3.0, .min_pts = 3};
    const auto base = dbscan(pts, params);

    const double lambda = 37.5;
    std::vector<Point2D> scaled(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) scaled[i] = {pts[i].x * lambda, pts[i].y * lambda};
    DbscanParams scaled_params{.eps = params.eps * lambda, .min_pts = params.min_pts};
    const auto got = dbscan(scaled, scaled_params);

    CHECK(got.n_clusters == base.n_clusters);
    CHECK(got.labels == base.labels);
}

TEST_CASE("every noise point fails the core test and touches no core") {
    const auto pts = random_points(60, 13, 40.0);
    DbscanParams params{.eps = 3.5, .min_pts = 4};
    const auto got = dbscan(pts, params);
    const auto ref = oracle::dbscan_reference(pts, params.eps, params.min_pts);

    for (size_t i = 0; i < pts.size(); ++i) {
        if (got.labels[i] != ClusterLabeling::kNoise) continue;
        CHECK(!ref.core[i]);
        for (size_t j = 0; j < pts.size(); ++j) {
            if (!ref.core[j]) continue;
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            CHECK(dx * dx + dy * dy > params.eps * params.eps);
        }
    }
}

TEST_CASE("count_regions counts cluster ids, noise excluded") {
    ClusterLabeling l;
    l.labels = {ClusterLabeling::kNoise, ClusterLabeling::kNoise};
    l.n_clusters = 0;
    CHECK(count_regions(l) == 0);

    l.labels = {0, 1, 2, ClusterLabeling::kNoise, 1};
    l.n_clusters = 3;
    CHECK(count_regions(l) == 3);
}

TEST_CASE("three well-separated spot groups cluster into three regions") {
    const auto scene = synth::scene_with_groups(6, 3, 21);
    const auto img = synth::render(scene);
    const auto edges = canny(img, synth::synthetic_canny_params());
    const auto labeling = dbscan(foreground_points(edges), DbscanParams{});
    CHECK(count_regions(labeling) == 3);
}

TEST_CASE("dbscan parameter validation") {
    CHECK_THROWS_AS(dbscan({}, DbscanParams{.eps = 0.0, .min_pts = 1}), std::invalid_argument);
    CHECK_THROWS_AS(dbscan({}, DbscanParams{.eps = 1.0, .min_pts = 0}), std::invalid_argument);
    CHECK_THROWS_AS(dbscan({{1.0 / 0.0, 0.0}}, DbscanParams{}), std::invalid_argument);
}
