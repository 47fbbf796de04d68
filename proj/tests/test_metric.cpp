#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "critwin/metric_space.hpp"
#include "doctest.h"

using namespace critwin;

namespace {

MeasuredMetricSpace two_points(double d, double m0, double m1) {
    MeasuredMetricSpace s(2);
    s.d(0, 1) = d;
    s.d(1, 0) = d;
    s.mass = {m0, m1};
    return s;
}

MeasuredMetricSpace one_point(double m) {
    MeasuredMetricSpace s(1);
    s.mass = {m};
    return s;
}

// metric from points on a line: always a valid metric space
MeasuredMetricSpace line_space(const std::vector<double>& pos,
                               const std::vector<double>& masses) {
    MeasuredMetricSpace s((int)pos.size());
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) s.d(i, j) = std::abs(pos[i] - pos[j]);
    s.mass = masses;
    return s;
}

MeasuredMetricSpace random_line_space(int n, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> pos(n), mass(n);
    for (auto& p : pos) p = unif(rng);
    for (auto& m : mass) m = 0.2 + unif(rng);
    return line_space(pos, mass);
}

}  // namespace

TEST_CASE("space accessors and validation") {
    auto s = two_points(3.0, 1.0, 2.0);
    CHECK(s.total_mass() == doctest::Approx(3.0));
    CHECK(s.diameter() == doctest::Approx(3.0));
    CHECK(s.mean_distance() == doctest::Approx(2.0 * 1.0 * 2.0 * 3.0 / 9.0));
    s.check();

    auto bad = s;
    bad.d(0, 1) = 5.0;  // asymmetric
    CHECK_THROWS(bad.check());
    bad = s;
    bad.mass[0] = -1.0;
    CHECK_THROWS(bad.check());
    MeasuredMetricSpace tri(3);
    tri.mass = {1, 1, 1};
    tri.d(0, 1) = tri.d(1, 0) = 1.0;
    tri.d(1, 2) = tri.d(2, 1) = 1.0;
    tri.d(0, 2) = tri.d(2, 0) = 5.0;  // violates the triangle inequality
    CHECK_THROWS(tri.check());
}

TEST_CASE("json round trip") {
    auto s = line_space({0.0, 0.4, 1.0}, {0.5, 0.2, 0.3});
    auto back = MeasuredMetricSpace::from_json(s.to_json());
    REQUIRE(back.n == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.mass[i] == doctest::Approx(s.mass[i]));
        for (int j = 0; j < 3; ++j) CHECK(back.d(i, j) == doctest::Approx(s.d(i, j)));
    }
    CHECK(s.to_json().find("schema_version") != std::string::npos);
    CHECK_THROWS(MeasuredMetricSpace::from_json("{\"points\":3,\"dist\":[1],\"mass\":[1,1,1]}"));
}

TEST_CASE("scaling operator") {
    auto s = two_points(3.0, 1.0, 2.0);
    auto t = scl(2.0, 0.5, s);
    CHECK(t.d(0, 1) == doctest::Approx(6.0));
    CHECK(t.mass[0] == doctest::Approx(0.5));
    CHECK(t.mass[1] == doctest::Approx(1.0));
    auto u = scl(3.0, 2.0, t);  // composition multiplies the factors
    auto v = scl(6.0, 1.0, s);
    CHECK(u.d(0, 1) == doctest::Approx(v.d(0, 1)));
    CHECK(u.mass[0] == doctest::Approx(s.mass[0]));
    CHECK_THROWS(scl(0.0, 1.0, s));
    CHECK_THROWS(scl(1.0, -2.0, s));
}

TEST_CASE("correspondence distortion") {
    auto a = two_points(1.0, 1.0, 1.0);
    auto b = two_points(3.0, 1.0, 1.0);
    CHECK(distortion({{0, 0}, {1, 1}}, a, a) == doctest::Approx(0.0));
    CHECK(distortion({{0, 0}, {1, 1}}, a, b) == doctest::Approx(2.0));
    CHECK_THROWS(distortion({}, a, b));
    CHECK_THROWS(distortion({{0, 0}}, a, b));  // does not cover either side
}

TEST_CASE("exact distance on hand-checked instances") {
    // identical spaces
    auto a = line_space({0.0, 0.3, 0.9}, {0.2, 0.5, 0.3});
    CHECK(ghp_exact(a, a) == doctest::Approx(0.0).epsilon(1e-12));

    // pure mass difference: half the total-mass gap
    CHECK(ghp_exact(one_point(1.0), one_point(2.0)) == doctest::Approx(0.5));

    // one point against a two-point space of diameter 1: half the distortion
    CHECK(ghp_exact(one_point(1.0), two_points(1.0, 0.5, 0.5)) == doctest::Approx(0.5));

    // pure geometry difference with equal masses: half the diameter gap
    auto b1 = two_points(1.0, 0.5, 0.5);
    auto b2 = two_points(2.0, 0.5, 0.5);
    CHECK(ghp_exact(b1, b2) == doctest::Approx(0.5));

    Rng r1 = make_rng(1), r2 = make_rng(2);
    CHECK_THROWS(ghp_exact(random_line_space(7, r1), random_line_space(6, r2)));
}

TEST_CASE("exact distance is a pseudometric on random instances") {
    Rng rng = make_rng(401);
    for (int rep = 0; rep < 30; ++rep) {
        auto a = random_line_space(3, rng);
        auto b = random_line_space(3, rng);
        auto c = random_line_space(3, rng);
        double ab = ghp_exact(a, b), ba = ghp_exact(b, a);
        double bc = ghp_exact(b, c), ac = ghp_exact(a, c);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        CHECK(ab >= 0);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("bounds bracket the exact value") {
    Rng rng = make_rng(409);
    for (int rep = 0; rep < 100; ++rep) {
        auto a = random_line_space(3 + rep % 3, rng);
        auto b = random_line_space(3 + (rep / 3) % 3, rng);
        double exact = ghp_exact(a, b);
        auto [lo, hi] = ghp_bounds(a, b);
        CHECK(lo <= exact + 1e-9);
        CHECK(exact <= hi + 1e-9);
        CHECK(lo <= hi);
    }
}

TEST_CASE("bounds collapse on identical spaces") {
    Rng rng = make_rng(419);
    auto a = random_line_space(12, rng);  // beyond the exact-mode cap
    auto [lo, hi] = ghp_bounds(a, a);
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("blob expansion of two single-point blobs") {
    BlobConfig cfg;
    cfg.superstructure = Graph(2);
    cfg.superstructure.add_edge(0, 1);
    cfg.x = {2.0, 3.0};
    cfg.blobs = {one_point(1.0), one_point(1.0)};
    cfg.junctions = {{0, 0}};
    auto s = blob_expand(cfg);
    REQUIRE(s.n == 2);
    CHECK(s.d(0, 1) == doctest::Approx(1.0));
    CHECK(s.mass[0] == doctest::Approx(2.0));
    CHECK(s.mass[1] == doctest::Approx(3.0));
}

TEST_CASE("blob expansion of two segments") {
    // blob = two points at internal distance 5, joined A1 -- B0
    BlobConfig cfg;
    cfg.superstructure = Graph(2);
    cfg.superstructure.add_edge(0, 1);
    cfg.x = {1.0, 1.0};
    cfg.blobs = {two_points(5.0, 0.5, 0.5), two_points(5.0, 0.5, 0.5)};
    cfg.junctions = {{1, 0}};
    auto s = blob_expand(cfg);
    REQUIRE(s.n == 4);
    CHECK(s.d(0, 1) == doctest::Approx(5.0));
    CHECK(s.d(1, 2) == doctest::Approx(1.0));
    CHECK(s.d(0, 2) == doctest::Approx(6.0));
    CHECK(s.d(1, 3) == doctest::Approx(6.0));
    CHECK(s.d(0, 3) == doctest::Approx(11.0));
    s.check();
}

TEST_CASE("blob expansion can route through other blobs") {
    // a huge internal distance is bypassed by the junction edges
    BlobConfig cfg;
    cfg.superstructure = Graph(2);
    cfg.superstructure.add_edge(0, 1);
    cfg.superstructure.add_edge(0, 1);  // parallel edge, two junctions
    cfg.x = {1.0, 1.0};
    cfg.blobs = {two_points(100.0, 0.5, 0.5), one_point(1.0)};
    cfg.junctions = {{0, 0}, {1, 0}};
    auto s = blob_expand(cfg);
    // A0 -> B -> A1 costs 2, far below the internal 100
    CHECK(s.d(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("blob expansion input validation") {
    BlobConfig cfg;
    cfg.superstructure = Graph(2);  // no edge: disconnected
    cfg.x = {1.0, 1.0};
    cfg.blobs = {one_point(1.0), one_point(1.0)};
    CHECK_THROWS(blob_expand(cfg));
    cfg.superstructure.add_edge(0, 1);
    cfg.junctions = {{0, 5}};  // junction outside the blob
    CHECK_THROWS(blob_expand(cfg));
    cfg.junctions = {{0, 0}, {0, 0}};  // junction count mismatch
    CHECK_THROWS(blob_expand(cfg));
}

TEST_CASE("scaling factor of the expansion theorem") {
    std::vector<double> x = {1.0, 2.0};
    std::vector<double> u = {0.5, 1.0};
    // sigma2 = 5, sum x^2 u = 4.5
    CHECK(theorem32_scaling(x, u) == doctest::Approx(25.0 / 9.5));
    CHECK_THROWS(theorem32_scaling({1.0}, {1.0, 2.0}));
    auto s = two_points(3.0, 0.5, 0.5);
    CHECK(blob_mean_distance(s) == doctest::Approx(s.mean_distance()));
}
