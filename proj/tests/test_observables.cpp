#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "critwin/models.hpp"
#include "critwin/observables.hpp"
#include "doctest.h"

using namespace critwin;

namespace {

std::string graph_key(const Graph& g) {
    std::vector<std::pair<int, int>> es = g.edges;
    for (auto& e : es)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    std::string key;
    for (auto& e : es) key += std::to_string(e.first) + "-" + std::to_string(e.second) + ";";
    return key;
}

double tv_from_counts(const std::map<std::string, int>& a,
                      const std::map<std::string, int>& b, double na, double nb) {
    std::map<std::string, double> diff;
    for (auto& [k, c] : a) diff[k] += c / na;
    for (auto& [k, c] : b) diff[k] -= c / nb;
    double tv = 0;
    for (auto& [k, d] : diff) tv += std::abs(d);
    return tv / 2;
}

}  // namespace

TEST_CASE("vertex susceptibilities on a hand-checked graph") {
    Graph g(5);
    g.add_edge(0, 1);
    g.add_edge(1, 2);  // path of 3
    g.add_edge(3, 4);  // edge
    auto stats = component_stats(g);
    auto r = vertex_susceptibilities(components(g), stats, g.n, 0.5);
    CHECK(r.t == 0.5);
    CHECK(r.s1 == doctest::Approx(1.0));
    CHECK(r.s2 == doctest::Approx(13.0 / 5));
    CHECK(r.s3 == doctest::Approx(35.0 / 5));
    CHECK(r.D == doctest::Approx(10.0 / 5));  // 8 (path) + 2 (edge), ordered pairs
    CHECK(r.s2_star == doctest::Approx(13.0 / 5));
    CHECK(r.I == 3);
    CHECK(r.diam_max == 2);
    CHECK(r.csv_row().rfind("0.5,1,2.6,7,0,2,2.6,3,2", 0) == 0);
}

TEST_CASE("free-edge susceptibilities agree with a brute-force recomputation") {
    std::vector<int> deg(120, 3);
    Rng rng = make_rng(71);
    auto st = cm_dynamic(deg, 0.35, rng);
    auto r = free_edge_susceptibilities(st, true);

    // recompute everything directly from formed_edges
    Graph g(st.n);
    std::vector<int> used(st.n, 0);
    for (auto& e : st.formed_edges) {
        used[e.first] += 1;
        used[e.second] += 1;
        if (e.first != e.second) g.add_edge(e.first, e.second);
    }
    auto decomp = components(g);
    double s2 = 0, s3 = 0, gg = 0, D = 0, s2s = 0, I = 0;
    std::int64_t alive = 0;
    for (auto& comp : decomp.components) {
        double f = 0;
        for (int v : comp) f += deg[v] - used[v];
        alive += (std::int64_t)f;
        s2 += f * f;
        s3 += f * f * f;
        gg += f * comp.size();
        s2s += (double)comp.size() * comp.size();
        I = std::max(I, (double)comp.size());
        for (int a : comp) {
            auto dist = bfs_distances(g, a);
            for (int b : comp)
                if (a != b && deg[a] - used[a] > 0 && deg[b] - used[b] > 0)
                    D += (double)(deg[a] - used[a]) * (deg[b] - used[b]) * dist[b];
        }
    }
    CHECK(st.alive == alive);
    CHECK(r.s1 == doctest::Approx((double)alive / st.n));
    CHECK(r.s2 == doctest::Approx(s2 / st.n));
    CHECK(r.s3 == doctest::Approx(s3 / st.n));
    CHECK(r.g == doctest::Approx(gg / st.n));
    CHECK(r.D == doctest::Approx(D / st.n));
    CHECK(r.s2_star == doctest::Approx(s2s / st.n));
    CHECK(r.I == doctest::Approx(I));
}

TEST_CASE("size-biased order first-pick law") {
    std::vector<double> w = {1.0, 2.0, 3.0};
    Rng rng = make_rng(9);
    std::vector<int> first(3, 0);
    int reps = 120000;
    for (int r = 0; r < reps; ++r) first[size_biased_order(w, rng)[0]] += 1;
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs((double)first[i] / reps - w[i] / 6.0) < 0.01);
    CHECK_THROWS(size_biased_order({1.0, -1.0}, rng));
}

TEST_CASE("aldous walk reproduces the inhomogeneous graph law at n=3") {
    WeightedVertexSet w({0.7, 1.0, 1.4});
    double q = 0.8;
    Rng rng = make_rng(101);
    std::map<std::string, int> walk_counts, direct_counts;
    int reps = 120000;
    for (int r = 0; r < reps; ++r) {
        auto res = aldous_walk(w, q, rng);
        walk_counts[graph_key(res.graph)] += 1;
        direct_counts[graph_key(gen_gxq(w, q, rng))] += 1;
    }
    CHECK(tv_from_counts(walk_counts, direct_counts, reps, reps) < 0.02);
}

TEST_CASE("aldous walk trace bookkeeping") {
    WeightedVertexSet w({1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    Rng rng = make_rng(103);
    for (int r = 0; r < 200; ++r) {
        auto res = aldous_walk(w, 0.5, rng);
        REQUIRE(res.trace.z.size() == 6);
        // walk level ends at -2 * number of components
        CHECK(res.trace.z.back() ==
              doctest::Approx(-2.0 * res.trace.components.size()));
        // masses and items are consistent with the revealed graph
        auto decomp = components(res.graph);
        CHECK(decomp.components.size() == res.trace.components.size());
        double mass = 0;
        std::int64_t items = 0;
        for (auto& c : res.trace.components) {
            mass += c.mass;
            items += c.items;
        }
        CHECK(mass == doctest::Approx(6.0));
        CHECK(items == 6);
        // component order is the discovery order of the walk
        CHECK(res.component_masses.size() == res.trace.components.size());
    }
}

TEST_CASE("stub exploration walk degenerate cases") {
    Rng rng = make_rng(107);
    auto tr = riordan_walk({2}, {1.0}, rng);
    REQUIRE(tr.z.size() == 1);
    CHECK(tr.z[0] == doctest::Approx(-2.0));  // eta 2, self pair cancels
    CHECK(tr.components[0].surplus == 1);

    auto tr2 = riordan_walk({1, 1}, {1.0, 1.0}, rng);
    REQUIRE(tr2.z.size() == 2);
    CHECK(tr2.components.size() == 1);
    CHECK(tr2.components[0].surplus == 0);
    CHECK(tr2.z.back() == doctest::Approx(-2.0));
}

TEST_CASE("stub exploration walk matches a direct uniform matching") {
    // compare the law of the blob partition into components against a
    // straightforward matching + union-find simulation
    std::vector<int> a = {2, 1, 1, 2, 3};
    Rng rng = make_rng(109);
    auto partition_key = [](std::vector<int> sizes) {
        std::sort(sizes.begin(), sizes.end());
        std::string k;
        for (int s : sizes) k += std::to_string(s) + ",";
        return k;
    };
    std::map<std::string, int> walk_counts, direct_counts;
    int reps = 60000;
    for (int r = 0; r < reps; ++r) {
        auto tr = riordan_walk(a, std::vector<double>(a.size(), 1.0), rng);
        std::vector<int> sizes;
        std::int64_t surplus = 0, pairs = 0;
        for (auto& c : tr.components) {
            sizes.push_back((int)c.items);
            surplus += c.surplus;
        }
        // surplus + spanning edges account for every matched pair
        for (std::size_t i = 0; i < tr.z.size(); ++i) pairs += tr.theta[i];
        CHECK(surplus == pairs);
        std::int64_t total_pairs = 9 / 2;  // 9 stubs, one dropped
        CHECK(surplus + ((std::int64_t)a.size() - (std::int64_t)tr.components.size()) ==
              total_pairs);
        CHECK(tr.z.back() == doctest::Approx(-2.0 * tr.components.size()));
        walk_counts[partition_key(sizes)] += 1;

        // direct simulation
        std::vector<int> blob_of;
        for (std::size_t v = 0; v < a.size(); ++v)
            for (int k = 0; k < a[v]; ++k) blob_of.push_back((int)v);
        std::shuffle(blob_of.begin(), blob_of.end(), rng);
        UnionFind uf((int)a.size());
        for (std::size_t k = 0; k + 1 < blob_of.size(); k += 2)
            uf.unite(blob_of[k], blob_of[k + 1]);
        std::map<int, int> cnt;
        for (int v = 0; v < (int)a.size(); ++v) cnt[uf.find(v)] += 1;
        std::vector<int> dsizes;
        for (auto& [root, c] : cnt) dsizes.push_back(c);
        direct_counts[partition_key(dsizes)] += 1;
    }
    CHECK(tv_from_counts(walk_counts, direct_counts, reps, reps) < 0.02);
}

TEST_CASE("assumption diagnostics") {
    WeightedVertexSet w({1.0, 2.0});  // sigma2 = 5, sigma3 = 9
    auto rep = assumption_diagnostics(w, 0.3);
    CHECK(rep.sigma3_ratio == doctest::Approx(9.0 / 125.0));
    CHECK(rep.q_minus_inv_sigma2 == doctest::Approx(0.3 - 0.2));
    CHECK(rep.xmax_ratio == doctest::Approx(2.0 / 5.0));
    CHECK_FALSE(rep.blob_ratio.has_value());
    CHECK(rep.theorem32_factor == doctest::Approx(5.0));

    BlobSummaries bs;
    bs.u = {0.5, 1.0};
    bs.d_max = 3.0;
    bs.eta0 = 0.25;
    auto rep2 = assumption_diagnostics(w, 0.3, bs);
    double xsq_u = 1.0 * 0.5 + 4.0 * 1.0;
    REQUIRE(rep2.blob_ratio.has_value());
    CHECK(*rep2.blob_ratio == doctest::Approx(3.0 * std::pow(5.0, 1.25) / (xsq_u + 5.0)));
    CHECK(rep2.theorem32_factor == doctest::Approx(25.0 / (5.0 + xsq_u)));
    bs.u = {0.5};
    CHECK_THROWS(assumption_diagnostics(w, 0.3, bs));
}

TEST_CASE("significant digit formatting") {
    CHECK(format_sig12(0.5) == "0.5");
    CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
    CHECK(format_sig12(123456789.25) == "123456789.25");
}
