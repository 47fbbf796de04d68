#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "critwin/graph.hpp"
#include "doctest.h"

using namespace critwin;

TEST_CASE("components ordering and labels") {
    Graph g(7);
    g.add_edge(0, 1);
    g.add_edge(1, 2);  // component {0,1,2}
    g.add_edge(4, 5);  // component {4,5}
    auto d = components(g);
    REQUIRE(d.components.size() == 4);
    CHECK(d.components[0] == std::vector<int>{0, 1, 2});
    CHECK(d.components[1] == std::vector<int>{4, 5});
    // singleton ties broken by smallest vertex id
    CHECK(d.components[2] == std::vector<int>{3});
    CHECK(d.components[3] == std::vector<int>{6});
    CHECK(d.labels[5] == 1);
}

TEST_CASE("bfs distances and unreachable") {
    Graph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    auto dist = bfs_distances(g, 0);
    CHECK(dist == std::vector<int>{0, 1, 2, -1});
}

TEST_CASE("surplus counts multi-edges and loops") {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(0, 1);  // parallel
    g.add_edge(1, 2);
    g.add_edge(2, 2);  // loop
    CHECK(g.has_self_loops());
    auto stats = component_stats(g);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].size == 3);
    CHECK(stats[0].edge_count == 4);
    CHECK(stats[0].surplus == 2);  // 4 - 3 + 1
    // distances ignore multiplicity and loops
    CHECK(stats[0].diameter == 2);
}

TEST_CASE("path graph distance sum and diameter") {
    // path on 4 vertices: ordered-pair distance sum = 2*(3*1 + 2*2 + 1*3) = 20
    Graph g(4);
    for (int i = 0; i < 3; ++i) g.add_edge(i, i + 1);
    auto stats = component_stats(g);
    CHECK(stats[0].diameter == 3);
    CHECK(stats[0].distance_sum == doctest::Approx(20.0));
    CHECK(stats[0].diameter_exact);
}

TEST_CASE("double sweep exact on trees, flagged above cap") {
    Graph g(6);
    for (int i = 0; i < 5; ++i) g.add_edge(i, i + 1);
    auto stats = component_stats(g, 3, false);  // cap below size
    CHECK(stats[0].diameter == 5);  // double sweep exact on a path
    CHECK_FALSE(stats[0].diameter_exact);
}

TEST_CASE("cycle diameter") {
    Graph g(6);
    for (int i = 0; i < 6; ++i) g.add_edge(i, (i + 1) % 6);
    auto stats = component_stats(g);
    CHECK(stats[0].diameter == 3);
    CHECK(stats[0].surplus == 1);
}

TEST_CASE("edge list round trip") {
    Graph g(5);
    g.add_edge(0, 4);
    g.add_edge(2, 3);
    std::stringstream ss;
    write_edge_list(ss, g);
    Graph h = read_edge_list(ss);
    CHECK(h.n == 5);
    CHECK(h.edges == g.edges);
    std::stringstream bad("m=3\n0 1\n");
    CHECK_THROWS(read_edge_list(bad));
}

TEST_CASE("union find merge semantics") {
    UnionFind uf(4);
    int r = uf.unite(0, 1);
    CHECK(r != -1);
    CHECK(uf.size[r] == 2);
    CHECK(uf.unite(0, 1) == -1);
    uf.unite(2, 3);
    int r2 = uf.unite(1, 3);
    CHECK(uf.size[r2] == 4);
    CHECK(uf.find(0) == uf.find(2));
}

TEST_CASE("edge endpoint validation") {
    Graph g(2);
    CHECK_THROWS(g.add_edge(0, 2));
    CHECK_THROWS(g.add_edge(-1, 0));
}
