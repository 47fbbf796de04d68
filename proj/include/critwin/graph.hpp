#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace critwin {

// Finite multigraph on vertices [0, n). Self-loops allowed and flagged.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, kept in insertion order

    Graph() = default;
    explicit Graph(int n_) : n(n_) {}

    void add_edge(int u, int v);
    bool has_self_loops() const;
    std::size_t edge_count() const { return edges.size(); }

    // adjacency ignoring multiplicity and self-loops (used for distances)
    std::vector<std::vector<int>> simple_adjacency() const;
};

struct ComponentDecomposition {
    std::vector<int> labels;                 // vertex -> component id
    std::vector<std::vector<int>> components;  // sorted by decreasing size, ties by smallest vertex id
};

struct ComponentStats {
    std::int64_t size = 0;
    std::int64_t edge_count = 0;
    std::int64_t surplus = 0;        // edges - vertices + 1 (multi-edges and loops count)
    std::int64_t diameter = 0;
    double distance_sum = 0.0;       // D(C) = sum over ordered pairs of d(u,v)
    bool diameter_exact = true;      // false if estimated by double-sweep only
};

ComponentDecomposition components(const Graph& g);

// BFS distances from source; -1 encodes unreachable.
std::vector<int> bfs_distances(const Graph& g, int source);
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source);

// Per-component stats aligned with components(g). Components larger than
// exact_cap get a double-sweep diameter estimate (flagged) and skip the
// all-pairs distance sum unless need_distance_sum forces it.
std::vector<ComponentStats> component_stats(const Graph& g,
                                            std::int64_t exact_cap = 10000,
                                            bool need_distance_sum = true);

// Diameter of the component containing any vertex of comp, by double sweep
// (lower bound, exact on trees).
int double_sweep_diameter(const std::vector<std::vector<int>>& adj,
                          const std::vector<int>& comp);

// edge-list text format: header "n=<count>", then one "u v" per line.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);
Graph read_edge_list_file(const std::string& path);
void write_edge_list_file(const std::string& path, const Graph& g);

// incremental union-find used across the models
struct UnionFind {
    std::vector<int> parent, rank_;
    std::vector<std::int64_t> size;
    explicit UnionFind(int n = 0) { reset(n); }
    void reset(int n);
    int find(int x);
    // returns root of the merged set, or -1 if already together
    int unite(int a, int b);
};

}  // namespace critwin
