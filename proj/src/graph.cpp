#include "critwin/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace critwin {

void Graph::add_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::out_of_range("edge endpoint out of range");
    edges.emplace_back(u, v);
}

bool Graph::has_self_loops() const {
    for (auto& e : edges)
        if (e.first == e.second) return true;
    return false;
}

std::vector<std::vector<int>> Graph::simple_adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto& e : edges) {
        if (e.first == e.second) continue;
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    // drop parallel copies so BFS cost tracks the simple edge count
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

void UnionFind::reset(int n) {
    parent.resize(n);
    rank_.assign(n, 0);
    size.assign(n, 1);
    for (int i = 0; i < n; ++i) parent[i] = i;
}

int UnionFind::find(int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

int UnionFind::unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return -1;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent[rb] = ra;
    size[ra] += size[rb];
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return ra;
}

ComponentDecomposition components(const Graph& g) {
    UnionFind uf(g.n);
    for (auto& e : g.edges) uf.unite(e.first, e.second);

    std::vector<int> root_of(g.n);
    for (int v = 0; v < g.n; ++v) root_of[v] = uf.find(v);

    // order roots by (size desc, smallest vertex asc); smallest vertex of a
    // set is the first v with root_of[v] == root since we scan increasing v
    std::vector<int> first_vertex(g.n, -1);
    std::vector<int> roots;
    for (int v = 0; v < g.n; ++v) {
        if (first_vertex[root_of[v]] == -1) {
            first_vertex[root_of[v]] = v;
            roots.push_back(root_of[v]);
        }
    }
    std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        if (uf.size[a] != uf.size[b]) return uf.size[a] > uf.size[b];
        return first_vertex[a] < first_vertex[b];
    });

    ComponentDecomposition d;
    d.labels.assign(g.n, -1);
    d.components.resize(roots.size());
    std::vector<int> id_of_root(g.n, -1);
    for (std::size_t i = 0; i < roots.size(); ++i) id_of_root[roots[i]] = (int)i;
    for (int v = 0; v < g.n; ++v) {
        int id = id_of_root[root_of[v]];
        d.labels[v] = id;
        d.components[id].push_back(v);
    }
    return d;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source) {
    std::vector<int> dist(adj.size(), -1);
    std::vector<int> queue;
    queue.reserve(64);
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int u : adj[v]) {
            if (dist[u] == -1) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
    if (source < 0 || source >= g.n)
        throw std::out_of_range("bfs source out of range");
    return bfs_distances(g.simple_adjacency(), source);
}

int double_sweep_diameter(const std::vector<std::vector<int>>& adj,
                          const std::vector<int>& comp) {
    if (comp.empty()) return 0;
    auto far = [&](int s) {
        auto d = bfs_distances(adj, s);
        int best = s, bd = 0;
        for (int v : comp) {
            if (d[v] > bd) { bd = d[v]; best = v; }
        }
        return std::make_pair(best, bd);
    };
    auto [a, d0] = far(comp[0]);
    auto [b, d1] = far(a);
    (void)b;
    (void)d0;
    return d1;
}

std::vector<ComponentStats> component_stats(const Graph& g, std::int64_t exact_cap,
                                            bool need_distance_sum) {
    auto decomp = components(g);
    auto adj = g.simple_adjacency();
    std::vector<ComponentStats> out(decomp.components.size());

    for (std::size_t i = 0; i < decomp.components.size(); ++i)
        out[i].size = (std::int64_t)decomp.components[i].size();
    for (auto& e : g.edges) out[decomp.labels[e.first]].edge_count += 1;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].surplus = out[i].edge_count - out[i].size + 1;

    // shared BFS scratch reset via the visit queue, so a sweep from s costs
    // O(|component| + edges) rather than O(n)
    std::vector<int> dist(g.n, -1);
    std::vector<int> queue;
    // returns (farthest vertex, eccentricity), accumulates distances into dsum
    auto sweep = [&](int s, double* dsum) {
        queue.clear();
        dist[s] = 0;
        queue.push_back(s);
        int far = s, ecc = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            if (dist[v] > ecc) { ecc = dist[v]; far = v; }
            if (dsum) *dsum += dist[v];
            for (int u : adj[v])
                if (dist[u] == -1) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
        }
        for (int v : queue) dist[v] = -1;
        return std::make_pair(far, ecc);
    };

    for (std::size_t i = 0; i < decomp.components.size(); ++i) {
        auto& comp = decomp.components[i];
        auto& st = out[i];
        if (st.size == 1) continue;
        if (st.size <= exact_cap) {
            std::int64_t diam = 0;
            double dsum = 0.0;
            for (int v : comp) {
                auto [far, ecc] = sweep(v, need_distance_sum ? &dsum : nullptr);
                (void)far;
                if (ecc > diam) diam = ecc;
            }
            st.diameter = diam;
            st.distance_sum = dsum;
            st.diameter_exact = true;
        } else {
            auto [a, d0] = sweep(comp[0], nullptr);
            (void)d0;
            auto [b, d1] = sweep(a, nullptr);
            (void)b;
            st.diameter = d1;
            st.distance_sum = 0.0;
            st.diameter_exact = false;
        }
    }
    return out;
}

void write_edge_list(std::ostream& os, const Graph& g) {
    os << "n=" << g.n << "\n";
    for (auto& e : g.edges) os << e.first << " " << e.second << "\n";
}

Graph read_edge_list(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0)
        throw std::runtime_error("edge list must start with n=<count>");
    Graph g(std::stoi(line.substr(2)));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int u, v;
        if (!(ss >> u >> v)) throw std::runtime_error("bad edge line: " + line);
        g.add_edge(u, v);
    }
    return g;
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_edge_list(f);
}

void write_edge_list_file(const std::string& path, const Graph& g) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_edge_list(f, g);
}

}  // namespace critwin
