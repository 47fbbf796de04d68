#pragma once
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "critwin/graph.hpp"
#include "critwin/rng.hpp"

namespace critwin {

struct WeightedVertexSet {
    std::vector<double> x;
    double sigma1 = 0, sigma2 = 0, sigma3 = 0;
    double x_max = 0, x_min = 0;

    WeightedVertexSet() = default;
    explicit WeightedVertexSet(std::vector<double> weights);
    int n() const { return (int)x.size(); }
};

// K-type kernel with optional critical-window perturbations (A symmetric,
// b summing to zero).
struct Kernel {
    int K = 1;
    std::vector<std::vector<double>> kappa;  // K x K symmetric positive
    std::vector<double> mu;                  // probability vector
    std::optional<std::vector<std::vector<double>>> A;
    std::optional<std::vector<double>> b;

    void validate() const;
    std::string to_json() const;
    static Kernel from_json(const std::string& text);
};

// dynamic configuration model state
struct HalfEdgeState {
    int n = 0;
    std::vector<int> degrees;
    double time = 0;
    std::int64_t alive = 0;            // alive (free) stubs
    UnionFind uf;
    std::vector<std::int64_t> free_in_comp;  // by union-find root
    std::vector<std::pair<int, int>> formed_edges;

    // running component aggregates over free-stub counts f and sizes |C|
    double sum_f2 = 0, sum_f3 = 0, sum_fc = 0;  // sum f^2, f^3, f*|C|

    std::int64_t free_stubs_of_root(int v) { return free_in_comp[uf.find(v)]; }
};

// bounded-size rule: F subset of Omega_K^4, Omega_K = {1..K, omega}
struct BSRRule {
    int K = 1;
    // entry (c1,c2,c3,c4) with values in [1..K] or 0 standing for omega
    std::vector<std::array<int, 4>> F;
    bool contains(int c1, int c2, int c3, int c4) const;
};

// G(x,q): edge i~j with probability 1 - exp(-q x_i x_j)
Graph gen_gxq(const WeightedVertexSet& w, double q, Rng& rng);

// ER via gen_gxq semantics: edge probability 1 - exp(-t/n)
Graph gen_er(int n, double t, Rng& rng);

// IRG window selection
struct IrgWindow {
    double lambda = 0.0;           // kappa_n = (1 + lambda n^{-1/3}) kappa
    bool use_perturbation = false; // kappa_n = kappa + A n^{-1/3}, mu_n = mu + b n^{-1/3}
    bool subcritical_shift = false;  // kappa_n^- = kappa_n - n^{-delta}
    double delta = 0.18;
};

// type_assignment entries in [0, K)
Graph gen_irg(const Kernel& kernel, const std::vector<int>& type_assignment,
              const IrgWindow& window, Rng& rng);

// deterministic rounded type counts per mu (Assumption allows deterministic
// empirical measures); also iid assignment
std::vector<int> irg_types_rounded(const Kernel& kernel, int n);
std::vector<int> irg_types_iid(const Kernel& kernel, int n, Rng& rng);

Graph cm_uniform_match(const std::vector<int>& degrees, Rng& rng);

// Gillespie dynamic CM run to t_end; optional per-event callback
// (time, state) after the event is applied.
HalfEdgeState cm_dynamic(const std::vector<int>& degrees, double t_end, Rng& rng,
                         const std::function<void(const HalfEdgeState&)>& on_event = nullptr);

Graph cm_percolate_stubs(const std::vector<int>& degrees, double p, Rng& rng);
Graph cm_percolate_edges(const Graph& g, double p, Rng& rng);

// percolated stub counts per vertex (Binomial thinning + odd-total fix),
// exposed for the blob-level pipeline
std::vector<int> percolate_stub_counts(const std::vector<int>& degrees, double p, Rng& rng);

struct BsrResult {
    Graph graph;
    std::int64_t events = 0;
    std::int64_t first_edge_events = 0;  // events that applied (v1,v2)
};

BsrResult bsr_run(const BSRRule& rule, int n, double t_end, Rng& rng);
BsrResult bf_run(int n, double t_end, Rng& rng);  // K=1, F={(1,1,*,*)}

std::vector<int> read_degree_file(const std::string& path);

}  // namespace critwin
