#pragma once
#include <string>
#include <utility>
#include <vector>

#include "critwin/graph.hpp"
#include "critwin/metric_space.hpp"
#include "critwin/models.hpp"
#include "critwin/rng.hpp"

namespace critwin {

// ordered (planar) rooted labeled tree with vertex law p
struct PTree {
    int n = 0;
    std::vector<double> p;
    int root = 0;
    std::vector<std::vector<int>> children;  // planar order

    std::string key() const;  // canonical encoding for distribution tests
    int degree(int v) const { return (int)children[v].size(); }
};

// birthday-sequence sampler for the ordered p-tree law
PTree sample_ptree(const std::vector<double>& p, Rng& rng);

// exhaustive law over ordered rooted labeled trees (m <= 6 guard):
// P(t) proportional to prod p_v^{d_v} / d_v!  (already normalized)
std::vector<std::pair<PTree, double>> enumerate_ptrees(const std::vector<double>& p);

// pairs simultaneously active in the depth-first stack exploration
std::vector<std::pair<int, int>> permitted_edges(const PTree& t);

double tilt_weight(const PTree& t, double a);

// tilted p-tree law via self-normalized importance resampling from a shared
// proposal pool (pool grown until effective sample size >= 100)
std::vector<PTree> sample_tilted_ptrees(const std::vector<double>& p, double a,
                                        int count, Rng& rng);
PTree sample_tilted_ptree(const std::vector<double>& p, double a, Rng& rng);

// connected G(x,q) component law: tilted tree plus permitted edges with
// probability 1 - exp(-a p_u p_v)
Graph connected_gxq(const std::vector<double>& p, double a, Rng& rng);
std::vector<Graph> connected_gxq_batch(const std::vector<double>& p, double a,
                                       int count, Rng& rng);

// two-stage construction: partition from gen_gxq, internals resampled from
// the conditioned-connected law; full-graph law equals gen_gxq
Graph partition_then_connect(const WeightedVertexSet& w, double q, Rng& rng);

struct ExcursionPath {
    double l = 0;   // interval length
    double dt = 0;  // grid step
    std::vector<double> h;  // values at 0, dt, ..., l (h.front()=h.back()=0)

    double at(double s) const;  // linear interpolation
    double area() const;        // trapezoid rule
};

// Vervaat transform of a discretized Brownian bridge; steps defaults to 2048
ExcursionPath sample_brownian_excursion(double l, Rng& rng, int steps = 2048);

// excursions tilted by exp(theta * area), importance resampling
std::vector<ExcursionPath> tilt_excursions(double l, double theta, int count,
                                           Rng& rng, int steps = 2048);

// d(s,t) = h(s) + h(t) - 2 min h on [s,t]; masses uniform, total total_mass
MeasuredMetricSpace real_tree_metric(const ExcursionPath& h,
                                     const std::vector<double>& points,
                                     double total_mass = 1.0);

// glue pairs (x, r(x,y)) for a rate-one Poisson set under the ceiling g;
// glue endpoints join the point set with zero mass, metric re-closed by
// Floyd-Warshall
MeasuredMetricSpace shortcut_identify(const ExcursionPath& h,
                                      const std::vector<double>& points,
                                      const ExcursionPath& g, double total_mass,
                                      Rng& rng, int* shortcut_count = nullptr);

// limit spaces Crit_1..Crit_k(lambda): tilted excursions on the parabolic
// excursion lengths, tree metric from 2*e, shortcuts under ceiling e
std::vector<MeasuredMetricSpace> sample_crit(double lambda, int k, Rng& rng,
                                             int n_points = 48);

}  // namespace critwin
