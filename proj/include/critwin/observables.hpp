#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critwin/graph.hpp"
#include "critwin/models.hpp"
#include "critwin/rng.hpp"

namespace critwin {

struct SusceptibilityRecord {
    double t = 0;
    double s1 = 0, s2 = 0, s3 = 0;  // free-edge (CM) or vertex susceptibilities
    double g = 0;                   // mixed free-edge/size susceptibility (CM only)
    double D = 0;                   // distance susceptibility
    double s2_star = 0;             // component-size susceptibility
    double I = 0;                   // largest component size
    double diam_max = 0;

    std::string csv_row() const;  // 12 significant digits
    static std::string csv_header();
};

struct WalkTrace {
    std::vector<double> z;     // walk value after each step
    std::vector<double> eta;   // per-step increment driver (children / blob degree)
    std::vector<int> theta;    // back-edges found at each step (0 for tree walks)
    std::vector<int> order;    // items in exploration order
    struct Component {
        double mass = 0;           // sum of weights (or blob sizes)
        std::int64_t items = 0;    // vertices/blobs explored
        std::int64_t surplus = 0;  // back-edge count
    };
    std::vector<Component> components;
};

SusceptibilityRecord vertex_susceptibilities(const ComponentDecomposition& decomp,
                                             const std::vector<ComponentStats>& stats,
                                             int n, double t = 0);

// Free-edge susceptibilities of a dynamic CM state. Distances/diameter need
// BFS over the formed-edge graph and are only computed when with_distances.
SusceptibilityRecord free_edge_susceptibilities(const HalfEdgeState& state,
                                                bool with_distances = false);

std::vector<int> size_biased_order(const std::vector<double>& weights, Rng& rng);

struct AldousWalkResult {
    Graph graph;
    WalkTrace trace;
    std::vector<double> component_masses;  // in size-biased discovery order
};

AldousWalkResult aldous_walk(const WeightedVertexSet& w, double q, Rng& rng);

// Exploration walk over percolated blobs: blob i carries a_i matched stubs
// and a size (vertex count). Sum of a_i padded down by one uniform stub if odd.
WalkTrace riordan_walk(const std::vector<int>& blob_a,
                       const std::vector<double>& blob_sizes, Rng& rng);

struct AssumptionReport {
    double sigma3_ratio = 0;       // sigma3 / sigma2^3
    double q_minus_inv_sigma2 = 0; // q - 1/sigma2
    double xmax_ratio = 0;         // x_max / sigma2
    std::optional<double> blob_ratio;  // d_max sigma2^{3/2-eta0} / (sum x^2 u + sigma2)
    double theorem32_factor = 0;   // sigma2^2 / (sigma2 + sum x_i^2 u_i)
};

struct BlobSummaries {
    std::vector<double> u;  // mean internal junction distance per blob
    double d_max = 0;       // max blob diameter
    double eta0 = 0.25;
};

AssumptionReport assumption_diagnostics(const WeightedVertexSet& w, double q,
                                        const std::optional<BlobSummaries>& blobs = std::nullopt);

std::string format_sig12(double v);

}  // namespace critwin
