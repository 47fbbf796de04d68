#pragma once
#include <string>
#include <utility>
#include <vector>

#include "critwin/graph.hpp"
#include "critwin/rng.hpp"

namespace critwin {

struct MeasuredMetricSpace {
    int n = 0;
    std::vector<double> dist;  // row-major n x n, symmetric, zero diagonal
    std::vector<double> mass;  // nonnegative

    MeasuredMetricSpace() = default;
    explicit MeasuredMetricSpace(int n_)
        : n(n_), dist((std::size_t)n_ * n_, 0.0), mass(n_, 0.0) {}

    double& d(int i, int j) { return dist[(std::size_t)i * n + j]; }
    double d(int i, int j) const { return dist[(std::size_t)i * n + j]; }
    double total_mass() const;
    double diameter() const;
    double mean_distance() const;  // mass-weighted mean pairwise distance

    // metric axioms within tol; throws on violation when check() called
    void check(double tol = 1e-9) const;

    // JSON {schema_version, points, dist: flattened upper triangle, mass}
    std::string to_json() const;
    static MeasuredMetricSpace from_json(const std::string& text);
};

MeasuredMetricSpace scl(double alpha, double beta, const MeasuredMetricSpace& x);

// correspondence = set of index pairs covering both sides
double distortion(const std::vector<std::pair<int, int>>& corr,
                  const MeasuredMetricSpace& x1, const MeasuredMetricSpace& x2);

// exact GHP distance; requires n1*n2 <= 36
double ghp_exact(const MeasuredMetricSpace& x1, const MeasuredMetricSpace& x2);

// (lower, upper) bounds usable at any size
std::pair<double, double> ghp_bounds(const MeasuredMetricSpace& x1,
                                     const MeasuredMetricSpace& x2);

// blob expansion Gamma(G, x, M, X)
struct BlobConfig {
    Graph superstructure;                 // graph on blob indices
    std::vector<double> x;                // blob weights
    std::vector<MeasuredMetricSpace> blobs;  // each with total mass 1
    // junction[e] = (point index in blobs[u], point index in blobs[v]) for
    // superstructure edge e = (u, v)
    std::vector<std::pair<int, int>> junctions;
};

MeasuredMetricSpace blob_expand(const BlobConfig& cfg);

// scl factor sigma2^2 / (sigma2 + sum x_i^2 u_i), u_i the mean internal
// junction distance of blob i under its measure
double theorem32_scaling(const std::vector<double>& x,
                         const std::vector<double>& u);
double blob_mean_distance(const MeasuredMetricSpace& blob);  // u_i from the blob itself

}  // namespace critwin
