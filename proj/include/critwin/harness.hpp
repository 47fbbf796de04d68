#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "critwin/graph.hpp"
#include "critwin/limits.hpp"
#include "critwin/models.hpp"
#include "critwin/rng.hpp"

namespace critwin {

struct ExperimentConfig {
    std::string model;               // "er", "cm_perc", "bf", "irg"
    std::vector<int> degrees_pmf_k;  // cm_perc: degree support (paired with probs)
    std::vector<double> degrees_pmf_p;
    std::optional<Kernel> kernel;    // irg
    std::vector<std::int64_t> n_grid;
    std::vector<double> lambda_grid;
    int replicas = 1;
    std::uint64_t seed = 1;
    std::string output_csv;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    void validate() const;
};

struct SweepRow {
    std::int64_t n = 0;
    double lambda = 0;
    int replica = 0;
    std::int64_t c1 = 0, c2 = 0;
    std::int64_t surplus1 = 0;
    std::int64_t diam1 = 0;
    std::int64_t edges = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (n, lambda, replica)
    double exponent = 0, exponent_stderr = 0;  // median |C1| vs n (first lambda)

    std::string csv() const;
    std::string summary_json() const;
};

SweepResult run_sweep(const ExperimentConfig& cfg);

// generate one graph of the configured model at (n, lambda) with its own rng
Graph generate_model(const ExperimentConfig& cfg, std::int64_t n, double lambda,
                     Rng& rng);

// least squares on log-log medians; needs >= 3 distinct n
std::pair<double, double> fit_exponent(
    const std::vector<std::pair<double, double>>& pairs);

double ks_statistic(std::vector<double> a, std::vector<double> b);
double tv_distance(const std::vector<double>& pmf1, const std::vector<double>& pmf2);

// barely-subcritical blob pipeline: run the CM to t_n, form the blob-level
// G(x,q) with the prescribed weights and q, report rescaled components
struct PipelineComponent {
    double mass = 0;             // sum of blob weights x_i
    std::int64_t vertices = 0;   // underlying vertex count
    std::int64_t blobs = 0;
    std::int64_t surplus = 0;
    double free_stubs = 0;       // total free stubs (blob-level W)
};

struct PipelineReport {
    double t_n = 0, q = 0;
    double sigma2 = 0;           // of the blob weights
    double total_mass = 0;
    std::vector<PipelineComponent> components;  // decreasing mass
};

PipelineReport universality_pipeline_cm(const std::vector<int>& degrees,
                                        double delta, double lambda, Rng& rng);
// ER fed through the same plumbing with point blobs (self-consistency)
PipelineReport universality_pipeline_er(std::int64_t n, double lambda, Rng& rng);

int worker_count();  // CRITWIN_WORKERS env var, default hardware concurrency

}  // namespace critwin
