#pragma once
#include <cstdint>
#include <vector>

#include "critwin/models.hpp"
#include "critwin/rng.hpp"

namespace critwin {

// degree-distribution moments for the dynamic configuration model
struct CmParams {
    double mu = 0;    // sum k p_k
    double nu = 0;    // sum k(k-1) p_k / mu
    double beta = 0;  // sum k(k-1)(k-2) p_k
    double t_c = 0;   // (1/2) log(nu/(nu-1))

    static CmParams from_pmf(const std::vector<double>& pmf);  // pmf[k] = p_k
    static CmParams from_degrees(const std::vector<int>& degrees);
};

// deterministic limit trajectory of the dynamic CM at time t < t_c
struct CmLimitPoint {
    double t = 0;
    double s1 = 0, s2 = 0, s3 = 0, g = 0, D = 0;
    double y = 0, z = 0, u = 0, v = 0;  // 1/s2, s3/s2^3, g/s2, D/s2^2
};

CmLimitPoint cm_limit_eval(const CmParams& p, double t);

// drift fields of Lemma-style susceptibility ODEs evaluated at a state point
struct CmDriftFields {
    double F2s = 0, F3s = 0, Fg = 0, Fd = 0, F2star = 0, Fy = 0, Fv = 0;
};
CmDriftFields cm_drift_fields(double s1, double s2, double s3, double g, double d,
                              double y, double v);

// limit constants of the dynamic CM at criticality
struct CmCriticalConstants {
    double z = 0;  // beta / (mu^3 (nu-1)^3)
    double u = 0;  // 1/(nu-1)            (g / s2)
    double v = 0;  // nu / (mu (nu-1)^2)  (D / s2^2)
    double y_slope = 0;  // y(t) ~ y_slope (t_c - t)
};
CmCriticalConstants cm_critical_constants(const CmParams& p);

// barely subcritical entrance time t_n = t_c - (nu/(2(nu-1))) n^{-delta}
double cm_entrance_time(const CmParams& p, double n, double delta);

// Bohman-Frieze / bounded-size susceptibility ODE system
struct BfOdeOptions {
    double dt = 1e-5;
    double t_max = 4.0;
    bool v_quartic_drift = false;  // use -2 x^4 y v in place of -2 x^2 y v
};

struct BfOdeResult {
    double t_c = 0;
    double alpha = 0;  // 1 / (1 - x(t_c)^2), s2 ~ alpha/(t_c - t)
    double beta = 0;   // limit of s3/s2^3
    double rho = 0;    // limit of D/s2^2 (written varrho in the ODE notes)
    double x_tc = 0;
    // sampled trajectories on a uniform grid [0, t_grid_end]
    std::vector<double> t_grid, x, s2, s3, y, v;
};

BfOdeResult bf_ode_solve(const BfOdeOptions& opt = {});

// IRG limit constants from a kernel
struct IrgConstants {
    std::vector<double> u;  // right eigenvector, sums to 1
    std::vector<double> v;  // left eigenvector, v.u = 1
    double rho = 0;         // Perron root of m_xy = mu(y) kappa(x,y)
    double alpha = 0, beta = 0, zeta = 0;
    double residual = 0;    // max eigen residual
};
IrgConstants irg_constants(const Kernel& kernel);

// branching-process expectations for the barely subcritical IRG oracle
struct IrgBpExpectations {
    std::vector<double> t0;  // E T0(x) per root type
    double t0_mu = 0;        // E T0 under mu_n
    double t0_sq_mu = 0;     // E T0^2 under mu_n
    double t1_mu = 0;        // E T1 under mu_n
    double rho_minus = 0;    // Perron root of the shifted mean matrix
};
IrgBpExpectations irg_bp_expectations(const Kernel& kernel, double n, double delta);

// reflected inhomogeneous walk W_lambda(t) = B(t) + lambda t - t^2/2 and its
// excursion lengths/areas above the running minimum
struct Excursion {
    double start = 0, length = 0, area = 0;
};
std::vector<Excursion> sample_parabolic_excursions(double lambda, Rng& rng,
                                                   double dt = 1e-4,
                                                   double t_end = 0);  // 0: max(10, 4+2|lambda|)

// multiplicative coalescent run from blocks x over time span q;
// returns block masses sorted decreasing
std::vector<double> mult_coalescent(const std::vector<double>& x, double q, Rng& rng);

// small dense linear algebra helpers shared by the kernel computations
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b);

}  // namespace critwin
