#include "critwin/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace critwin {

CmParams CmParams::from_pmf(const std::vector<double>& pmf) {
    double tot = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    if (std::abs(tot - 1.0) > 1e-9) throw std::invalid_argument("pmf must sum to 1");
    CmParams p;
    double m2 = 0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        double kk = (double)k;
        p.mu += kk * pmf[k];
        m2 += kk * (kk - 1) * pmf[k];
        p.beta += kk * (kk - 1) * (kk - 2) * pmf[k];
    }
    p.nu = m2 / p.mu;
    if (p.nu <= 1.0) throw std::invalid_argument("supercritical setup requires nu > 1");
    p.t_c = 0.5 * std::log(p.nu / (p.nu - 1.0));
    return p;
}

CmParams CmParams::from_degrees(const std::vector<int>& degrees) {
    int kmax = 0;
    for (int d : degrees) kmax = std::max(kmax, d);
    std::vector<double> pmf(kmax + 1, 0.0);
    for (int d : degrees) pmf[d] += 1.0 / degrees.size();
    return from_pmf(pmf);
}

static double cm_e3(const CmParams& p, double t) {
    double nu = p.nu;
    return p.mu * (9 * nu * nu * nu - 9 * nu * nu - 4 * nu * nu * nu * std::exp(-2 * t) -
                   6 * nu * (nu - 1) * (nu - 1) * std::exp(2 * t) +
                   (nu - 1) * (nu - 1) * (nu - 1) * std::exp(4 * t));
}

CmLimitPoint cm_limit_eval(const CmParams& p, double t) {
    if (t < 0 || t >= p.t_c) throw std::invalid_argument("t must lie in [0, t_c)");
    double nu = p.nu, mu = p.mu;
    double e2t = std::exp(2 * t);
    double den = -nu + (nu - 1) * e2t;  // negative on [0, t_c)
    CmLimitPoint o;
    o.t = t;
    o.s1 = mu * std::exp(-2 * t);
    o.s2 = mu * std::exp(-2 * t) * (-2 * nu + (nu - 1) * e2t) / den;
    o.s3 = (-p.beta + cm_e3(p, t)) / (den * den * den);
    o.g = -mu / den;
    o.D = nu * nu * mu * (1 - std::exp(-2 * t)) / (den * den);
    o.y = 1.0 / o.s2;
    o.z = o.s3 / (o.s2 * o.s2 * o.s2);
    o.u = o.g / o.s2;
    o.v = o.D / (o.s2 * o.s2);
    return o;
}

CmDriftFields cm_drift_fields(double s1, double s2, double s3, double g, double d,
                              double y, double v) {
    CmDriftFields f;
    f.F2s = (2 * s2 * s2 + 4 * s1 * s1 - 8 * s2 * s1) / s1;
    f.F3s = (s2 / s1) * (6 * s3 - 12 * s2) + (24 * s2 - 12 * s3 - 8 * s1);
    f.Fg = (2 * g * s2 - 4 * g * s1) / s1;
    f.Fd = (4 * d * s2 + 2 * s2 * s2 - 4 * d * s1 - 4 * s2 * s1 + 2 * s1 * s1 -
            4 * d * s1) / s1;
    f.F2star = 2 * g * g / s1;
    f.Fy = -(2 + 4 * s1 * s1 * y * y - 8 * s1 * y) / s1;
    // chain rule from F2s and Fd at d = v/y^2, s2 = 1/y; the expanded form
    // printed alongside the y-field does not solve the closed-form trajectory
    f.Fv = (2 + 8 * v * s1 - 4 * s1 * y + 2 * s1 * s1 * y * y -
            8 * v * y * s1 * s1) / s1;
    return f;
}

CmCriticalConstants cm_critical_constants(const CmParams& p) {
    CmCriticalConstants c;
    double mu = p.mu, nu = p.nu;
    c.z = p.beta / (mu * mu * mu * (nu - 1) * (nu - 1) * (nu - 1));
    c.u = 1.0 / (nu - 1);
    c.v = nu / (mu * (nu - 1) * (nu - 1));
    c.y_slope = 2 * nu / (mu * (nu - 1));
    return c;
}

double cm_entrance_time(const CmParams& p, double n, double delta) {
    return p.t_c - 0.5 * (p.nu / (p.nu - 1.0)) * std::pow(n, -delta);
}

namespace {

struct BfState {
    double x, y, z, v;
};

// x' = -x^2 - (1-x^2) x;  y = 1/s2, z = s3/s2^3 rewritten to stay bounded:
// y' = -x^2 y^2 - (1-x^2);  z' = 3 x^2 y (y^2 - z);
// v' = -2 x^2 y v + x^2 y^2 / 2 + 1 - x^2   (or x^4 in the damping term)
BfState bf_rhs(const BfState& s, bool quartic) {
    double x2 = s.x * s.x;
    BfState d;
    d.x = -x2 - (1 - x2) * s.x;
    d.y = -x2 * s.y * s.y - (1 - x2);
    d.z = 3 * x2 * s.y * (s.y * s.y - s.z);
    double damp = quartic ? x2 * x2 : x2;
    d.v = -2 * damp * s.y * s.v + x2 * s.y * s.y / 2 + 1 - x2;
    return d;
}

BfState bf_step(const BfState& s, double dt, bool quartic) {
    auto add = [](const BfState& a, const BfState& b, double h) {
        return BfState{a.x + h * b.x, a.y + h * b.y, a.z + h * b.z, a.v + h * b.v};
    };
    BfState k1 = bf_rhs(s, quartic);
    BfState k2 = bf_rhs(add(s, k1, dt / 2), quartic);
    BfState k3 = bf_rhs(add(s, k2, dt / 2), quartic);
    BfState k4 = bf_rhs(add(s, k3, dt), quartic);
    return BfState{s.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                   s.y + dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
                   s.z + dt / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
                   s.v + dt / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

}  // namespace

BfOdeResult bf_ode_solve(const BfOdeOptions& opt) {
    BfOdeResult res;
    BfState s{1.0, 1.0, 1.0, 0.0};
    double t = 0;
    BfState prev = s;
    double t_prev = 0;
    // march until y crosses zero (the blow-up time of s2)
    while (s.y > 0) {
        if (t > opt.t_max) throw std::runtime_error("no blow-up before t_max");
        prev = s;
        t_prev = t;
        res.t_grid.push_back(t);
        res.x.push_back(s.x);
        res.y.push_back(s.y);
        res.s2.push_back(1.0 / s.y);
        res.s3.push_back(s.z / (s.y * s.y * s.y));
        res.v.push_back(s.v);
        s = bf_step(s, opt.dt, opt.v_quartic_drift);
        t += opt.dt;
    }
    // bisect the crossing inside [t_prev, t_prev + dt]
    double lo = 0, hi = opt.dt;
    for (int it = 0; it < 80; ++it) {
        double mid = (lo + hi) / 2;
        BfState m = bf_step(prev, mid, opt.v_quartic_drift);
        (m.y > 0 ? lo : hi) = mid;
    }
    BfState at_tc = bf_step(prev, (lo + hi) / 2, opt.v_quartic_drift);
    res.t_c = t_prev + (lo + hi) / 2;
    res.x_tc = at_tc.x;
    res.alpha = 1.0 / (1.0 - at_tc.x * at_tc.x);
    res.beta = at_tc.z;
    res.rho = at_tc.v;
    return res;
}

std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b) {
    int k = (int)b.size();
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14) throw std::runtime_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c < k; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < k; ++i) b[i] /= a[i][i];
    return b;
}

namespace {

// power iteration for the Perron pair of a positive K x K matrix
void perron(const std::vector<std::vector<double>>& m, std::vector<double>& vec,
            double& rho, bool transpose) {
    int k = (int)m.size();
    vec.assign(k, 1.0 / k);
    rho = 0;
    for (int it = 0; it < 100000; ++it) {
        std::vector<double> next(k, 0.0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                next[i] += (transpose ? m[j][i] : m[i][j]) * vec[j];
        double norm = std::accumulate(next.begin(), next.end(), 0.0);
        for (auto& e : next) e /= norm;
        double diff = 0;
        for (int i = 0; i < k; ++i) diff = std::max(diff, std::abs(next[i] - vec[i]));
        vec = next;
        rho = norm;
        if (diff < 1e-14 && it > 3) return;
    }
}

std::vector<std::vector<double>> mean_matrix(const Kernel& k,
                                             const std::vector<double>& mu,
                                             double shift) {
    std::vector<std::vector<double>> m(k.K, std::vector<double>(k.K, 0.0));
    for (int i = 0; i < k.K; ++i)
        for (int j = 0; j < k.K; ++j)
            m[i][j] = mu[j] * (k.kappa[i][j] - shift);
    return m;
}

}  // namespace

IrgConstants irg_constants(const Kernel& kernel) {
    kernel.validate();
    int k = kernel.K;
    auto m = mean_matrix(kernel, kernel.mu, 0.0);
    IrgConstants c;
    double rho_r = 0, rho_l = 0;
    perron(m, c.u, rho_r, false);
    perron(m, c.v, rho_l, true);
    c.rho = rho_r;
    // normalize: sum u = 1 (already), v.u = 1
    double vu = 0;
    for (int i = 0; i < k; ++i) vu += c.v[i] * c.u[i];
    for (auto& e : c.v) e /= vu;

    double res = 0;
    for (int i = 0; i < k; ++i) {
        double mu_i = 0, mv_i = 0;
        for (int j = 0; j < k; ++j) {
            mu_i += m[i][j] * c.u[j];
            mv_i += m[j][i] * c.v[j];
        }
        res = std::max(res, std::abs(mu_i - c.rho * c.u[i]));
        res = std::max(res, std::abs(mv_i - rho_l * c.v[i]));
    }
    res = std::max(res, std::abs(rho_l - rho_r));
    c.residual = res;

    double v1 = std::accumulate(c.v.begin(), c.v.end(), 0.0);
    double mu_u = 0, beta_num = 0;
    for (int i = 0; i < k; ++i) {
        mu_u += kernel.mu[i] * c.u[i];
        beta_num += c.v[i] * c.u[i] * c.u[i];
    }
    c.alpha = 1.0 / (v1 * mu_u);
    c.beta = beta_num / (v1 * mu_u * mu_u);

    // zeta = alpha * v^T (A D + kappa B) u with D = Diag(mu), B = Diag(b)
    if (kernel.A && kernel.b) {
        double acc = 0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                acc += c.v[i] *
                       ((*kernel.A)[i][j] * kernel.mu[j] +
                        kernel.kappa[i][j] * (*kernel.b)[j]) *
                       c.u[j];
        c.zeta = c.alpha * acc;
    }
    return c;
}

IrgBpExpectations irg_bp_expectations(const Kernel& kernel, double n, double delta) {
    kernel.validate();
    int k = kernel.K;
    // empirical type fractions from the rounded assignment used in simulation
    std::vector<int> counts(k, 0);
    {
        auto types = irg_types_rounded(kernel, (int)n);
        for (int t : types) counts[t] += 1;
    }
    std::vector<double> mu_n(k);
    for (int i = 0; i < k; ++i) mu_n[i] = counts[i] / n;

    double shift = std::pow(n, -delta);
    auto m = mean_matrix(kernel, mu_n, shift);
    for (auto& row : m)
        for (double e : row)
            if (e < 0) throw std::runtime_error("shifted kernel went negative");

    IrgBpExpectations out;
    std::vector<double> dummy;
    perron(m, dummy, out.rho_minus, false);
    if (out.rho_minus >= 1.0)
        throw std::runtime_error("shifted branching process is not subcritical");

    // (I - M) t0 = 1
    std::vector<std::vector<double>> imm(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) imm[i][j] = (i == j ? 1.0 : 0.0) - m[i][j];
    out.t0 = solve_linear(imm, std::vector<double>(k, 1.0));
    for (int i = 0; i < k; ++i) out.t0_mu += mu_n[i] * out.t0[i];

    // (I - M) w1 = t0^2 componentwise, E T0^2 = mu . w1
    std::vector<double> t0sq(k);
    for (int i = 0; i < k; ++i) t0sq[i] = out.t0[i] * out.t0[i];
    auto w1 = solve_linear(imm, t0sq);
    for (int i = 0; i < k; ++i) out.t0_sq_mu += mu_n[i] * w1[i];

    // E T1 = mu^T M (I-M)^{-2} 1 = mu^T M w where (I-M) w = t0
    auto w = solve_linear(imm, out.t0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.t1_mu += mu_n[i] * m[i][j] * w[j];
    return out;
}

std::vector<Excursion> sample_parabolic_excursions(double lambda, Rng& rng,
                                                   double dt, double t_end) {
    if (t_end <= 0) t_end = std::max(10.0, 4.0 + 2.0 * std::abs(lambda));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sdt = std::sqrt(dt);
    std::int64_t steps = (std::int64_t)(t_end / dt);

    std::vector<Excursion> out;
    double w = 0, run_min = 0;
    double exc_start = -1, exc_area = 0;
    std::int64_t exc_len = 0;
    auto close = [&](double t_now) {
        if (exc_start >= 0 && exc_len >= 10) {
            out.push_back({exc_start, exc_len * dt, exc_area * dt});
        }
        exc_start = -1;
        exc_area = 0;
        exc_len = 0;
        (void)t_now;
    };
    for (std::int64_t i = 1; i <= steps; ++i) {
        double t = i * dt;
        w += (lambda - (t - dt)) * dt + sdt * gauss(rng);
        if (w <= run_min) {
            run_min = w;
            close(t);
        } else {
            if (exc_start < 0) exc_start = t - dt;
            exc_area += (w - run_min);
            exc_len += 1;
        }
    }
    close(t_end);
    std::sort(out.begin(), out.end(),
              [](const Excursion& a, const Excursion& b) { return a.length > b.length; });
    return out;
}

std::vector<double> mult_coalescent(const std::vector<double>& x, double q, Rng& rng) {
    std::vector<double> blocks = x;
    for (double m : blocks)
        if (m <= 0) throw std::invalid_argument("block masses must be positive");
    double t = 0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (blocks.size() > 1) {
        double s1 = std::accumulate(blocks.begin(), blocks.end(), 0.0);
        double s2 = 0;
        for (double m : blocks) s2 += m * m;
        double rate = (s1 * s1 - s2) / 2;  // sum over unordered pairs of x_i x_j
        if (rate <= 0) break;
        t += std::exponential_distribution<double>(rate)(rng);
        if (t > q) break;
        // pair (i,j) with probability proportional to x_i x_j via rejection
        auto pick = [&]() {
            double u = unif(rng) * s1;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                u -= blocks[i];
                if (u <= 0) return (int)i;
            }
            return (int)blocks.size() - 1;
        };
        int i, j;
        do {
            i = pick();
            j = pick();
        } while (i == j);
        blocks[i] += blocks[j];
        blocks.erase(blocks.begin() + j);
    }
    std::sort(blocks.begin(), blocks.end(), std::greater<double>());
    return blocks;
}

}  // namespace critwin
