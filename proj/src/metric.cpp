#include "critwin/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace critwin {

double MeasuredMetricSpace::total_mass() const {
    double m = 0;
    for (double v : mass) m += v;
    return m;
}

double MeasuredMetricSpace::diameter() const {
    double m = 0;
    for (double v : dist) m = std::max(m, v);
    return m;
}

double MeasuredMetricSpace::mean_distance() const {
    double acc = 0, tot = total_mass();
    if (tot <= 0) return 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += mass[i] * mass[j] * d(i, j);
    return acc / (tot * tot);
}

void MeasuredMetricSpace::check(double tol) const {
    if ((int)mass.size() != n || (int)dist.size() != (std::size_t)n * n)
        throw std::invalid_argument("space field sizes inconsistent");
    for (double m : mass)
        if (m < 0) throw std::invalid_argument("negative mass");
    for (int i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > tol) throw std::invalid_argument("nonzero diagonal");
        for (int j = 0; j < n; ++j) {
            if (d(i, j) < -tol) throw std::invalid_argument("negative distance");
            if (std::abs(d(i, j) - d(j, i)) > tol)
                throw std::invalid_argument("asymmetric distances");
            for (int k = 0; k < n; ++k)
                if (d(i, j) > d(i, k) + d(k, j) + tol)
                    throw std::invalid_argument("triangle inequality violated");
        }
    }
}

std::string MeasuredMetricSpace::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["points"] = n;
    std::vector<double> upper;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) upper.push_back(d(i, k));
    j["dist"] = upper;
    j["mass"] = mass;
    return j.dump();
}

MeasuredMetricSpace MeasuredMetricSpace::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    MeasuredMetricSpace s(j.at("points").get<int>());
    auto upper = j.at("dist").get<std::vector<double>>();
    if ((int)upper.size() != s.n * (s.n - 1) / 2)
        throw std::invalid_argument("dist length must be n(n-1)/2");
    std::size_t idx = 0;
    for (int i = 0; i < s.n; ++i)
        for (int k = i + 1; k < s.n; ++k) {
            s.d(i, k) = upper[idx];
            s.d(k, i) = upper[idx];
            ++idx;
        }
    s.mass = j.at("mass").get<std::vector<double>>();
    if ((int)s.mass.size() != s.n) throw std::invalid_argument("mass length mismatch");
    return s;
}

MeasuredMetricSpace scl(double alpha, double beta, const MeasuredMetricSpace& x) {
    if (alpha <= 0 || beta <= 0) throw std::invalid_argument("scl factors must be positive");
    MeasuredMetricSpace out = x;
    for (auto& v : out.dist) v *= alpha;
    for (auto& v : out.mass) v *= beta;
    return out;
}

double distortion(const std::vector<std::pair<int, int>>& corr,
                  const MeasuredMetricSpace& x1, const MeasuredMetricSpace& x2) {
    if (corr.empty()) throw std::invalid_argument("empty correspondence");
    std::vector<char> c1(x1.n, 0), c2(x2.n, 0);
    for (auto& [i, j] : corr) {
        c1.at(i) = 1;
        c2.at(j) = 1;
    }
    for (char c : c1)
        if (!c) throw std::invalid_argument("correspondence does not cover X1");
    for (char c : c2)
        if (!c) throw std::invalid_argument("correspondence does not cover X2");
    double dis = 0;
    for (auto& [i1, j1] : corr)
        for (auto& [i2, j2] : corr)
            dis = std::max(dis, std::abs(x1.d(i1, i2) - x2.d(j1, j2)));
    return dis;
}

namespace {

// max total coupling mass with marginal caps mu1/mu2, free cells in
// `allowed`, and at most `overflow` mass on disallowed cells
double max_coupling_mass(const std::vector<double>& mu1, const std::vector<double>& mu2,
                         const std::vector<char>& allowed, double overflow) {
    int n1 = (int)mu1.size(), n2 = (int)mu2.size();
    // nodes: 0 source, 1 sink, 2 overflow-in, 3 overflow-out,
    // 4..4+n1 rows, then cols
    int row0 = 4, col0 = 4 + n1, nn = 4 + n1 + n2;
    struct E {
        int to;
        double cap;
        int rev;
    };
    std::vector<std::vector<E>> g(nn);
    auto add = [&](int a, int b, double c) {
        g[a].push_back({b, c, (int)g[b].size()});
        g[b].push_back({a, 0.0, (int)g[a].size() - 1});
    };
    const double INF = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n1; ++i) add(0, row0 + i, mu1[i]);
    for (int j = 0; j < n2; ++j) add(col0 + j, 1, mu2[j]);
    add(2, 3, overflow);
    for (int i = 0; i < n1; ++i) {
        add(row0 + i, 2, INF);
        for (int j = 0; j < n2; ++j)
            if (allowed[(std::size_t)i * n2 + j]) add(row0 + i, col0 + j, INF);
    }
    for (int j = 0; j < n2; ++j) add(3, col0 + j, INF);

    const double eps = 1e-13;
    double flow = 0;
    while (true) {
        // BFS augmenting path
        std::vector<int> pre(nn, -1), pre_e(nn, -1);
        std::queue<int> q;
        q.push(0);
        pre[0] = 0;
        while (!q.empty() && pre[1] == -1) {
            int v = q.front();
            q.pop();
            for (int ei = 0; ei < (int)g[v].size(); ++ei) {
                auto& e = g[v][ei];
                if (e.cap > eps && pre[e.to] == -1) {
                    pre[e.to] = v;
                    pre_e[e.to] = ei;
                    q.push(e.to);
                }
            }
        }
        if (pre[1] == -1) break;
        double push = INF;
        for (int v = 1; v != 0; v = pre[v]) push = std::min(push, g[pre[v]][pre_e[v]].cap);
        for (int v = 1; v != 0; v = pre[v]) {
            auto& e = g[pre[v]][pre_e[v]];
            e.cap -= push;
            g[v][e.rev].cap += push;
        }
        flow += push;
    }
    return flow;
}

// min over couplings pi of max(D(pi), pi(C^c)) for a fixed correspondence,
// D(pi) = (M1 + M2)/2 - pi(total) at the optimum
double coupling_value(const std::vector<double>& mu1, const std::vector<double>& mu2,
                      const std::vector<char>& allowed) {
    double m1 = 0, m2 = 0;
    for (double v : mu1) m1 += v;
    for (double v : mu2) m2 += v;
    double half = (m1 + m2) / 2;
    auto dval = [&](double t) { return half - max_coupling_mass(mu1, mu2, allowed, t); };
    // dval decreases in t; objective max(dval(t), t) minimized where they cross
    double lo = 0, hi = std::max(m1, m2);
    if (dval(lo) <= lo) return std::max(0.0, dval(0));
    for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2;
        (dval(mid) > mid ? lo : hi) = mid;
    }
    double t = (lo + hi) / 2;
    return std::max(t, dval(t));
}

struct CliqueSearch {
    int n;
    std::vector<std::vector<char>> adj;
    int n1, n2;  // pair-vertex k encodes (k / n2, k % n2)
    const std::vector<double>*mu1, *mu2;
    double best;  // current global best (for pruning the caller updates)
    double half_dis;

    void run(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
        if (best <= half_dis + 1e-15) return;  // cannot improve at this threshold
        if (p.empty() && x.empty()) {
            report(r);
            return;
        }
        // pivot: vertex of p+x with most neighbors in p
        int pivot = -1, bestdeg = -1;
        for (int cand : p) {
            int deg = 0;
            for (int v : p) deg += adj[cand][v];
            if (deg > bestdeg) { bestdeg = deg; pivot = cand; }
        }
        for (int cand : x) {
            int deg = 0;
            for (int v : p) deg += adj[cand][v];
            if (deg > bestdeg) { bestdeg = deg; pivot = cand; }
        }
        std::vector<int> candidates;
        for (int v : p)
            if (pivot == -1 || !adj[pivot][v]) candidates.push_back(v);
        for (int v : candidates) {
            std::vector<int> p2, x2;
            for (int u : p)
                if (adj[v][u]) p2.push_back(u);
            for (int u : x)
                if (adj[v][u]) x2.push_back(u);
            r.push_back(v);
            run(r, std::move(p2), std::move(x2));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.push_back(v);
        }
    }

    void report(const std::vector<int>& clique) {
        std::vector<char> cov1(n1, 0), cov2(n2, 0);
        std::vector<char> allowed((std::size_t)n1 * n2, 0);
        for (int k : clique) {
            cov1[k / n2] = 1;
            cov2[k % n2] = 1;
            allowed[k] = 1;
        }
        for (char c : cov1)
            if (!c) return;
        for (char c : cov2)
            if (!c) return;
        double val = std::max(half_dis, coupling_value(*mu1, *mu2, allowed));
        best = std::min(best, val);
    }
};

}  // namespace

double ghp_exact(const MeasuredMetricSpace& x1, const MeasuredMetricSpace& x2) {
    if ((std::int64_t)x1.n * x2.n > 36)
        throw std::invalid_argument("exact mode capped at n1*n2 <= 36; use ghp_bounds");
    if (x1.n == 0 || x2.n == 0) throw std::invalid_argument("empty space");
    int n1 = x1.n, n2 = x2.n, np = n1 * n2;

    // pairwise distortion contributions between pair-vertices
    std::vector<double> gap((std::size_t)np * np, 0.0);
    std::vector<double> thresholds;
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) {
            double v = std::abs(x1.d(a / n2, b / n2) - x2.d(a % n2, b % n2));
            gap[(std::size_t)a * np + b] = v;
            if (b > a) thresholds.push_back(v);
        }
    thresholds.push_back(0.0);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                     thresholds.end());

    double best = std::numeric_limits<double>::infinity();
    CliqueSearch cs;
    cs.n = np;
    cs.n1 = n1;
    cs.n2 = n2;
    cs.mu1 = &x1.mass;
    cs.mu2 = &x2.mass;
    for (double v : thresholds) {
        if (v / 2 >= best) break;  // thresholds ascending: no improvement possible
        cs.adj.assign(np, std::vector<char>(np, 0));
        for (int a = 0; a < np; ++a)
            for (int b = 0; b < np; ++b)
                cs.adj[a][b] = (a != b) && gap[(std::size_t)a * np + b] <= v + 1e-12;
        cs.best = best;
        cs.half_dis = v / 2;
        std::vector<int> r, p(np), x;
        for (int k = 0; k < np; ++k) p[k] = k;
        cs.run(r, std::move(p), std::move(x));
        best = std::min(best, cs.best);
    }
    return best;
}

namespace {

// first Wasserstein distance between two weighted value collections,
// normalized to probability distributions
double wasserstein1(std::vector<std::pair<double, double>> a,
                    std::vector<std::pair<double, double>> b) {
    double wa = 0, wb = 0;
    for (auto& [v, w] : a) wa += w;
    for (auto& [v, w] : b) wb += w;
    if (wa <= 0 || wb <= 0) return 0;
    for (auto& [v, w] : a) w /= wa;
    for (auto& [v, w] : b) w = -w / wb;
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    double acc = 0, cdf_gap = 0;
    double prev = a.front().first;
    for (auto& [v, w] : a) {
        acc += std::abs(cdf_gap) * (v - prev);
        cdf_gap += w;
        prev = v;
    }
    return acc;
}

std::vector<int> farthest_point_order(const MeasuredMetricSpace& x) {
    std::vector<int> order;
    std::vector<double> mind(x.n, std::numeric_limits<double>::infinity());
    int cur = 0;  // start at heaviest point for determinism
    for (int i = 1; i < x.n; ++i)
        if (x.mass[i] > x.mass[cur]) cur = i;
    for (int step = 0; step < x.n; ++step) {
        order.push_back(cur);
        int next = -1;
        for (int i = 0; i < x.n; ++i) {
            mind[i] = std::min(mind[i], x.d(cur, i));
            if (std::find(order.begin(), order.end(), i) == order.end() &&
                (next == -1 || mind[i] > mind[next]))
                next = i;
        }
        if (next == -1) break;
        cur = next;
    }
    return order;
}

}  // namespace

std::pair<double, double> ghp_bounds(const MeasuredMetricSpace& x1,
                                     const MeasuredMetricSpace& x2) {
    // lower: half the W1 distance between mass-weighted distance distributions
    std::vector<std::pair<double, double>> v1, v2;
    for (int i = 0; i < x1.n; ++i)
        for (int j = 0; j < x1.n; ++j) v1.push_back({x1.d(i, j), x1.mass[i] * x1.mass[j]});
    for (int i = 0; i < x2.n; ++i)
        for (int j = 0; j < x2.n; ++j) v2.push_back({x2.d(i, j), x2.mass[i] * x2.mass[j]});
    double lower = 0.5 * wasserstein1(std::move(v1), std::move(v2));
    // the mass-mismatch discrepancy floor holds for every coupling
    lower = std::max(lower, 0.5 * std::abs(x1.total_mass() - x2.total_mass()));

    // upper: greedy farthest-point correspondence, objective evaluated exactly
    auto o1 = farthest_point_order(x1);
    auto o2 = farthest_point_order(x2);
    std::vector<std::pair<int, int>> corr;
    int k = std::max(x1.n, x2.n);
    for (int i = 0; i < k; ++i)
        corr.push_back({o1[std::min(i, x1.n - 1)], o2[std::min(i, x2.n - 1)]});
    double dis = distortion(corr, x1, x2);
    std::vector<char> allowed((std::size_t)x1.n * x2.n, 0);
    for (auto& [i, j] : corr) allowed[(std::size_t)i * x2.n + j] = 1;
    double upper = std::max(dis / 2, coupling_value(x1.mass, x2.mass, allowed));
    if (lower > upper) lower = upper;  // clamp, flagged by the equality
    return {lower, upper};
}

MeasuredMetricSpace blob_expand(const BlobConfig& cfg) {
    int nb = (int)cfg.blobs.size();
    if ((int)cfg.x.size() != nb || cfg.superstructure.n != nb)
        throw std::invalid_argument("blob config sizes inconsistent");
    if (cfg.junctions.size() != cfg.superstructure.edges.size())
        throw std::invalid_argument("one junction pair required per superstructure edge");

    std::vector<int> offset(nb + 1, 0);
    for (int i = 0; i < nb; ++i) offset[i + 1] = offset[i] + cfg.blobs[i].n;
    int total = offset[nb];

    // weighted auxiliary graph: complete within blobs, unit edges at junctions
    std::vector<std::vector<std::pair<int, double>>> adj(total);
    for (int i = 0; i < nb; ++i)
        for (int p = 0; p < cfg.blobs[i].n; ++p)
            for (int q = p + 1; q < cfg.blobs[i].n; ++q) {
                double w = cfg.blobs[i].d(p, q);
                adj[offset[i] + p].push_back({offset[i] + q, w});
                adj[offset[i] + q].push_back({offset[i] + p, w});
            }
    for (std::size_t e = 0; e < cfg.superstructure.edges.size(); ++e) {
        auto [u, v] = cfg.superstructure.edges[e];
        auto [pu, pv] = cfg.junctions[e];
        if (pu < 0 || pu >= cfg.blobs[u].n || pv < 0 || pv >= cfg.blobs[v].n)
            throw std::invalid_argument("junction point outside its blob");
        adj[offset[u] + pu].push_back({offset[v] + pv, 1.0});
        adj[offset[v] + pv].push_back({offset[u] + pu, 1.0});
    }

    MeasuredMetricSpace out(total);
    for (int i = 0; i < nb; ++i)
        for (int p = 0; p < cfg.blobs[i].n; ++p)
            out.mass[offset[i] + p] = cfg.x[i] * cfg.blobs[i].mass[p];

    // Dijkstra from every node
    for (int s = 0; s < total; ++s) {
        std::vector<double> dist(total, std::numeric_limits<double>::infinity());
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                            std::greater<>> pq;
        dist[s] = 0;
        pq.push({0, s});
        while (!pq.empty()) {
            auto [dv, v] = pq.top();
            pq.pop();
            if (dv > dist[v]) continue;
            for (auto& [u, w] : adj[v])
                if (dv + w < dist[u]) {
                    dist[u] = dv + w;
                    pq.push({dist[u], u});
                }
        }
        for (int t = 0; t < total; ++t)
            out.d(s, t) = std::isinf(dist[t]) ? -1 : dist[t];
    }
    for (double v : out.dist)
        if (v < 0) throw std::invalid_argument("superstructure must be connected");
    return out;
}

double theorem32_scaling(const std::vector<double>& x, const std::vector<double>& u) {
    if (x.size() != u.size()) throw std::invalid_argument("weight/summary size mismatch");
    double s2 = 0, xu = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s2 += x[i] * x[i];
        xu += x[i] * x[i] * u[i];
    }
    return s2 * s2 / (s2 + xu);
}

double blob_mean_distance(const MeasuredMetricSpace& blob) {
    return blob.mean_distance();
}

}  // namespace critwin
