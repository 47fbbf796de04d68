#include "critwin/trees.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "critwin/limits.hpp"

namespace critwin {

namespace {

void check_pvec(const std::vector<double>& p) {
    double tot = 0;
    for (double v : p) {
        if (v <= 0) throw std::invalid_argument("p must be strictly positive");
        tot += v;
    }
    if (std::abs(tot - 1.0) > 1e-9) throw std::invalid_argument("p must sum to 1");
}

void key_dfs(const PTree& t, int v, std::string& out) {
    out += std::to_string(v);
    out += '(';
    for (int c : t.children[v]) key_dfs(t, c, out);
    out += ')';
}

}  // namespace

std::string PTree::key() const {
    std::string out;
    key_dfs(*this, root, out);
    return out;
}

PTree sample_ptree(const std::vector<double>& p, Rng& rng) {
    check_pvec(p);
    int m = (int)p.size();
    PTree t;
    t.n = m;
    t.p = p;
    t.children.assign(m, {});
    std::discrete_distribution<int> draw(p.begin(), p.end());
    std::vector<char> seen(m, 0);
    int prev = draw(rng);
    t.root = prev;
    seen[prev] = 1;
    int found = 1;
    while (found < m) {
        int j = draw(rng);
        if (!seen[j]) {
            seen[j] = 1;
            t.children[prev].push_back(j);
            ++found;
        }
        prev = j;
    }
    // the appearance order size-biases each child list; the ordered law wants
    // a uniform planar order, so reshuffle children independently
    for (auto& kids : t.children) std::shuffle(kids.begin(), kids.end(), rng);
    return t;
}

// Enumeration grows trees one vertex at a time by attaching an unused label
// as a new last child of an existing vertex; every ordered tree is reached
// (multiple insertion orders collapse by canonical key) and its probability
// prod p_v^{d_v}/d_v! is evaluated directly from the degrees.
namespace {

void grow(const std::vector<double>& p, PTree& t, unsigned used,
          std::vector<std::pair<PTree, double>>& out) {
    int m = (int)p.size();
    if ((int)std::popcount(used) == m) {
        double prob = 1.0;
        for (int v = 0; v < m; ++v) {
            int d = (int)t.children[v].size();
            for (int k = 1; k <= d; ++k) prob *= p[v] / k;
        }
        out.push_back({t, prob});
        return;
    }
    for (int c = 0; c < m; ++c) {
        if (used & (1u << c)) continue;
        for (int parent = 0; parent < m; ++parent) {
            if (!(used & (1u << parent))) continue;
            t.children[parent].push_back(c);
            grow(p, t, used | (1u << c), out);
            t.children[parent].pop_back();
        }
    }
}

}  // namespace

std::vector<std::pair<PTree, double>> enumerate_ptrees(const std::vector<double>& p) {
    check_pvec(p);
    int m = (int)p.size();
    if (m > 6) throw std::invalid_argument("enumeration capped at m <= 6");
    std::vector<std::pair<PTree, double>> raw;
    PTree t;
    t.n = m;
    t.p = p;
    t.children.assign(m, {});
    for (int r = 0; r < m; ++r) {
        t.root = r;
        grow(p, t, 1u << r, raw);
    }
    // the growth procedure reaches each ordered tree once per admissible
    // insertion order; collapse duplicates by canonical key, averaging the
    // (identical) probability and counting multiplicity
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        return a.first.key() < b.first.key();
    });
    std::vector<std::pair<PTree, double>> out;
    std::size_t i = 0;
    double total = 0;
    while (i < raw.size()) {
        std::size_t j = i;
        std::string k = raw[i].first.key();
        while (j < raw.size() && raw[j].first.key() == k) ++j;
        out.push_back(raw[i]);
        total += raw[i].second;
        i = j;
    }
    // the p-tree law is already normalized; guard against bookkeeping errors
    if (std::abs(total - 1.0) > 1e-9)
        throw std::logic_error("ordered tree law does not normalize");
    // root probability p_root is implicit in eq-form prod p_v^{d_v}/d_v!
    // only through degrees; nothing further to do
    return out;
}

std::vector<std::pair<int, int>> permitted_edges(const PTree& t) {
    std::vector<std::pair<int, int>> out;
    std::vector<int> stack = {t.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int other : stack) out.push_back({v, other});
        // push children so the first (planar-leftmost) child is explored next
        for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

double tilt_weight(const PTree& t, double a) {
    if (a <= 0) throw std::invalid_argument("tilt parameter must be positive");
    double log_l = 0;
    for (int v = 0; v < t.n; ++v)
        for (int c : t.children[v]) {
            double x = a * t.p[v] * t.p[c];
            log_l += std::log(std::expm1(x) / x);
        }
    for (auto& [u, v] : permitted_edges(t)) log_l += a * t.p[u] * t.p[v];
    return std::exp(log_l);
}

std::vector<PTree> sample_tilted_ptrees(const std::vector<double>& p, double a,
                                        int count, Rng& rng) {
    check_pvec(p);
    std::size_t pool_n = std::max<std::size_t>(1024, 4 * (std::size_t)count);
    const std::size_t cap = 1u << 24;
    while (true) {
        std::vector<PTree> pool;
        std::vector<double> w;
        pool.reserve(pool_n);
        w.reserve(pool_n);
        for (std::size_t i = 0; i < pool_n; ++i) {
            pool.push_back(sample_ptree(p, rng));
            w.push_back(tilt_weight(pool.back(), a));
        }
        double sw = std::accumulate(w.begin(), w.end(), 0.0);
        double sw2 = 0;
        for (double v : w) sw2 += v * v;
        double ess = sw * sw / sw2;
        if (ess >= 100.0) {
            std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
            std::vector<PTree> out;
            out.reserve(count);
            for (int i = 0; i < count; ++i) out.push_back(pool[pick(rng)]);
            return out;
        }
        if (pool_n >= cap)
            throw std::runtime_error("effective sample size target unreachable");
        pool_n *= 2;
    }
}

PTree sample_tilted_ptree(const std::vector<double>& p, double a, Rng& rng) {
    return sample_tilted_ptrees(p, a, 1, rng)[0];
}

namespace {

Graph finish_connected(const PTree& t, double a, Rng& rng) {
    Graph g(t.n);
    for (int v = 0; v < t.n; ++v)
        for (int c : t.children[v]) g.add_edge(v, c);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto& [u, v] : permitted_edges(t))
        if (unif(rng) < -std::expm1(-a * t.p[u] * t.p[v])) g.add_edge(u, v);
    return g;
}

}  // namespace

Graph connected_gxq(const std::vector<double>& p, double a, Rng& rng) {
    if (p.size() == 1) return Graph(1);
    if (p.size() == 2) {
        Graph g(2);
        g.add_edge(0, 1);
        return g;
    }
    return finish_connected(sample_tilted_ptree(p, a, rng), a, rng);
}

std::vector<Graph> connected_gxq_batch(const std::vector<double>& p, double a,
                                       int count, Rng& rng) {
    std::vector<Graph> out;
    out.reserve(count);
    if (p.size() <= 2) {
        for (int i = 0; i < count; ++i) out.push_back(connected_gxq(p, a, rng));
        return out;
    }
    auto trees = sample_tilted_ptrees(p, a, count, rng);
    for (auto& t : trees) out.push_back(finish_connected(t, a, rng));
    return out;
}

Graph partition_then_connect(const WeightedVertexSet& w, double q, Rng& rng) {
    if (q <= 0) throw std::invalid_argument("q must be positive");
    Graph stage1 = gen_gxq(w, q, rng);
    auto decomp = components(stage1);
    Graph out(w.n());
    for (auto& comp : decomp.components) {
        if (comp.size() == 1) continue;
        double tot = 0;
        for (int v : comp) tot += w.x[v];
        std::vector<double> p;
        p.reserve(comp.size());
        for (int v : comp) p.push_back(w.x[v] / tot);
        Graph internal = connected_gxq(p, q * tot * tot, rng);
        for (auto& [a, b] : internal.edges) out.add_edge(comp[a], comp[b]);
    }
    return out;
}

double ExcursionPath::at(double s) const {
    if (s <= 0) return h.front();
    if (s >= l) return h.back();
    double idx = s / dt;
    std::size_t lo = (std::size_t)idx;
    if (lo + 1 >= h.size()) return h.back();
    double frac = idx - lo;
    return h[lo] * (1 - frac) + h[lo + 1] * frac;
}

double ExcursionPath::area() const {
    double acc = 0;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) acc += (h[i] + h[i + 1]) / 2;
    return acc * dt;
}

ExcursionPath sample_brownian_excursion(double l, Rng& rng, int steps) {
    if (l <= 0 || steps < 2) throw std::invalid_argument("bad excursion parameters");
    double dt = l / steps;
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
    std::vector<double> walk(steps + 1, 0.0);
    for (int i = 1; i <= steps; ++i) walk[i] = walk[i - 1] + gauss(rng);
    // bridge by linear drift correction, then Vervaat rotation at the argmin
    for (int i = 0; i <= steps; ++i) walk[i] -= walk[steps] * i / (double)steps;
    int arg = 0;
    for (int i = 1; i <= steps; ++i)
        if (walk[i] < walk[arg]) arg = i;
    ExcursionPath e;
    e.l = l;
    e.dt = dt;
    e.h.resize(steps + 1);
    for (int i = 0; i <= steps; ++i)
        e.h[i] = walk[(arg + i) % steps] - walk[arg];
    e.h[0] = 0;
    e.h[steps] = 0;
    return e;
}

std::vector<ExcursionPath> tilt_excursions(double l, double theta, int count,
                                           Rng& rng, int steps) {
    std::size_t pool_n = std::max<std::size_t>(512, 4 * (std::size_t)count);
    const std::size_t cap = 1u << 22;
    while (true) {
        std::vector<ExcursionPath> pool;
        std::vector<double> logw;
        pool.reserve(pool_n);
        for (std::size_t i = 0; i < pool_n; ++i) {
            pool.push_back(sample_brownian_excursion(l, rng, steps));
            logw.push_back(theta * pool.back().area());
        }
        double mx = *std::max_element(logw.begin(), logw.end());
        std::vector<double> w(logw.size());
        double sw = 0, sw2 = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = std::exp(logw[i] - mx);
            sw += w[i];
            sw2 += w[i] * w[i];
        }
        if (sw * sw / sw2 >= 100.0) {
            std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
            std::vector<ExcursionPath> out;
            out.reserve(count);
            for (int i = 0; i < count; ++i) out.push_back(pool[pick(rng)]);
            return out;
        }
        if (pool_n >= cap)
            throw std::runtime_error("effective sample size target unreachable");
        pool_n *= 2;
    }
}

MeasuredMetricSpace real_tree_metric(const ExcursionPath& h,
                                     const std::vector<double>& points,
                                     double total_mass) {
    int k = (int)points.size();
    MeasuredMetricSpace s(k);
    for (double p : points)
        if (p < 0 || p > h.l) throw std::invalid_argument("point outside [0, l]");
    for (int i = 0; i < k; ++i) s.mass[i] = total_mass / k;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            double a = std::min(points[i], points[j]);
            double b = std::max(points[i], points[j]);
            std::size_t lo = (std::size_t)std::ceil(a / h.dt);
            std::size_t hi = (std::size_t)std::floor(b / h.dt);
            double mn = std::min(h.at(a), h.at(b));
            for (std::size_t g = lo; g <= hi && g < h.h.size(); ++g)
                mn = std::min(mn, h.h[g]);
            double d = h.at(points[i]) + h.at(points[j]) - 2 * mn;
            s.d(i, j) = d;
            s.d(j, i) = d;
        }
    return s;
}

MeasuredMetricSpace shortcut_identify(const ExcursionPath& h,
                                      const std::vector<double>& points,
                                      const ExcursionPath& g, double total_mass,
                                      Rng& rng, int* shortcut_count) {
    // rate-one Poisson points (x, y) under the ceiling g
    double area = g.area();
    int np = std::poisson_distribution<int>(area)(rng);
    std::uniform_real_distribution<double> ux(0.0, g.l), uy(0.0, 1.0);
    std::vector<std::pair<double, double>> glue;  // (x, r(x, y))
    for (int i = 0; i < np; ++i) {
        double x, y;
        do {  // rejection from the box [0,l] x [0, max g]
            x = ux(rng);
            y = uy(rng) * (*std::max_element(g.h.begin(), g.h.end()));
        } while (y >= g.at(x));
        // r(x,y) = first grid point to the right where g drops to y
        double r = g.l;
        for (std::size_t gi = (std::size_t)std::ceil(x / g.dt); gi < g.h.size(); ++gi)
            if (g.h[gi] <= y) { r = gi * g.dt; break; }
        glue.push_back({x, r});
    }
    if (shortcut_count) *shortcut_count = (int)glue.size();

    std::vector<double> all = points;
    for (auto& [x, r] : glue) {
        all.push_back(x);
        all.push_back(r);
    }
    if (all.size() > 512) throw std::invalid_argument("re-closure capped at 512 points");
    MeasuredMetricSpace s = real_tree_metric(h, all, 1.0);
    // measure lives on the original sample only; glue points carry zero mass
    for (int i = 0; i < s.n; ++i)
        s.mass[i] = i < (int)points.size() ? total_mass / points.size() : 0.0;
    // zero-distance gluing followed by Floyd-Warshall re-closure
    for (std::size_t gi = 0; gi < glue.size(); ++gi) {
        int a = (int)points.size() + 2 * (int)gi;
        s.d(a, a + 1) = 0;
        s.d(a + 1, a) = 0;
    }
    for (int k = 0; k < s.n; ++k)
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j)
                if (s.d(i, k) + s.d(k, j) < s.d(i, j)) {
                    s.d(i, j) = s.d(i, k) + s.d(k, j);
                    s.d(j, i) = s.d(i, j);
                }
    return s;
}

std::vector<MeasuredMetricSpace> sample_crit(double lambda, int k, Rng& rng,
                                             int n_points) {
    auto exc = sample_parabolic_excursions(lambda, rng);
    if ((int)exc.size() < k)
        throw std::runtime_error("fewer excursions than requested components");
    std::vector<MeasuredMetricSpace> out;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < k; ++i) {
        double gamma = exc[i].length;
        ExcursionPath e = tilt_excursions(gamma, 1.0, 1, rng)[0];
        ExcursionPath h = e;
        for (auto& v : h.h) v *= 2;  // tree metric source 2*e, ceiling e
        std::vector<double> pts(n_points);
        for (auto& p : pts) p = unif(rng) * gamma;
        out.push_back(shortcut_identify(h, pts, e, gamma, rng));
    }
    return out;
}

}  // namespace critwin
