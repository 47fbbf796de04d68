#include "critwin/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace critwin {

WeightedVertexSet::WeightedVertexSet(std::vector<double> weights) : x(std::move(weights)) {
    if (x.empty()) throw std::invalid_argument("empty weight vector");
    x_max = x[0];
    x_min = x[0];
    for (double w : x) {
        if (w <= 0) throw std::invalid_argument("weights must be positive");
        sigma1 += w;
        sigma2 += w * w;
        sigma3 += w * w * w;
        x_max = std::max(x_max, w);
        x_min = std::min(x_min, w);
    }
}

void Kernel::validate() const {
    if (K <= 0 || (int)kappa.size() != K || (int)mu.size() != K)
        throw std::invalid_argument("kernel dimensions inconsistent");
    double msum = 0;
    for (int i = 0; i < K; ++i) {
        if ((int)kappa[i].size() != K) throw std::invalid_argument("kappa not square");
        if (mu[i] <= 0) throw std::invalid_argument("mu entries must be positive");
        msum += mu[i];
        for (int j = 0; j < K; ++j) {
            if (kappa[i][j] <= 0) throw std::invalid_argument("kappa entries must be positive");
            if (std::abs(kappa[i][j] - kappa[j][i]) > 1e-12)
                throw std::invalid_argument("kappa must be symmetric");
        }
    }
    if (std::abs(msum - 1.0) > 1e-9) throw std::invalid_argument("mu must sum to 1");
    if (b) {
        double bsum = 0;
        for (double v : *b) bsum += v;
        if (std::abs(bsum) > 1e-9) throw std::invalid_argument("b must sum to 0");
    }
}

std::string Kernel::to_json() const {
    nlohmann::json j;
    j["K"] = K;
    j["kappa"] = kappa;
    j["mu"] = mu;
    if (A) j["A"] = *A;
    if (b) j["b"] = *b;
    return j.dump(2);
}

Kernel Kernel::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Kernel k;
    k.K = j.at("K").get<int>();
    k.kappa = j.at("kappa").get<std::vector<std::vector<double>>>();
    k.mu = j.at("mu").get<std::vector<double>>();
    if (j.contains("A")) k.A = j["A"].get<std::vector<std::vector<double>>>();
    if (j.contains("b")) k.b = j["b"].get<std::vector<double>>();
    k.validate();
    return k;
}

// --- G(x,q) ---------------------------------------------------------------

namespace {

// skip-sample pairs (u, order[j]) for j in (start, end) where each pair has
// probability p(j) <= p_bound; calls emit(j) for accepted j.
template <class P, class Emit>
void skip_sample_row(double p_bound, int start, int end, Rng& rng, P p_of, Emit emit) {
    if (p_bound <= 0) return;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double log1mb = std::log1p(-std::min(p_bound, 1.0 - 1e-16));
    int j = start;
    while (true) {
        double u = unif(rng);
        // geometric skip under the bound probability
        int skip = (p_bound >= 1.0 - 1e-16) ? 0 : (int)std::floor(std::log(1.0 - u) / log1mb);
        if (skip < 0) skip = 0;
        j += 1 + skip;
        if (j >= end) return;
        double p = p_of(j);
        if (p >= p_bound || unif(rng) * p_bound < p) emit(j);
    }
}

}  // namespace

Graph gen_gxq(const WeightedVertexSet& w, double q, Rng& rng) {
    if (q <= 0) throw std::invalid_argument("q must be positive");
    int n = w.n();
    Graph g(n);
    // weight-sorted order (descending) so the per-row bound is tight
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return w.x[a] > w.x[b]; });
    for (int i = 0; i + 1 < n; ++i) {
        int u = order[i];
        double bound = 1.0 - std::exp(-q * w.x[u] * w.x[order[i + 1]]);
        skip_sample_row(
            bound, i, n, rng,
            [&](int j) { return 1.0 - std::exp(-q * w.x[u] * w.x[order[j]]); },
            [&](int j) { g.add_edge(u, order[j]); });
    }
    return g;
}

Graph gen_er(int n, double t, Rng& rng) {
    if (t < 0) throw std::invalid_argument("time must be nonnegative");
    Graph g(n);
    if (t == 0 || n < 2) return g;
    double p = 1.0 - std::exp(-t / n);
    for (int i = 0; i + 1 < n; ++i) {
        skip_sample_row(p, i, n, rng, [&](int) { return p; },
                        [&](int j) { g.add_edge(i, j); });
    }
    return g;
}

// --- IRG ------------------------------------------------------------------

std::vector<int> irg_types_rounded(const Kernel& kernel, int n) {
    std::vector<int> counts(kernel.K);
    int assigned = 0;
    for (int k = 0; k + 1 < kernel.K; ++k) {
        counts[k] = (int)std::llround(kernel.mu[k] * n);
        assigned += counts[k];
    }
    counts[kernel.K - 1] = n - assigned;
    std::vector<int> types;
    types.reserve(n);
    for (int k = 0; k < kernel.K; ++k)
        for (int c = 0; c < counts[k]; ++c) types.push_back(k);
    return types;
}

std::vector<int> irg_types_iid(const Kernel& kernel, int n, Rng& rng) {
    std::discrete_distribution<int> d(kernel.mu.begin(), kernel.mu.end());
    std::vector<int> types(n);
    for (auto& t : types) t = d(rng);
    return types;
}

Graph gen_irg(const Kernel& kernel, const std::vector<int>& types,
              const IrgWindow& window, Rng& rng) {
    kernel.validate();
    int n = (int)types.size();
    int K = kernel.K;
    for (int t : types)
        if (t < 0 || t >= K) throw std::invalid_argument("type out of range");

    // effective kernel for this n
    std::vector<std::vector<double>> kn = kernel.kappa;
    double n13 = std::cbrt((double)n);
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) {
            if (window.use_perturbation && kernel.A) kn[a][b] += (*kernel.A)[a][b] / n13;
            if (!window.use_perturbation) kn[a][b] *= (1.0 + window.lambda / n13);
            if (window.subcritical_shift) kn[a][b] -= std::pow((double)n, -window.delta);
            if (kn[a][b] < 0)
                throw std::invalid_argument("effective kernel entry negative for this n");
            if (kn[a][b] / n > 1.0)
                throw std::invalid_argument("kernel too large for given n");
        }

    std::vector<std::vector<int>> by_type(K);
    for (int v = 0; v < n; ++v) by_type[types[v]].push_back(v);

    Graph g(n);
    for (int a = 0; a < K; ++a) {
        for (int b = a; b < K; ++b) {
            double p = 1.0 - std::exp(-kn[a][b] / n);
            if (p <= 0) continue;
            auto& va = by_type[a];
            auto& vb = by_type[b];
            if (a == b) {
                int m = (int)va.size();
                for (int i = 0; i + 1 < m; ++i)
                    skip_sample_row(p, i, m, rng, [&](int) { return p; },
                                    [&](int j) { g.add_edge(va[i], va[j]); });
            } else {
                // bipartite block, flattened pair index
                std::int64_t total = (std::int64_t)va.size() * (std::int64_t)vb.size();
                if (total == 0) continue;
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                double log1mp = std::log1p(-std::min(p, 1.0 - 1e-16));
                std::int64_t idx = -1;
                while (true) {
                    double u = unif(rng);
                    std::int64_t skip =
                        (p >= 1.0 - 1e-16) ? 0 : (std::int64_t)std::floor(std::log(1.0 - u) / log1mp);
                    if (skip < 0) skip = 0;
                    idx += 1 + skip;
                    if (idx >= total) break;
                    g.add_edge(va[idx / (std::int64_t)vb.size()],
                               vb[idx % (std::int64_t)vb.size()]);
                }
            }
        }
    }
    return g;
}

// --- configuration model --------------------------------------------------

Graph cm_uniform_match(const std::vector<int>& degrees, Rng& rng) {
    std::int64_t total = std::accumulate(degrees.begin(), degrees.end(), (std::int64_t)0);
    if (total % 2 != 0) throw std::invalid_argument("stub total must be even");
    std::vector<int> stubs;
    stubs.reserve(total);
    for (int v = 0; v < (int)degrees.size(); ++v)
        for (int d = 0; d < degrees[v]; ++d) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    Graph g((int)degrees.size());
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) g.add_edge(stubs[i], stubs[i + 1]);
    return g;
}

HalfEdgeState cm_dynamic(const std::vector<int>& degrees, double t_end, Rng& rng,
                         const std::function<void(const HalfEdgeState&)>& on_event) {
    HalfEdgeState st;
    st.n = (int)degrees.size();
    st.degrees = degrees;
    st.uf.reset(st.n);
    st.free_in_comp.assign(st.n, 0);
    std::vector<int> stubs;  // alive stub registry: vertex ids, swap-remove
    for (int v = 0; v < st.n; ++v) {
        st.free_in_comp[v] = degrees[v];
        for (int d = 0; d < degrees[v]; ++d) stubs.push_back(v);
    }
    st.alive = (std::int64_t)stubs.size();
    for (int v = 0; v < st.n; ++v) {
        double f = (double)degrees[v];
        st.sum_f2 += f * f;
        st.sum_f3 += f * f * f;
        st.sum_fc += f;
    }

    std::exponential_distribution<double> exp1(1.0);
    while (st.alive >= 2) {
        double dt = exp1(rng) / (double)st.alive;
        if (st.time + dt > t_end) {
            st.time = t_end;
            break;
        }
        st.time += dt;
        // ringing stub uniform; partner uniform among the other alive-1
        std::uniform_int_distribution<std::int64_t> pick(0, st.alive - 1);
        std::int64_t i = pick(rng);
        std::uniform_int_distribution<std::int64_t> pick2(0, st.alive - 2);
        std::int64_t j = pick2(rng);
        if (j >= i) ++j;
        int u = stubs[i], v = stubs[j];
        // swap-remove the two stubs (larger index first)
        std::int64_t hi = std::max(i, j), lo = std::min(i, j);
        stubs[hi] = stubs[st.alive - 1];
        stubs.pop_back();
        stubs[lo] = stubs[st.alive - 2];
        stubs.pop_back();
        st.alive -= 2;

        int ru = st.uf.find(u), rv = st.uf.find(v);
        if (ru == rv) {
            double f = (double)st.free_in_comp[ru];
            double c = (double)st.uf.size[ru];
            st.sum_f2 += (f - 2) * (f - 2) - f * f;
            st.sum_f3 += (f - 2) * (f - 2) * (f - 2) - f * f * f;
            st.sum_fc += -2.0 * c;
            st.free_in_comp[ru] -= 2;
        } else {
            double fu = (double)st.free_in_comp[ru], fv = (double)st.free_in_comp[rv];
            double cu = (double)st.uf.size[ru], cv = (double)st.uf.size[rv];
            double fn = fu + fv - 2, cn = cu + cv;
            st.sum_f2 += fn * fn - fu * fu - fv * fv;
            st.sum_f3 += fn * fn * fn - fu * fu * fu - fv * fv * fv;
            st.sum_fc += fn * cn - fu * cu - fv * cv;
            int r = st.uf.unite(u, v);
            st.free_in_comp[r] = (std::int64_t)fn;
        }
        st.formed_edges.emplace_back(u, v);
        if (on_event) on_event(st);
    }
    if (st.time < t_end && st.alive < 2) st.time = t_end;
    return st;
}

std::vector<int> percolate_stub_counts(const std::vector<int>& degrees, double p, Rng& rng) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must be in [0,1]");
    std::vector<int> kept(degrees.size(), 0);
    std::int64_t total = 0;
    for (std::size_t v = 0; v < degrees.size(); ++v) {
        std::binomial_distribution<int> bin(degrees[v], p);
        kept[v] = degrees[v] > 0 ? bin(rng) : 0;
        total += kept[v];
    }
    if (total % 2 != 0) {
        // drop one uniformly chosen retained stub
        std::uniform_int_distribution<std::int64_t> pick(0, total - 1);
        std::int64_t target = pick(rng);
        for (std::size_t v = 0; v < kept.size(); ++v) {
            if (target < kept[v]) {
                kept[v] -= 1;
                break;
            }
            target -= kept[v];
        }
    }
    return kept;
}

Graph cm_percolate_stubs(const std::vector<int>& degrees, double p, Rng& rng) {
    return cm_uniform_match(percolate_stub_counts(degrees, p, rng), rng);
}

Graph cm_percolate_edges(const Graph& g, double p, Rng& rng) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must be in [0,1]");
    Graph out(g.n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto& e : g.edges)
        if (unif(rng) < p) out.add_edge(e.first, e.second);
    return out;
}

// --- bounded-size rules ----------------------------------------------------

bool BSRRule::contains(int c1, int c2, int c3, int c4) const {
    for (auto& f : F) {
        int q[4] = {c1, c2, c3, c4};
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            if (f[i] != -1 && f[i] != q[i]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

BsrResult bsr_run(const BSRRule& rule, int n, double t_end, Rng& rng) {
    BsrResult res;
    res.graph = Graph(n);
    UnionFind uf(n);
    std::exponential_distribution<double> ev(n / 2.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    double t = 0;
    auto size_class = [&](int v) {
        std::int64_t s = uf.size[uf.find(v)];
        return s <= rule.K ? (int)s : 0;  // 0 stands for omega
    };
    while (true) {
        t += ev(rng);
        if (t > t_end) break;
        int v1 = pick(rng), v2 = pick(rng), v3 = pick(rng), v4 = pick(rng);
        ++res.events;
        if (rule.contains(size_class(v1), size_class(v2), size_class(v3), size_class(v4))) {
            res.graph.add_edge(v1, v2);
            uf.unite(v1, v2);
            ++res.first_edge_events;
        } else {
            res.graph.add_edge(v3, v4);
            uf.unite(v3, v4);
        }
    }
    return res;
}

BsrResult bf_run(int n, double t_end, Rng& rng) {
    BSRRule bf;
    bf.K = 1;
    bf.F = {{1, 1, -1, -1}};
    return bsr_run(bf, n, t_end, rng);
}

std::vector<int> read_degree_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<int> d;
    int x;
    while (f >> x) d.push_back(x);
    return d;
}

}  // namespace critwin
