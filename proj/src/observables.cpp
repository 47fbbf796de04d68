#include "critwin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace critwin {

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string SusceptibilityRecord::csv_header() {
    return "t,s1,s2,s3,g,D,s2star,I,diam";
}

std::string SusceptibilityRecord::csv_row() const {
    std::string out;
    const double vals[] = {t, s1, s2, s3, g, D, s2_star, I, diam_max};
    for (int i = 0; i < 9; ++i) {
        if (i) out += ',';
        out += format_sig12(vals[i]);
    }
    return out;
}

SusceptibilityRecord vertex_susceptibilities(const ComponentDecomposition& decomp,
                                             const std::vector<ComponentStats>& stats,
                                             int n, double t) {
    if (decomp.components.size() != stats.size())
        throw std::invalid_argument("decomposition/stats size mismatch");
    SusceptibilityRecord r;
    r.t = t;
    for (auto& st : stats) {
        double c = (double)st.size;
        r.s1 += c;
        r.s2 += c * c;
        r.s3 += c * c * c;
        r.D += st.distance_sum;
        r.I = std::max(r.I, c);
        r.diam_max = std::max(r.diam_max, (double)st.diameter);
    }
    r.s1 /= n;
    r.s2 /= n;
    r.s3 /= n;
    r.D /= n;
    r.s2_star = r.s2;
    return r;
}

SusceptibilityRecord free_edge_susceptibilities(const HalfEdgeState& state,
                                                bool with_distances) {
    SusceptibilityRecord r;
    r.t = state.time;
    int n = state.n;
    r.s1 = (double)state.alive / n;
    r.s2 = state.sum_f2 / n;
    r.s3 = state.sum_f3 / n;
    r.g = state.sum_fc / n;

    UnionFind uf = state.uf;  // find() path-compresses, keep the input const
    std::vector<std::vector<int>> members(n);
    for (int v = 0; v < n; ++v) members[uf.find(v)].push_back(v);
    for (int root = 0; root < n; ++root) {
        if (members[root].empty()) continue;
        double c = (double)members[root].size();
        r.s2_star += c * c;
        r.I = std::max(r.I, c);
    }
    r.s2_star /= n;

    if (with_distances) {
        // free-stub counts per vertex
        std::vector<std::int64_t> used(n, 0);
        std::vector<std::vector<int>> adj(n);
        for (auto& e : state.formed_edges) {
            used[e.first] += 1;
            used[e.second] += 1;
            if (e.first != e.second) {
                adj[e.first].push_back(e.second);
                adj[e.second].push_back(e.first);
            }
        }
        for (auto& nb : adj) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        std::vector<std::int64_t> f(n);
        for (int v = 0; v < n; ++v) f[v] = state.degrees[v] - used[v];

        std::vector<int> dist(n, -1);
        std::vector<int> queue;
        for (int root = 0; root < n; ++root) {
            auto& comp = members[root];
            if (comp.size() < 2) continue;
            std::int64_t diam = 0;
            for (int s : comp) {
                queue.clear();
                dist[s] = 0;
                queue.push_back(s);
                double acc = 0;
                for (std::size_t head = 0; head < queue.size(); ++head) {
                    int v = queue[head];
                    if (f[s] > 0 && f[v] > 0) acc += (double)f[s] * f[v] * dist[v];
                    if (dist[v] > diam) diam = dist[v];
                    for (int u : adj[v])
                        if (dist[u] == -1) {
                            dist[u] = dist[v] + 1;
                            queue.push_back(u);
                        }
                }
                r.D += acc;
                for (int v : queue) dist[v] = -1;
            }
            r.diam_max = std::max(r.diam_max, (double)diam);
        }
        r.D /= n;
    }
    return r;
}

std::vector<int> size_biased_order(const std::vector<double>& weights, Rng& rng) {
    int n = (int)weights.size();
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) {
        if (weights[i] <= 0) throw std::invalid_argument("weights must be positive");
        xi[i] = std::exponential_distribution<double>(weights[i])(rng);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return xi[a] < xi[b]; });
    return order;
}

AldousWalkResult aldous_walk(const WeightedVertexSet& w, double q, Rng& rng) {
    int n = w.n();
    AldousWalkResult res;
    res.graph = Graph(n);
    std::vector<char> discovered(n, 0);
    // examined[u*n+v] marks vertex pairs whose edge indicator was already
    // revealed during the exploration (small-n usage only)
    std::vector<char> examined((std::size_t)n * n, 0);
    auto mark = [&](int a, int b) {
        examined[(std::size_t)a * n + b] = 1;
        examined[(std::size_t)b * n + a] = 1;
    };

    std::vector<int> queue;  // discovered, not yet explored
    std::vector<int> comp_of(n, -1);
    double z = 0;
    int explored = 0;
    int comp_id = -1;
    std::size_t comp_first_step = 0;

    while (explored < n) {
        if (queue.empty()) {
            // size-biased start among undiscovered vertices
            double tot = 0;
            for (int v = 0; v < n; ++v)
                if (!discovered[v]) tot += w.x[v];
            double u = std::uniform_real_distribution<double>(0.0, tot)(rng);
            int start = -1;
            for (int v = 0; v < n; ++v) {
                if (discovered[v]) continue;
                u -= w.x[v];
                if (u <= 0) { start = v; break; }
            }
            if (start == -1)
                for (int v = n - 1; v >= 0; --v)
                    if (!discovered[v]) { start = v; break; }
            discovered[start] = 1;
            queue.push_back(start);
            ++comp_id;
            res.trace.components.push_back({});
            res.component_masses.push_back(0);
            comp_first_step = res.trace.z.size();
            z -= 1;  // new-component penalty, so z tracks actives - components
        }
        int v = queue.front();
        queue.erase(queue.begin());
        comp_of[v] = comp_id;
        res.component_masses[comp_id] += w.x[v];
        res.trace.components[comp_id].mass += w.x[v];
        res.trace.components[comp_id].items += 1;
        res.trace.order.push_back(v);
        ++explored;

        // children among undiscovered vertices, ordered by increasing xi
        std::vector<std::pair<double, int>> kids;
        for (int j = 0; j < n; ++j) {
            if (discovered[j]) continue;
            mark(v, j);
            double xi = std::exponential_distribution<double>(q * w.x[j])(rng);
            if (xi <= w.x[v]) kids.emplace_back(xi, j);
        }
        std::sort(kids.begin(), kids.end());
        for (auto& [xi, j] : kids) {
            discovered[j] = 1;
            queue.push_back(j);
            res.graph.add_edge(v, j);
        }
        z += (double)kids.size() - 1;
        res.trace.z.push_back(z);
        res.trace.eta.push_back((double)kids.size());
        res.trace.theta.push_back(0);
        (void)comp_first_step;
    }

    // pairs never reached by the exploration lie inside components; reveal them now
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (examined[(std::size_t)u * n + v]) continue;
            if (comp_of[u] != comp_of[v])
                throw std::logic_error("unexamined pair across components");
            if (unif(rng) < 1.0 - std::exp(-q * w.x[u] * w.x[v])) {
                res.graph.add_edge(u, v);
                res.trace.components[comp_of[u]].surplus += 1;
            }
        }
    return res;
}

WalkTrace riordan_walk(const std::vector<int>& blob_a,
                       const std::vector<double>& blob_sizes, Rng& rng) {
    if (blob_a.size() != blob_sizes.size())
        throw std::invalid_argument("blob arrays must have equal length");
    int m = (int)blob_a.size();
    std::vector<int> a = blob_a;
    std::int64_t total = 0;
    for (int v = 0; v < m; ++v) {
        if (a[v] < 0) throw std::invalid_argument("negative stub count");
        total += a[v];
    }
    if (total % 2 == 1) {
        // drop one uniformly chosen stub (same fix as stub percolation)
        std::int64_t pick = std::uniform_int_distribution<std::int64_t>(0, total - 1)(rng);
        for (int v = 0; v < m; ++v) {
            if (pick < a[v]) { a[v] -= 1; break; }
            pick -= a[v];
        }
        total -= 1;
    }

    // stub ids laid out blob by blob; uniform matching via shuffle
    std::vector<int> blob_of(total);
    std::vector<std::vector<int>> stubs_of(m);
    {
        int s = 0;
        for (int v = 0; v < m; ++v)
            for (int k = 0; k < a[v]; ++k) {
                blob_of[s] = v;
                stubs_of[v].push_back(s);
                ++s;
            }
    }
    std::vector<int> perm(total);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> partner(total, -1);
    for (std::int64_t k = 0; k + 1 < total; k += 2) {
        partner[perm[k]] = perm[k + 1];
        partner[perm[k + 1]] = perm[k];
    }

    WalkTrace tr;
    std::vector<char> visited(m, 0), used(total, 0), is_active(total, 0);
    std::vector<int> actives;  // FIFO frontier of unpaired stubs
    std::size_t active_head = 0;
    double z = 0;
    std::size_t start_scan = 0;  // next candidate in perm for a component start
    int explored = 0;
    int comp = -1;

    while (explored < m) {
        int v, eta;
        std::int64_t theta = 0;
        bool fresh = active_head >= actives.size();
        if (fresh) {
            v = -1;
            // size-biased start: first stub in uniform order with unvisited blob
            while (start_scan < perm.size()) {
                int s = perm[start_scan++];
                if (!visited[blob_of[s]]) { v = blob_of[s]; break; }
            }
            if (v == -1) {
                for (int u = 0; u < m; ++u)
                    if (!visited[u]) { v = u; break; }  // zero-stub blobs
            }
            ++comp;
            tr.components.push_back({});
            actives.clear();
            active_head = 0;
        } else {
            int entry = actives[active_head++];
            is_active[entry] = 0;
            int p = partner[entry];
            used[entry] = 1;
            used[p] = 1;
            v = blob_of[p];
        }
        visited[v] = 1;
        eta = a[v];
        for (int s : stubs_of[v]) {
            if (used[s]) continue;
            int p = partner[s];
            if (p == -1) { used[s] = 1; continue; }  // the odd dropped pairing slot
            if (is_active[p]) {
                is_active[p] = 0;
                used[s] = 1;
                used[p] = 1;
                ++theta;
            } else if (blob_of[p] == v && !used[p]) {
                used[s] = 1;
                used[p] = 1;
                ++theta;
            } else {
                is_active[s] = 1;
                actives.push_back(s);
            }
        }
        // compact consumed entries at the frontier
        while (active_head < actives.size() && !is_active[actives[active_head]])
            ++active_head;

        z += eta - 2 - 2.0 * theta;
        tr.z.push_back(z);
        tr.eta.push_back((double)eta);
        tr.theta.push_back((int)theta);
        tr.order.push_back(v);
        tr.components[comp].items += 1;
        tr.components[comp].mass += blob_sizes[v];
        tr.components[comp].surplus += theta;
        ++explored;
        (void)fresh;
    }
    return tr;
}

AssumptionReport assumption_diagnostics(const WeightedVertexSet& w, double q,
                                        const std::optional<BlobSummaries>& blobs) {
    AssumptionReport rep;
    rep.sigma3_ratio = w.sigma3 / (w.sigma2 * w.sigma2 * w.sigma2);
    rep.q_minus_inv_sigma2 = q - 1.0 / w.sigma2;
    rep.xmax_ratio = w.x_max / w.sigma2;
    double xsq_u = 0;
    if (blobs) {
        if ((int)blobs->u.size() != w.n())
            throw std::invalid_argument("blob summary size mismatch");
        for (int i = 0; i < w.n(); ++i) xsq_u += w.x[i] * w.x[i] * blobs->u[i];
        rep.blob_ratio = blobs->d_max * std::pow(w.sigma2, 1.5 - blobs->eta0) /
                         (xsq_u + w.sigma2);
    }
    rep.theorem32_factor = w.sigma2 * w.sigma2 / (w.sigma2 + xsq_u);
    return rep;
}

}  // namespace critwin
