#include "critwin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "critwin/observables.hpp"
#include "json.hpp"

namespace critwin {

void ExperimentConfig::validate() const {
    if (model != "er" && model != "cm_perc" && model != "bf" && model != "irg")
        throw std::invalid_argument("unknown model: " + model);
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (n_grid.empty()) throw std::invalid_argument("empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("n grid must be strictly increasing");
    if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");
    if (model == "cm_perc" && (degrees_pmf_k.empty() ||
                               degrees_pmf_k.size() != degrees_pmf_p.size()))
        throw std::invalid_argument("cm_perc needs a degree pmf");
    if (model == "irg" && !kernel) throw std::invalid_argument("irg needs a kernel");
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = model;
    j["n_grid"] = n_grid;
    j["lambda_grid"] = lambda_grid;
    j["replicas"] = replicas;
    j["seed"] = seed;
    if (!output_csv.empty()) j["output_csv"] = output_csv;
    if (!degrees_pmf_k.empty()) {
        j["degree_k"] = degrees_pmf_k;
        j["degree_p"] = degrees_pmf_p;
    }
    if (kernel) j["kernel"] = nlohmann::json::parse(kernel->to_json());
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.model = j.at("model").get<std::string>();
    c.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    c.replicas = j.value("replicas", 1);
    c.seed = j.value("seed", (std::uint64_t)1);
    c.output_csv = j.value("output_csv", std::string{});
    if (j.contains("degree_k")) {
        c.degrees_pmf_k = j["degree_k"].get<std::vector<int>>();
        c.degrees_pmf_p = j["degree_p"].get<std::vector<double>>();
    }
    if (j.contains("kernel")) c.kernel = Kernel::from_json(j["kernel"].dump());
    c.validate();
    return c;
}

namespace {

std::vector<int> degree_sequence_from_pmf(const std::vector<int>& ks,
                                          const std::vector<double>& ps,
                                          std::int64_t n) {
    // deterministic rounded counts, largest remainders first
    std::vector<std::int64_t> counts(ks.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        double exact = ps[i] * n;
        counts[i] = (std::int64_t)std::floor(exact);
        assigned += counts[i];
        rem.push_back({exact - counts[i], i});
    }
    std::sort(rem.begin(), rem.end(), std::greater<>());
    for (std::int64_t i = 0; i < n - assigned; ++i)
        counts[rem[i % rem.size()].second] += 1;
    std::vector<int> deg;
    deg.reserve(n);
    for (std::size_t i = 0; i < ks.size(); ++i)
        deg.insert(deg.end(), counts[i], ks[i]);
    return deg;
}

// BF ODE constants are deterministic; solve once
const BfOdeResult& bf_constants() {
    static const BfOdeResult r = bf_ode_solve();
    return r;
}

}  // namespace

Graph generate_model(const ExperimentConfig& cfg, std::int64_t n, double lambda,
                     Rng& rng) {
    double shift = lambda * std::pow((double)n, -1.0 / 3.0);
    if (cfg.model == "er") return gen_er((int)n, 1.0 + shift, rng);
    if (cfg.model == "cm_perc") {
        auto deg = degree_sequence_from_pmf(cfg.degrees_pmf_k, cfg.degrees_pmf_p, n);
        CmParams prm = CmParams::from_degrees(deg);
        double p = 1.0 / prm.nu + shift;
        return cm_percolate_stubs(deg, p, rng);
    }
    if (cfg.model == "bf") {
        const auto& c = bf_constants();
        double t = c.t_c + std::pow(c.beta, 2.0 / 3.0) * c.alpha * shift;
        return bf_run((int)n, t, rng).graph;
    }
    if (cfg.model == "irg") {
        IrgWindow w;
        w.lambda = lambda;
        auto types = irg_types_rounded(*cfg.kernel, (int)n);
        return gen_irg(*cfg.kernel, types, w, rng);
    }
    throw std::invalid_argument("unknown model");
}

std::string SweepResult::csv() const {
    std::string out = "n,lambda,replica,c1,c2,surplus1,diam1,edges\n";
    for (auto& r : rows) {
        out += std::to_string(r.n) + ',' + format_sig12(r.lambda) + ',' +
               std::to_string(r.replica) + ',' + std::to_string(r.c1) + ',' +
               std::to_string(r.c2) + ',' + std::to_string(r.surplus1) + ',' +
               std::to_string(r.diam1) + ',' + std::to_string(r.edges) + '\n';
    }
    return out;
}

std::string SweepResult::summary_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["rows"] = rows.size();
    j["exponent"] = exponent;
    j["exponent_stderr"] = exponent_stderr;
    return j.dump(2);
}

int worker_count() {
    if (const char* env = std::getenv("CRITWIN_WORKERS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::size_t tasks =
        cfg.n_grid.size() * cfg.lambda_grid.size() * (std::size_t)cfg.replicas;
    SweepResult res;
    res.rows.resize(tasks);

    auto work = [&](std::size_t idx) {
        std::size_t rep = idx % cfg.replicas;
        std::size_t li = (idx / cfg.replicas) % cfg.lambda_grid.size();
        std::size_t ni = idx / cfg.replicas / cfg.lambda_grid.size();
        std::int64_t n = cfg.n_grid[ni];
        double lambda = cfg.lambda_grid[li];
        Rng rng = make_rng(cfg.seed, (std::uint64_t)idx + 1);
        Graph g = generate_model(cfg, n, lambda, rng);
        auto stats = component_stats(g, 10000, false);
        SweepRow row;
        row.n = n;
        row.lambda = lambda;
        row.replica = (int)rep;
        row.edges = (std::int64_t)g.edge_count();
        if (!stats.empty()) {
            row.c1 = stats[0].size;
            row.surplus1 = stats[0].surplus;
            row.diam1 = stats[0].diameter;
            if (stats.size() > 1) row.c2 = stats[1].size;
        }
        res.rows[idx] = row;
    };

    int workers = std::min<std::size_t>(worker_count(), tasks);
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= tasks) return;
                    work(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    // exponent fit on median |C1| vs n at the first lambda
    if (cfg.n_grid.size() >= 3) {
        std::vector<std::pair<double, double>> pairs;
        for (auto& r : res.rows)
            if (r.lambda == cfg.lambda_grid[0])
                pairs.push_back({(double)r.n, (double)r.c1});
        auto [slope, err] = fit_exponent(pairs);
        res.exponent = slope;
        res.exponent_stderr = err;
    }

    if (!cfg.output_csv.empty()) {
        std::ofstream f(cfg.output_csv);
        if (!f) throw std::runtime_error("cannot open " + cfg.output_csv);
        f << res.csv();
    }
    return res;
}

std::pair<double, double> fit_exponent(
    const std::vector<std::pair<double, double>>& pairs) {
    // group by n, take medians
    std::vector<std::pair<double, double>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> xs, ys;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        std::vector<double> vals;
        while (j < sorted.size() && sorted[j].first == sorted[i].first)
            vals.push_back(sorted[j++].second);
        std::sort(vals.begin(), vals.end());
        double med = vals.size() % 2 ? vals[vals.size() / 2]
                                     : (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]) / 2;
        if (sorted[i].first <= 0 || med <= 0)
            throw std::invalid_argument("log-log fit needs positive data");
        xs.push_back(std::log(sorted[i].first));
        ys.push_back(std::log(med));
        i = j;
    }
    std::size_t m = xs.size();
    if (m < 3) throw std::invalid_argument("need >= 3 distinct n");
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx <= 0) throw std::invalid_argument("degenerate abscissae");
    double slope = sxy / sxx;
    double sse = 0;
    for (std::size_t k = 0; k < m; ++k) {
        double r = ys[k] - my - slope * (xs[k] - mx);
        sse += r * r;
    }
    double stderr_ = m > 2 ? std::sqrt(sse / (m - 2) / sxx) : 0.0;
    return {slope, stderr_};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // compare the empirical CDFs just after each distinct value; ties must
        // advance both sides together
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        ks = std::max(ks, std::abs((double)i / a.size() - (double)j / b.size()));
    }
    return ks;
}

double tv_distance(const std::vector<double>& pmf1, const std::vector<double>& pmf2) {
    if (pmf1.size() != pmf2.size()) throw std::invalid_argument("support mismatch");
    double acc = 0;
    for (std::size_t i = 0; i < pmf1.size(); ++i) acc += std::abs(pmf1[i] - pmf2[i]);
    return acc / 2;
}

PipelineReport universality_pipeline_cm(const std::vector<int>& degrees,
                                        double delta, double lambda, Rng& rng) {
    if (delta <= 1.0 / 6.0 || delta >= 1.0 / 5.0)
        throw std::invalid_argument("delta outside the (1/6, 1/5) regime");
    std::int64_t n = (std::int64_t)degrees.size();
    CmParams prm = CmParams::from_degrees(degrees);
    PipelineReport rep;
    rep.t_n = cm_entrance_time(prm, (double)n, delta);
    HalfEdgeState st = cm_dynamic(degrees, rep.t_n, rng);

    // blobs = barely-subcritical components; weight by free stubs
    UnionFind uf = st.uf;
    std::vector<std::int64_t> comp_of_root(n, -1);
    std::vector<double> fstubs;
    std::vector<std::int64_t> bsize;
    for (int v = 0; v < (int)n; ++v) {
        int r = uf.find(v);
        if (comp_of_root[r] == -1) {
            comp_of_root[r] = (std::int64_t)fstubs.size();
            fstubs.push_back((double)st.free_in_comp[r]);
            bsize.push_back(0);
        }
        bsize[comp_of_root[r]] += 1;
    }
    double b13 = std::cbrt(prm.beta);
    double b23 = b13 * b13;
    double n23 = std::pow((double)n, 2.0 / 3.0);
    rep.q = std::pow((double)n, 1.0 / 3.0 - delta) * prm.mu * prm.nu * prm.nu / b23 +
            2 * prm.mu * (prm.nu - 1) * prm.nu * lambda / b23;

    // blob-level G(x,q) on the positively weighted blobs
    std::vector<double> x;
    std::vector<std::int64_t> live;  // blob index per weighted vertex
    for (std::size_t i = 0; i < fstubs.size(); ++i)
        if (fstubs[i] > 0) {
            x.push_back(b13 * fstubs[i] / (prm.mu * (prm.nu - 1) * n23));
            live.push_back((std::int64_t)i);
        }
    WeightedVertexSet w(x);
    rep.sigma2 = w.sigma2;
    Graph g = gen_gxq(w, rep.q, rng);
    auto decomp = components(g);
    auto stats = component_stats(g, 0, false);  // no metric pass needed here

    for (std::size_t c = 0; c < decomp.components.size(); ++c) {
        PipelineComponent pc;
        for (int v : decomp.components[c]) {
            pc.mass += x[v];
            pc.vertices += bsize[live[v]];
            pc.free_stubs += fstubs[live[v]];
            pc.blobs += 1;
        }
        pc.surplus = stats[c].surplus;
        rep.components.push_back(pc);
    }
    // stub-free blobs join as isolated singleton components
    for (std::size_t i = 0; i < fstubs.size(); ++i)
        if (fstubs[i] == 0) rep.components.push_back({0.0, bsize[i], 1, 0, 0.0});
    std::sort(rep.components.begin(), rep.components.end(),
              [](const PipelineComponent& a, const PipelineComponent& b) {
                  return a.mass > b.mass;
              });
    rep.total_mass = std::accumulate(x.begin(), x.end(), 0.0);
    return rep;
}

PipelineReport universality_pipeline_er(std::int64_t n, double lambda, Rng& rng) {
    // point blobs: the pipeline collapses to critical ER itself
    PipelineReport rep;
    Graph g = gen_er((int)n, 1.0 + lambda * std::pow((double)n, -1.0 / 3.0), rng);
    auto decomp = components(g);
    auto stats = component_stats(g, 0, false);
    double n23 = std::pow((double)n, 2.0 / 3.0);
    for (std::size_t c = 0; c < decomp.components.size(); ++c) {
        PipelineComponent pc;
        pc.mass = stats[c].size / n23;
        pc.vertices = stats[c].size;
        pc.blobs = stats[c].size;
        pc.surplus = stats[c].surplus;
        rep.components.push_back(pc);
    }
    rep.total_mass = n / n23;
    rep.q = 1.0 / n;
    return rep;
}

}  // namespace critwin
