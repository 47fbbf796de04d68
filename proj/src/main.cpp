#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "critwin/harness.hpp"
#include "critwin/limits.hpp"
#include "critwin/metric_space.hpp"
#include "critwin/observables.hpp"
#include "critwin/trees.hpp"

using namespace critwin;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << text;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical-window random graph simulator"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "generate one graph as an edge list");
    std::string g_model = "er", g_out, g_pmf, g_kernel_file;
    std::int64_t g_n = 1024;
    double g_lambda = 0;
    std::uint64_t g_seed = 1;
    gen->add_option("--model", g_model, "er|cm_perc|bf|irg");
    gen->add_option("--n", g_n)->required();
    gen->add_option("--lambda", g_lambda);
    gen->add_option("--seed", g_seed);
    gen->add_option("--pmf", g_pmf, "degree pmf p0,p1,... (cm_perc)");
    gen->add_option("--kernel", g_kernel_file, "kernel JSON file (irg)");
    gen->add_option("--out", g_out, "output path (default stdout)");

    // ---- observe ----
    auto* obs = app.add_subcommand("observe", "edge list -> susceptibility CSV row");
    std::string o_in, o_out;
    obs->add_option("--in", o_in)->required();
    obs->add_option("--out", o_out);

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep", "run a config-driven sweep");
    std::string s_config, s_summary;
    swp->add_option("--config", s_config)->required();
    swp->add_option("--summary", s_summary, "summary JSON output path");

    // ---- limits ----
    auto* lim = app.add_subcommand("limits", "ODE / closed-form limit tables");
    std::string l_pmf;
    bool l_bf = false;
    int l_points = 20;
    lim->add_flag("--bf", l_bf, "print Bohman-Frieze ODE constants");
    lim->add_option("--cm-pmf", l_pmf, "degree pmf p0,p1,...: closed-form table");
    lim->add_option("--points", l_points);

    // ---- ghp ----
    auto* ghp = app.add_subcommand("ghp", "distance between two space JSON files");
    std::string h_a, h_b;
    bool h_exact = false, h_bounds = false;
    ghp->add_option("a", h_a)->required();
    ghp->add_option("b", h_b)->required();
    ghp->add_flag("--exact", h_exact);
    ghp->add_flag("--bounds", h_bounds);

    // ---- coalescent ----
    auto* coa = app.add_subcommand("coalescent", "multiplicative coalescent runs");
    std::string c_masses = "1,1,1,1";
    double c_q = 0.3;
    int c_reps = 1;
    std::uint64_t c_seed = 1;
    coa->add_option("--masses", c_masses);
    coa->add_option("--q", c_q);
    coa->add_option("--reps", c_reps);
    coa->add_option("--seed", c_seed);

    // ---- crit ----
    auto* crt = app.add_subcommand("crit", "sample limit metric spaces Crit(lambda)");
    double k_lambda = 0;
    int k_k = 1, k_points = 48;
    std::uint64_t k_seed = 1;
    std::string k_prefix = "crit";
    crt->add_option("--lambda", k_lambda);
    crt->add_option("--k", k_k);
    crt->add_option("--points", k_points);
    crt->add_option("--seed", k_seed);
    crt->add_option("--out-prefix", k_prefix);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ExperimentConfig cfg;
            cfg.model = g_model;
            cfg.n_grid = {g_n};
            cfg.lambda_grid = {g_lambda};
            cfg.seed = g_seed;
            if (!g_pmf.empty()) {
                auto probs = parse_doubles(g_pmf);
                for (std::size_t k = 0; k < probs.size(); ++k) {
                    cfg.degrees_pmf_k.push_back((int)k);
                    cfg.degrees_pmf_p.push_back(probs[k]);
                }
            }
            if (!g_kernel_file.empty())
                cfg.kernel = Kernel::from_json(read_file(g_kernel_file));
            Rng rng = make_rng(g_seed, 0);
            Graph g = generate_model(cfg, g_n, g_lambda, rng);
            if (g_out.empty())
                write_edge_list(std::cout, g);
            else
                write_edge_list_file(g_out, g);
        } else if (*obs) {
            Graph g = read_edge_list_file(o_in);
            auto stats = component_stats(g);
            auto rec = vertex_susceptibilities(components(g), stats, g.n);
            std::string out = SusceptibilityRecord::csv_header() + "\n" + rec.csv_row() + "\n";
            if (o_out.empty())
                std::cout << out;
            else
                write_file(o_out, out);
        } else if (*swp) {
            auto cfg = ExperimentConfig::from_json(read_file(s_config));
            auto res = run_sweep(cfg);
            if (cfg.output_csv.empty()) std::cout << res.csv();
            if (!s_summary.empty())
                write_file(s_summary, res.summary_json());
            else
                std::cout << res.summary_json() << "\n";
        } else if (*lim) {
            if (l_bf) {
                auto r = bf_ode_solve();
                std::cout << "t_c=" << format_sig12(r.t_c)
                          << " alpha=" << format_sig12(r.alpha)
                          << " beta=" << format_sig12(r.beta)
                          << " rho=" << format_sig12(r.rho) << "\n";
            }
            if (!l_pmf.empty()) {
                auto prm = CmParams::from_pmf(parse_doubles(l_pmf));
                std::cout << "t,s1,s2,s3,g,D,y,z,u,v\n";
                for (int i = 0; i < l_points; ++i) {
                    double t = prm.t_c * i / l_points;
                    auto p = cm_limit_eval(prm, t);
                    std::cout << format_sig12(p.t) << ',' << format_sig12(p.s1) << ','
                              << format_sig12(p.s2) << ',' << format_sig12(p.s3) << ','
                              << format_sig12(p.g) << ',' << format_sig12(p.D) << ','
                              << format_sig12(p.y) << ',' << format_sig12(p.z) << ','
                              << format_sig12(p.u) << ',' << format_sig12(p.v) << "\n";
                }
            }
        } else if (*ghp) {
            auto a = MeasuredMetricSpace::from_json(read_file(h_a));
            auto b = MeasuredMetricSpace::from_json(read_file(h_b));
            if (!h_exact && !h_bounds) h_exact = true;
            if (h_exact) std::cout << "exact=" << format_sig12(ghp_exact(a, b)) << "\n";
            if (h_bounds) {
                auto [lo, hi] = ghp_bounds(a, b);
                std::cout << "lower=" << format_sig12(lo)
                          << " upper=" << format_sig12(hi) << "\n";
            }
        } else if (*coa) {
            auto masses = parse_doubles(c_masses);
            for (int r = 0; r < c_reps; ++r) {
                Rng rng = make_rng(c_seed, (std::uint64_t)r);
                auto blocks = mult_coalescent(masses, c_q, rng);
                for (std::size_t i = 0; i < blocks.size(); ++i)
                    std::cout << (i ? "," : "") << format_sig12(blocks[i]);
                std::cout << "\n";
            }
        } else if (*crt) {
            Rng rng = make_rng(k_seed, 0);
            auto spaces = sample_crit(k_lambda, k_k, rng, k_points);
            for (int i = 0; i < (int)spaces.size(); ++i) {
                std::string path = k_prefix + "_" + std::to_string(i) + ".json";
                write_file(path, spaces[i].to_json());
                std::cout << path << " mass=" << format_sig12(spaces[i].total_mass())
                          << " diam=" << format_sig12(spaces[i].diameter()) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
