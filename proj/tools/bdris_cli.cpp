// Batch experiment runner: closed-form validation tables, outage sweeps and
// the stochastic network-parameter estimator, all deterministic given
// (config, seed). Outputs CSV or JSON with a provenance header.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bdris/beamforming.hpp"
#include "bdris/config.hpp"
#include "bdris/montecarlo.hpp"
#include "bdris/numerics.hpp"
#include "bdris/snis.hpp"
#include "bdris/statistics.hpp"

using namespace bdris;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct Provenance {
    std::string command;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;

    std::string csv_header() const {
        std::ostringstream os;
        os << "# version=" << kVersion << " command=" << command << " seed=" << seed
           << " config_hash=" << std::hex << config_hash << "\n";
        return os.str();
    }
    json to_json() const {
        return {{"version", kVersion},
                {"command", command},
                {"seed", seed},
                {"config_hash", config_hash}};
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& os, const Provenance& prov) const {
        os << prov.csv_header();
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
    }
    json to_json(const Provenance& prov) const {
        json out;
        out["provenance"] = prov.to_json();
        out["columns"] = columns;
        out["rows"] = rows;
        return out;
    }
};

void write_output(const Table& t, const Provenance& prov, const std::string& path,
                  const std::string& format) {
    std::ofstream os(path);
    if (!os) throw InvalidParameter("cannot open output file: " + path);
    if (format == "csv")
        t.write_csv(os, prov);
    else
        os << t.to_json(prov).dump(2) << "\n";
    std::cout << "wrote " << path << "\n";
}

struct ConfigInput {
    std::string path;
    LoadedConfig loaded;
    std::uint64_t hash = 0;
};

ConfigInput read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    ConfigInput out;
    out.path = path;
    out.loaded = parse_config_text(text);
    out.hash = fnv1a(text);
    for (const auto& w : out.loaded.config.validate()) std::cerr << "warning: " << w << "\n";
    return out;
}

// ---------------------------------------------------------------------------

json sim_report_json(const SimReport& r) {
    json out = {{"trials", r.trials},
                {"seed", r.seed},
                {"degenerate_resamples", r.degenerate_resamples},
                {"op_r", {{"empirical", r.op_r_empirical},
                          {"standard_error", r.op_r_se},
                          {"model", r.op_r_analytic}}},
                {"ks_radar", r.ks_radar}};
    json users = json::array();
    for (int k = 0; k < r.op_c_empirical.size(); ++k)
        users.push_back({{"empirical", r.op_c_empirical[k]},
                         {"standard_error", r.op_c_se[k]},
                         {"model", r.op_c_analytic[k]},
                         {"ks", r.ks_comm[k]}});
    out["op_c"] = users;
    return out;
}

int cmd_validate_cdf(const ConfigInput& ci, std::uint64_t seed, std::int64_t trials,
                     std::vector<int> grid_n, std::vector<double> grid_power,
                     const std::string& out, const std::string& format,
                     const std::string& cdf_table_prefix, int cdf_points) {
    if (grid_n.empty() || grid_power.empty()) {
        std::cerr << "error: empty sweep grid\n";
        return kExitUsage;
    }
    Provenance prov{"validate-cdf", seed, ci.hash};
    json reports = json::array();
    Table t;
    t.columns = {"m",          "k",        "n",          "power_dbm", "trials",
                 "op_r_emp",   "op_r_se",  "op_r_model", "ks_radar",  "op_c_emp_max",
                 "op_c_model", "ks_comm",  "degenerate"};

    for (int n : grid_n) {
        for (double power : grid_power) {
            SystemConfig cfg = ci.loaded.config;
            cfg.N = n;
            // equal transmit powers: the SINR law depends on them only
            // through P_c / P_r
            cfg.p_c_dbm = VectorXd::Constant(cfg.K, power);
            cfg.p_r_dbm = power;
            const Geometry& geom = ci.loaded.geometry;
            const auto gains = derive_gains(cfg, geom);
            const auto tables = comm_cdf_tables(cfg.M, cfg.K);
            const auto ms = simulate_metrics(cfg, geom, trials, seed);

            std::vector<double> radar(ms.radar_snr.data(), ms.radar_snr.data() + trials);
            EmpiricalCdf emp_r(std::move(radar));
            auto radar_cdf = [&](double g) { return radar_snr_cdf(g, cfg.M, cfg.N, gains.gbar_rt); };
            const double ks_r = ks_distance(emp_r, radar_cdf);
            double op_r_emp = emp_r(gains.gamma_r_th);

            SimReport rep;
            rep.trials = trials;
            rep.seed = seed;
            rep.degenerate_resamples = ms.degenerate_resamples;
            rep.op_r_empirical = op_r_emp;
            rep.op_r_se = binomial_se(op_r_emp, trials);
            rep.op_r_analytic = radar_snr_cdf(gains.gamma_r_th, cfg.M, cfg.N, gains.gbar_rt);
            rep.ks_radar = ks_r;
            rep.op_c_empirical.resize(cfg.K);
            rep.op_c_se.resize(cfg.K);
            rep.op_c_analytic.resize(cfg.K);
            rep.ks_comm.resize(cfg.K);

            double ks_c = 0.0, op_c_emp = 0.0, op_c_model = 0.0;
            std::optional<EmpiricalCdf> emp_c0;
            for (int k = 0; k < cfg.K; ++k) {
                std::vector<double> v(ms.zf_sinr.col(k).data(), ms.zf_sinr.col(k).data() + trials);
                EmpiricalCdf emp(std::move(v));
                const double rho_sir = gains.varrho * gains.sir_k[k];
                auto cdf = [&](double g) { return comm_sinr_cdf_t(g, tables, rho_sir); };
                rep.ks_comm[k] = ks_distance(emp, cdf);
                rep.op_c_empirical[k] = emp(gains.gamma_c_th);
                rep.op_c_se[k] = binomial_se(rep.op_c_empirical[k], trials);
                rep.op_c_analytic[k] = cdf(gains.gamma_c_th);
                ks_c = std::max(ks_c, rep.ks_comm[k]);
                op_c_emp = std::max(op_c_emp, rep.op_c_empirical[k]);
                op_c_model = std::max(op_c_model, rep.op_c_analytic[k]);
                if (k == 0) emp_c0.emplace(emp);
            }
            json rj = sim_report_json(rep);
            rj["n"] = n;
            rj["power_dbm"] = power;
            reports.push_back(rj);

            t.rows.push_back({std::to_string(cfg.M), std::to_string(cfg.K), std::to_string(n),
                              fmt(power), std::to_string(trials), fmt(op_r_emp),
                              fmt(rep.op_r_se), fmt(rep.op_r_analytic),
                              fmt(ks_r), fmt(op_c_emp), fmt(op_c_model), fmt(ks_c),
                              std::to_string(ms.degenerate_resamples)});

            if (!cdf_table_prefix.empty()) {
                // per-gamma table between the 0.1% and 99.9% empirical quantiles
                Table ct;
                ct.columns = {"gamma", "empirical_radar", "model_radar", "empirical_comm_u0",
                              "model_comm_u0"};
                const auto& rs = emp_r.samples();
                const auto& cs = emp_c0->samples();
                const double lo = std::min(rs[rs.size() / 1000], cs[cs.size() / 1000]);
                const double hi = std::max(rs[rs.size() - 1 - rs.size() / 1000],
                                           cs[cs.size() - 1 - cs.size() / 1000]);
                const double rho_sir0 = gains.varrho * gains.sir_k[0];
                for (int i = 0; i < cdf_points; ++i) {
                    const double g = lo * std::pow(hi / lo, static_cast<double>(i) /
                                                               (cdf_points - 1));
                    ct.rows.push_back({fmt(g), fmt(emp_r(g)), fmt(radar_cdf(g)),
                                       fmt((*emp_c0)(g)),
                                       fmt(comm_sinr_cdf_t(g, tables, rho_sir0))});
                }
                std::ostringstream name;
                name << cdf_table_prefix << "_n" << n << "_p" << fmt(power) << "."
                     << (format == "csv" ? "csv" : "json");
                write_output(ct, prov, name.str(), format);
            }
        }
    }
    write_output(t, prov, out, format);
    {
        json summary = prov.to_json();
        summary["reports"] = reports;
        std::ofstream os(out + ".reports.json");
        os << summary.dump(2) << "\n";
        std::cout << "wrote " << out << ".reports.json\n";
    }
    return 0;
}

int cmd_outage_sweep(const ConfigInput& ci, std::vector<int> grid_n,
                     std::vector<double> grid_pc, const std::string& out,
                     const std::string& format) {
    if (grid_n.empty() || grid_pc.empty()) {
        std::cerr << "error: empty sweep grid\n";
        return kExitUsage;
    }
    Provenance prov{"outage-sweep", 0, ci.hash};
    const SystemConfig& base = ci.loaded.config;
    const Geometry& geom = ci.loaded.geometry;
    const auto tables = comm_cdf_tables(base.M, base.K);

    Table t;
    t.columns = {"sweep", "n", "p_c_dbm", "op_r", "op_r_asymptote", "op_c", "op_c_asymptote"};

    // element sweep at the configured powers
    std::vector<double> lx_r, ly_r;
    for (int n : grid_n) {
        SystemConfig cfg = base;
        cfg.N = n;
        const auto g = derive_gains_unchecked(cfg, geom);
        const double op_r = radar_snr_cdf(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt);
        const double as_r = radar_op_asymptotic(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt);
        const double op_c = comm_sinr_cdf_t(g.gamma_c_th, tables, g.varrho * g.sir_k[0]);
        const double as_c = comm_op_asymptotic(g.gamma_c_th, cfg.M, cfg.K, g.varrho, g.sir_k[0]);
        t.rows.push_back({"n", std::to_string(n), fmt(base.p_c_dbm[0]), fmt(op_r), fmt(as_r),
                          fmt(op_c), fmt(as_c)});
        if (as_r < 1e-3 && op_r > 0.0) {
            lx_r.push_back(std::log10(static_cast<double>(n)));
            ly_r.push_back(std::log10(op_r));
        }
    }
    // power sweep at the configured N
    std::vector<double> lx_c, ly_c;
    for (double pc : grid_pc) {
        SystemConfig cfg = base;
        cfg.p_c_dbm = VectorXd::Constant(cfg.K, pc);
        const auto g = derive_gains_unchecked(cfg, geom);
        const double op_r = radar_snr_cdf(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt);
        const double as_r = radar_op_asymptotic(g.gamma_r_th, cfg.M, cfg.N, g.gbar_rt);
        const double op_c = comm_sinr_cdf_t(g.gamma_c_th, tables, g.varrho * g.sir_k[0]);
        const double as_c = comm_op_asymptotic(g.gamma_c_th, cfg.M, cfg.K, g.varrho, g.sir_k[0]);
        t.rows.push_back({"p_c", std::to_string(cfg.N), fmt(pc), fmt(op_r), fmt(as_r), fmt(op_c),
                          fmt(as_c)});
        if (as_c < 1e-3 && op_c > 0.0) {
            lx_c.push_back(std::log10(dbm_to_watt(pc)));
            ly_c.push_back(std::log10(op_c));
        }
    }
    // saturation against the large-N limit
    {
        SystemConfig cfg = base;
        cfg.N = 320;
        const auto g = derive_gains_unchecked(cfg, geom);
        const double op_320 = comm_sinr_cdf_t(g.gamma_c_th, tables, g.varrho * g.sir_k[0]);
        const double op_inf = comm_sinr_cdf_t(
            g.gamma_c_th, tables, static_cast<double>(cfg.M) / cfg.K * g.sir_k[0]);
        t.rows.push_back({"n_limit", "320", fmt(base.p_c_dbm[0]), "", "", fmt(op_320),
                          fmt(op_inf)});
    }

    if (lx_r.size() >= 2)
        std::cout << "radar outage slope vs N (asymptotic region): "
                  << fmt(numerics::ls_slope(lx_r, ly_r)) << " (expect about -M)\n";
    else
        std::cout << "radar outage slope vs N: grid has < 2 asymptotic points\n";
    if (lx_c.size() >= 2)
        std::cout << "communication outage slope vs P_c: " << fmt(numerics::ls_slope(lx_c, ly_c))
                  << " decades/decade (expect about -(K-1))\n";
    else
        std::cout << "communication outage slope vs P_c: grid has < 2 asymptotic points\n";

    write_output(t, prov, out, format);
    return 0;
}

json solution_record(const SnisSolution& sol) {
    json diag = json::array();
    for (const auto& d : sol.diag)
        diag.push_back({{"density", d.density},
                        {"sigma_used", d.sigma_used},
                        {"cdf_mass", d.cdf_mass}});
    json x = json::array();
    for (int i = 0; i < sol.x_hat.size(); ++i) x.push_back(sol.x_hat[i]);
    return {{"feasible", sol.feasible},
            {"failed_prefix", sol.failed_prefix},
            {"x_hat", x},
            {"achieved", sol.achieved},
            {"per_coordinate", diag}};
}

int cmd_snis_estimate(const ConfigInput& ci, std::vector<double> targets, int seeds,
                      std::int64_t n_mc, int n_trap, double sigma, bool annealed,
                      double bound_pr, double bound_n, const std::string& out,
                      const std::string& format, std::uint64_t seed0) {
    if (targets.empty()) {
        std::cerr << "error: empty target grid\n";
        return kExitUsage;
    }
    Provenance prov{"snis-estimate", seed0, ci.hash};
    ParameterMapping mp;
    mp.kind = ParameterMapping::Kind::PowerElements;
    mp.base_config = ci.loaded.config;
    mp.base_geometry = ci.loaded.geometry;
    const NetworkOutageObjective objective(mp);

    SnisProblem problem;
    problem.objective = [&](const VectorXd& x) { return objective(x); };
    problem.bounds = (VectorXd(2) << bound_pr, bound_n).finished();

    Table t;
    t.columns = {"target", "seed",     "feasible", "p_r_dbm", "n_star",
                 "n",      "achieved", "log10_err"};
    json records = json::array();
    int feasible_runs = 0;
    int within = 0;
    for (double target : targets) {
        problem.target = target;
        for (int s = 0; s < seeds; ++s) {
            SamplerSettings st;
            st.n_mc = n_mc;
            st.n_trap = n_trap;
            st.sigma_err = sigma;
            st.annealed = annealed;
            st.seed = seed0 + 1000003ULL * s + static_cast<std::uint64_t>(1e9 * target);
            const auto sol = snis_solve(problem, st);
            records.push_back(solution_record(sol));
            if (!sol.feasible) {
                t.rows.push_back({fmt(target), std::to_string(s), "0", "", "", "", "", ""});
                continue;
            }
            ++feasible_runs;
            const double err = std::abs(std::log10(sol.achieved) - std::log10(target));
            if (err <= 0.25) ++within;
            t.rows.push_back({fmt(target), std::to_string(s), "1", fmt(sol.x_hat[0]),
                              fmt(sol.x_hat[1]), std::to_string(static_cast<int>(std::ceil(
                                                     std::max(sol.x_hat[1], 1.0)))),
                              fmt(sol.achieved), fmt(err)});
        }
    }
    write_output(t, prov, out, format);
    {
        json summary = prov.to_json();
        summary["problem"] = {{"mapping", "power_elements"},
                              {"bounds", {bound_pr, bound_n}},
                              {"targets", targets},
                              {"p_c_dbm", ci.loaded.config.p_c_dbm[0]}};
        summary["settings"] = {{"n_mc", n_mc},
                               {"n_trap", n_trap},
                               {"sigma_err", sigma},
                               {"annealed", annealed},
                               {"seeds", seeds}};
        summary["records"] = records;
        summary["feasible_runs"] = feasible_runs;
        summary["within_quarter_decade"] =
            feasible_runs ? static_cast<double>(within) / feasible_runs : 0.0;
        std::ofstream os(out + ".run.json");
        os << summary.dump(2) << "\n";
        std::cout << "wrote " << out << ".run.json\n";
    }
    std::cout << "feasible runs: " << feasible_runs << "/" << targets.size() * seeds
              << ", within 0.25 decades: " << within << "\n";
    if (feasible_runs == 0) return kExitInfeasible;
    return 0;
}

int cmd_snis_histogram(const ConfigInput& ci, int solutions, std::int64_t n_mc, double op_th,
                       std::vector<double> bounds, const std::string& out_prefix,
                       const std::string& format, std::uint64_t seed0) {
    Provenance prov{"snis-histogram", seed0, ci.hash};
    ParameterMapping mp;
    mp.kind = ParameterMapping::Kind::PowerElementsTarget;
    mp.base_config = ci.loaded.config;
    mp.base_geometry = ci.loaded.geometry;
    const NetworkOutageObjective objective(mp);

    SnisProblem problem;
    problem.objective = [&](const VectorXd& x) { return objective(x); };
    problem.bounds = (VectorXd(4) << bounds[0], bounds[1], bounds[2], bounds[3]).finished();
    problem.target = op_th;

    const char* coord_names[4] = {"p_r_dbm", "n_star", "x_t", "y_t"};
    Table sols;
    sols.columns = {"seed", "p_r_dbm", "n_star", "x_t", "y_t", "achieved"};
    std::vector<std::vector<double>> coords(4);
    int infeasible = 0;
    for (int s = 0; static_cast<int>(coords[0].size()) < solutions && s < 4 * solutions; ++s) {
        SamplerSettings st;
        st.n_mc = n_mc;
        st.annealed = true;
        st.seed = seed0 + 31ULL * s;
        const auto sol = snis_solve(problem, st);
        if (!sol.feasible) {
            ++infeasible;
            continue;
        }
        for (int i = 0; i < 4; ++i) coords[i].push_back(sol.x_hat[i]);
        sols.rows.push_back({std::to_string(s), fmt(sol.x_hat[0]), fmt(sol.x_hat[1]),
                             fmt(sol.x_hat[2]), fmt(sol.x_hat[3]), fmt(sol.achieved)});
    }
    if (static_cast<int>(coords[0].size()) < solutions) {
        std::cerr << "error: only " << coords[0].size() << " feasible solutions collected\n";
        return kExitInfeasible;
    }
    write_output(sols, prov, out_prefix + "_solutions." + (format == "csv" ? "csv" : "json"),
                 format);

    // 50-bin marginal histograms per coordinate
    for (int i = 0; i < 4; ++i) {
        Table h;
        h.columns = {"bin_lo", "bin_hi", "count", "density"};
        const double width = problem.bounds[i] / 50.0;
        std::vector<int> counts(50, 0);
        for (double v : coords[i]) {
            int b = static_cast<int>(v / width);
            if (b >= 50) b = 49;
            ++counts[b];
        }
        for (int b = 0; b < 50; ++b) {
            const double density =
                counts[b] / (width * static_cast<double>(coords[i].size()));
            h.rows.push_back({fmt(b * width), fmt((b + 1) * width), std::to_string(counts[b]),
                              fmt(density)});
        }
        write_output(h, prov,
                     out_prefix + "_hist_" + coord_names[i] + "." +
                         (format == "csv" ? "csv" : "json"),
                     format);
    }

    // qualitative summary
    std::vector<double> pr = coords[0];
    std::nth_element(pr.begin(), pr.begin() + pr.size() / 2, pr.end());
    int near = 0;
    for (std::size_t j = 0; j < coords[2].size(); ++j)
        if (std::hypot(coords[2][j] - ci.loaded.geometry.ris_pos.x(),
                       coords[3][j] - ci.loaded.geometry.ris_pos.y()) < 20.0)
            ++near;
    json summary = prov.to_json();
    summary["solutions"] = solutions;
    summary["infeasible_attempts"] = infeasible;
    summary["median_p_r_dbm"] = pr[pr.size() / 2];
    summary["near_ris_count_r20"] = near;
    summary["near_ris_uniform_expectation"] =
        solutions * M_PI * 400.0 / (bounds[2] * bounds[3]);
    std::ofstream os(out_prefix + "_summary.json");
    os << summary.dump(2) << "\n";
    std::cout << "median P_r " << pr[pr.size() / 2] << " dBm, near-RIS count " << near << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BD-RIS ISAC laboratory: validation tables, outage sweeps and network "
                 "parameter estimation"};
    app.require_subcommand(1);

    std::string config_path, out, format = "csv";
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub, bool needs_out = true) {
        sub->add_option("--config", config_path, "network config file (TOML-style)")->required();
        if (needs_out) sub->add_option("--out", out, "output file")->required();
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "master seed");
    };

    // validate-cdf
    auto* val = app.add_subcommand("validate-cdf",
                                   "simulate the optimal design and compare empirical and "
                                   "closed-form distributions");
    std::int64_t trials = 100000;
    std::vector<int> grid_n = {16, 32, 64};
    std::vector<double> grid_power = {10.0, 15.0, 20.0};
    std::string cdf_table_prefix;
    int cdf_points = 200;
    add_common(val);
    val->add_option("--trials", trials, "Monte Carlo trials per grid point");
    val->add_option("--grid-n", grid_n, "element counts to sweep")->delimiter(',');
    val->add_option("--grid-power-dbm", grid_power,
                    "transmit powers to sweep (applied to P_c and P_r)")
        ->delimiter(',');
    val->add_option("--cdf-table", cdf_table_prefix, "also write per-gamma CDF tables");
    val->add_option("--cdf-points", cdf_points, "points per CDF table");

    // outage-sweep
    auto* sweep = app.add_subcommand("outage-sweep",
                                     "closed-form outage curves, asymptotes and decay-rate fits");
    std::vector<int> sweep_n = {16, 24, 32, 48, 64, 96, 128, 192, 256, 320};
    std::vector<double> sweep_pc = {20, 25, 30, 35, 40, 45, 50, 55, 60};
    add_common(sweep);
    sweep->add_option("--grid-n", sweep_n, "element counts")->delimiter(',');
    sweep->add_option("--grid-pc-dbm", sweep_pc, "communication powers")->delimiter(',');

    // snis-estimate
    auto* est = app.add_subcommand("snis-estimate",
                                   "estimate (P_r, N) meeting network outage targets");
    std::vector<double> targets = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    int est_seeds = 20;
    std::int64_t n_mc = 100000;
    int n_trap = 100;
    double sigma = 1e-4;
    bool annealed = true;
    double bound_pr = 20.0, bound_n = 80.0;
    add_common(est);
    est->add_option("--targets", targets, "outage targets")->delimiter(',');
    est->add_option("--seeds", est_seeds, "independent runs per target");
    est->add_option("--n-mc", n_mc, "Monte Carlo points per integral");
    est->add_option("--n-trap", n_trap, "trapezoid points");
    est->add_option("--sigma", sigma, "kernel bandwidth (fixed-bandwidth mode)");
    est->add_flag("--annealed,!--fixed-sigma", annealed, "bandwidth-ladder mode (default on)");
    est->add_option("--bound-pr-dbm", bound_pr, "radar power upper bound");
    est->add_option("--bound-n", bound_n, "element-count upper bound");

    // snis-histogram
    auto* hist = app.add_subcommand("snis-histogram",
                                    "marginal distributions of (P_r, N, x_t, y_t) solutions");
    int solutions = 1000;
    std::int64_t hist_n_mc = 10000;
    double op_th = 1e-2;
    std::vector<double> hist_bounds = {20.0, 80.0, 100.0, 100.0};
    std::string out_prefix;
    hist->add_option("--config", config_path, "network config file")->required();
    hist->add_option("--out-prefix", out_prefix, "output file prefix")->required();
    hist->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    hist->add_option("--seed", seed, "master seed");
    hist->add_option("--solutions", solutions, "number of solutions to collect");
    hist->add_option("--n-mc", hist_n_mc, "Monte Carlo points per integral");
    hist->add_option("--op-th", op_th, "network outage target");
    hist->add_option("--bounds", hist_bounds, "upper bounds: P_r dBm, N, x_t, y_t")
        ->delimiter(',')
        ->expected(4);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    try {
        const ConfigInput ci = read_config(config_path);
        if (val->parsed())
            return cmd_validate_cdf(ci, seed, trials, grid_n, grid_power, out, format,
                                    cdf_table_prefix, cdf_points);
        if (sweep->parsed()) return cmd_outage_sweep(ci, sweep_n, sweep_pc, out, format);
        if (est->parsed())
            return cmd_snis_estimate(ci, targets, est_seeds, n_mc, n_trap, sigma, annealed,
                                     bound_pr, bound_n, out, format, seed);
        if (hist->parsed())
            return cmd_snis_histogram(ci, solutions, hist_n_mc, op_th, hist_bounds, out_prefix,
                                      format, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
