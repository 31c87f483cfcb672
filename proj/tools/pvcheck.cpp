#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pvt/io.hpp"
#include "pvt/nulldist.hpp"
#include "pvt/stats.hpp"
#include "pvt/stereology.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace pvt;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
    std::vector<double> box{10.0, 10.0, 10.0};
    bool bounded = false;
    std::uint64_t seed = 0;
    bool seed_set = false;

    BoxGeometry geometry() const {
        return make_box(box[0], box[1], box[2],
                        bounded ? BoundaryMode::bounded : BoundaryMode::periodic);
    }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--box", c.box, "box side lengths")->expected(3);
    cmd->add_flag("--bounded", c.bounded, "non-periodic box");
    auto* s = cmd->add_option("--seed", c.seed, "root RNG seed");
    cmd->callback([&c, s] { c.seed_set = s->count() > 0; });
}

void require_seed(const CommonOpts& c) {
    if (!c.seed_set)
        throw std::invalid_argument("--seed is required for stochastic subcommands");
}

void write_manifest(const std::string& dir, const json& j) {
    write_text_file((fs::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
}

std::string cache_name(const std::string& stat, int n2d, double lambda,
                       const std::string& mode, int attempts, std::uint64_t seed) {
    std::ostringstream os;
    os.precision(4);
    os << "null_" << stat << "_n" << n2d << "_lam" << lambda << "_" << mode << "_a"
       << attempts << "_s" << seed << ".json";
    return os.str();
}

double pick_lambda_hat(const SectionTessellation& tess) {
    return estimate_lambda(summarize_section(tess), LambdaMethod::a).value;
}

AreaSample observed_sample(const SectionTessellation& tess) {
    return {cell_areas(tess), SampleSource::observed};
}

int cmd_simulate(const CommonOpts& common, double lambda, int replicates,
                 const std::string& out_dir) {
    require_seed(common);
    fs::create_directories(out_dir);
    BoxGeometry box = common.geometry();

    std::vector<CellMetrics> all_metrics;
    for (int rep = 0; rep < replicates; ++rep) {
        std::uint64_t s = child_seed(common.seed, static_cast<std::uint64_t>(rep));
        GeneratorSet gen = sample_poisson_generators(lambda, box, child_seed(s, 0));
        Rng rng = make_rng(child_seed(s, 1));
        SectionPlane plane = sample_axis_plane(box, rng);
        SectionTessellation tess = section_tessellation(gen, plane);

        char name[64];
        std::snprintf(name, sizeof(name), "section_%04d.json", rep);
        save_tessellation((fs::path(out_dir) / name).string(), tess);

        auto metrics = box.mode == BoundaryMode::periodic
                           ? toroidal_cell_metrics(tess)
                           : visible_cell_metrics(tess);
        all_metrics.insert(all_metrics.end(), metrics.begin(), metrics.end());
    }
    save_metrics_csv((fs::path(out_dir) / "metrics.csv").string(), all_metrics);

    json manifest = {{"subcommand", "simulate"},
                     {"lambda", lambda},
                     {"replicates", replicates},
                     {"seed", common.seed},
                     {"box", common.box},
                     {"mode", common.bounded ? "bounded" : "periodic"},
                     {"cells", all_metrics.size()}};
    write_manifest(out_dir, manifest);
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

int cmd_estimate(const CommonOpts& common, const std::string& input, int n_boot,
                 const std::string& out_file) {
    SectionTessellation tess = load_tessellation(input);
    SectionSummary sum = summarize_section(tess);
    json report;
    report["n_2d"] = sum.n_cells;
    report["window"] = {tess.window.x, tess.window.y};
    for (auto m : {LambdaMethod::P, LambdaMethod::N, LambdaMethod::L, LambdaMethod::a}) {
        std::string key = std::string("lambda_") + lambda_method_name(m);
        try {
            report[key] = estimate_lambda(sum, m).value;
        } catch (const std::domain_error& e) {
            report[key] = nullptr;
            report[key + "_error"] = e.what();
        }
    }
    if (n_boot > 0) {
        require_seed(common);
        double lhat = pick_lambda_hat(tess);
        BootstrapCI ci = bootstrap_ci_lambda(lhat, common.geometry(), n_boot, common.seed);
        report["bootstrap_ci"] = {{"lower", ci.lower},
                                  {"upper", ci.upper},
                                  {"level", ci.level},
                                  {"n_boot", n_boot},
                                  {"seed", common.seed}};
    }
    std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!out_file.empty()) write_text_file(out_file, text);
    return 0;
}

int cmd_tda(const std::string& input, const std::string& points_file,
            const std::string& out_prefix) {
    PointCloud2 cloud;
    if (!points_file.empty()) {
        for (const auto& [id, p] : load_points_csv(points_file)) cloud.points.push_back(p);
    } else if (!input.empty()) {
        cloud.points = cell_centroids(load_tessellation(input));
    } else {
        throw std::invalid_argument("tda needs --input or --points");
    }
    if (cloud.points.empty()) throw std::invalid_argument("tda: empty point cloud");

    PersistenceDiagram diag = persistence_pairs(alpha_filtration(cloud));
    save_diagram_csv(out_prefix + "_diagram.csv", diag);

    double t0 = 0.0, t1 = 0.0;
    for (const auto& p : diag.h0) t0 = std::max(t0, p.death);
    for (const auto& p : diag.h1) t1 = std::max(t1, p.death);
    save_landscape_csv(out_prefix + "_landscape_h0.csv",
                       landscape_from_diagram(diag.h0, t0 > 0 ? t0 : 1.0));
    save_landscape_csv(out_prefix + "_landscape_h1.csv",
                       landscape_from_diagram(diag.h1, t1 > 0 ? t1 : 1.0));
    std::cout << "h0 pairs: " << diag.h0.size() << "\nh1 pairs: " << diag.h1.size()
              << "\n";
    return 0;
}

int cmd_null_table(const CommonOpts& common, const std::string& statistic, int n2d,
                   double lambda, int attempts, const std::string& cache_dir,
                   const std::vector<double>& alpha_grid) {
    require_seed(common);
    fs::create_directories(cache_dir);
    BoxGeometry box = common.geometry();
    SectionPlane plane = axis_plane(2, 0.5 * box.lengths[2], box);
    ConditionalEnsemble ens =
        build_conditional_ensemble(n2d, lambda, box, plane, attempts, common.seed);

    std::vector<std::string> stats;
    if (statistic == "cv")
        stats = {"C"};
    else if (statistic == "ks")
        stats = {"D"};
    else if (statistic == "landscape")
        stats = {"L0", "L1"};
    else
        throw std::invalid_argument("unknown statistic " + statistic);

    const std::string mode = common.bounded ? "bounded" : "periodic";
    for (const auto& s : stats) {
        NullTable table = null_table_from_ensemble(ens, s);
        std::string base = cache_name(s, n2d, lambda, mode, attempts, common.seed);
        save_null_table((fs::path(cache_dir) / base).string(), table);

        QuantileTable qt;
        for (double a : alpha_grid) {
            qt.alpha.push_back(a);
            qt.value.push_back(table.quantile(a));
        }
        save_quantile_csv((fs::path(cache_dir) / (s + "_quantiles.csv")).string(), qt);
        std::cout << s << ": " << table.samples.size() << " retained samples, q05="
                  << table.quantile(0.05) << " q95=" << table.quantile(0.95) << "\n";
    }

    json manifest = {{"subcommand", "null-table"}, {"statistic", statistic},
                     {"n2d", n2d},                 {"lambda", lambda},
                     {"attempts_per_k", attempts}, {"seed", common.seed},
                     {"box", common.box},          {"mode", mode},
                     {"retained", ens.total_retained()},
                     {"truncation_loss", ens.truncation_loss}};
    write_manifest(cache_dir, manifest);
    return 0;
}

int cmd_test(const CommonOpts& common, const std::string& input,
             std::vector<std::string> statistics, double lambda_opt, int n2d_opt,
             int attempts, const std::string& cache_dir, bool build_null,
             const std::string& out_file) {
    require_seed(common);
    SectionTessellation tess = load_tessellation(input);
    AreaSample sample = observed_sample(tess);
    if (sample.areas.empty()) throw std::invalid_argument("test: empty tessellation");

    int n2d = n2d_opt > 0 ? n2d_opt : tess.n2d();
    if (n2d != tess.n2d())
        throw std::invalid_argument("test: --n2d does not match the input tessellation");
    double lambda_hat = lambda_opt > 0.0 ? lambda_opt : pick_lambda_hat(tess);

    if (statistics.empty()) statistics = {"cv", "ks", "landscape"};
    BoxGeometry box = common.geometry();
    SectionPlane plane = axis_plane(2, 0.5 * box.lengths[2], box);
    const std::string mode = common.bounded ? "bounded" : "periodic";

    // Tables can come from the cache, but the mean CDF / mean landscapes are
    // recomputed from the deterministic ensemble either way.
    std::vector<std::string> needed;
    for (const auto& s : statistics) {
        if (s == "cv") needed.push_back("C");
        else if (s == "ks") needed.push_back("D");
        else if (s == "landscape") { needed.push_back("L0"); needed.push_back("L1"); }
        else throw std::invalid_argument("unknown statistic " + s);
    }
    std::map<std::string, NullTable> tables;
    std::vector<std::string> missing;
    for (const auto& s : needed) {
        fs::path p = fs::path(cache_dir) /
                     cache_name(s, n2d, lambda_hat, mode, attempts, common.seed);
        if (!cache_dir.empty() && fs::exists(p))
            tables[s] = load_null_table(p.string());
        else
            missing.push_back(s);
    }
    if (!missing.empty() && !build_null) {
        std::ostringstream os;
        os << "missing null tables (";
        for (const auto& s : missing) os << s << " ";
        os << ") in cache; rerun with --build-null or run the null-table subcommand";
        throw std::invalid_argument(os.str());
    }

    ConditionalEnsemble ens =
        build_conditional_ensemble(n2d, lambda_hat, box, plane, attempts, common.seed);
    for (const auto& s : missing) {
        tables[s] = null_table_from_ensemble(ens, s);
        if (!cache_dir.empty()) {
            fs::create_directories(cache_dir);
            save_null_table((fs::path(cache_dir) /
                             cache_name(s, n2d, lambda_hat, mode, attempts, common.seed))
                                .string(),
                            tables[s]);
        }
    }

    json results = json::array();
    auto quantiles_of = [](const NullTable& t) {
        return json{{"q05", t.quantile(0.05)},
                    {"q95", t.quantile(0.95)},
                    {"q025", t.quantile(0.025)},
                    {"q975", t.quantile(0.975)}};
    };

    for (const auto& s : statistics) {
        if (s == "cv") {
            TestResult r = cv_statistic(sample);
            const NullTable& t = tables["C"];
            json jr = {{"statistic", "C"},
                       {"value", r.value},
                       {"p_value", t.p_value(r.value, true)},
                       {"n_2d", n2d},
                       {"lambda_hat", lambda_hat},
                       {"quantiles_used", quantiles_of(t)},
                       {"reject_at_0.05",
                        r.value < t.quantile(0.025) || r.value > t.quantile(0.975)}};
            results.push_back(jr);
            std::cout << "C = " << r.value << "  (p = " << jr["p_value"] << ")\n";
        } else if (s == "ks") {
            StepCDF mean = mean_cdf_conditional(ens);
            TestResult r = ks_statistic_conditional(sample, mean, n2d);
            const NullTable& t = tables["D"];
            json jr = {{"statistic", "D"},
                       {"value", r.value},
                       {"p_value", t.p_value(r.value)},
                       {"n_2d", n2d},
                       {"lambda_hat", lambda_hat},
                       {"quantiles_used", quantiles_of(t)},
                       {"reject_at_0.05", r.value > t.quantile(0.95)}};
            results.push_back(jr);
            std::cout << "D = " << r.value << "  (p = " << jr["p_value"] << ")\n";
        } else {
            EnsembleLandscapes ls = ensemble_landscapes(ens);
            Landscape mean0 = mean_landscape_conditional(ens, ls, 0);
            Landscape mean1 = mean_landscape_conditional(ens, ls, 1);
            PointCloud2 cloud{cell_centroids(tess)};
            PersistenceDiagram diag = persistence_pairs(alpha_filtration(cloud));
            Landscape obs0 = landscape_from_diagram(diag.h0, ls.t_end_h0);
            Landscape obs1 = landscape_from_diagram(diag.h1, ls.t_end_h1);
            auto [r0, r1] = landscape_statistics(obs0, obs1, mean0, mean1);
            const NullTable& t0 = tables["L0"];
            const NullTable& t1 = tables["L1"];

            // joint thresholds need the per-replicate (L0, L1) pairing, which
            // sorted null tables no longer carry
            auto l0_raw = loo_samples("L0", ens);
            auto l1_raw = loo_samples("L1", ens);
            double m = calibrate_joint_level(l0_raw, l1_raw, ens.replicate_weights(), 0.05);
            double th0 = t0.quantile(1.0 - m);
            double th1 = t1.quantile(1.0 - m);
            bool reject = !(r0.value < th0 && r1.value < th1);
            json jr = {{"statistic", "L0,L1"},
                       {"value", {r0.value, r1.value}},
                       {"p_value", {t0.p_value(r0.value), t1.p_value(r1.value)}},
                       {"n_2d", n2d},
                       {"lambda_hat", lambda_hat},
                       {"joint_marginal_level", m},
                       {"thresholds", {th0, th1}},
                       {"quantiles_used", {quantiles_of(t0), quantiles_of(t1)}},
                       {"reject_at_0.05", reject}};
            results.push_back(jr);
            std::cout << "L0 = " << r0.value << ", L1 = " << r1.value
                      << "  (reject = " << (reject ? "yes" : "no") << ")\n";
        }
    }

    json report = {{"input", input},
                   {"n_2d", n2d},
                   {"lambda_hat", lambda_hat},
                   {"seed", common.seed},
                   {"attempts_per_k", attempts},
                   {"results", results}};
    std::string text = report.dump(2) + "\n";
    if (!out_file.empty()) write_text_file(out_file, text);
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson-Voronoi section consistency checker"};
    app.require_subcommand(1);

    CommonOpts sim_c, est_c, test_c, null_c;

    auto* sim = app.add_subcommand("simulate", "simulate sectional tessellations");
    double sim_lambda = 1.0;
    int sim_reps = 1;
    std::string sim_out = "out";
    sim->add_option("--lambda", sim_lambda, "intensity (points per unit volume)");
    sim->add_option("--replicates", sim_reps, "number of sections");
    sim->add_option("--out", sim_out, "output directory");
    add_common(sim, sim_c);

    auto* est = app.add_subcommand("estimate", "intensity estimates for a tessellation");
    std::string est_in, est_out;
    int est_boot = 1000;
    est->add_option("--input", est_in, "tessellation JSON")->required();
    est->add_option("--replicates", est_boot, "bootstrap replicates (0 disables CI)");
    est->add_option("--out", est_out, "report file");
    add_common(est, est_c);

    auto* tst = app.add_subcommand("test", "goodness-of-fit tests for a tessellation");
    std::string tst_in, tst_cache = "cache", tst_out;
    std::vector<std::string> tst_stats;
    double tst_lambda = 0.0;
    int tst_n2d = 0, tst_attempts = 60;
    bool tst_build = false;
    tst->add_option("--input", tst_in, "tessellation JSON")->required();
    tst->add_option("--statistic", tst_stats, "cv, ks and/or landscape");
    tst->add_option("--lambda", tst_lambda, "override the plug-in lambda");
    tst->add_option("--n2d", tst_n2d, "conditioning cell count");
    tst->add_option("--replicates", tst_attempts, "conditional attempts per N3D value");
    tst->add_option("--cache-dir", tst_cache, "null table cache directory");
    tst->add_flag("--build-null", tst_build, "build missing null tables");
    tst->add_option("--out", tst_out, "report file");
    add_common(tst, test_c);

    auto* tda = app.add_subcommand("tda", "persistence diagram and landscapes");
    std::string tda_in, tda_pts, tda_out = "tda";
    tda->add_option("--input", tda_in, "tessellation JSON (centroids are used)");
    tda->add_option("--points", tda_pts, "point CSV (cell_id,x,y)");
    tda->add_option("--out", tda_out, "output prefix");

    auto* nul = app.add_subcommand("null-table", "build and cache a null table");
    std::string nul_stat = "cv", nul_cache = "cache";
    double nul_lambda = 0.2;
    int nul_n2d = 50, nul_attempts = 60;
    std::vector<double> nul_alpha = kDefaultAlphaGrid;
    nul->add_option("--statistic", nul_stat, "cv, ks or landscape");
    nul->add_option("--n2d", nul_n2d, "conditioning cell count");
    nul->add_option("--lambda", nul_lambda, "intensity for the mixture weights");
    nul->add_option("--replicates", nul_attempts, "attempts per N3D value");
    nul->add_option("--cache-dir", nul_cache, "cache directory");
    nul->add_option("--alpha-grid", nul_alpha, "quantile levels");
    add_common(nul, null_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInvalid;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_c, sim_lambda, sim_reps, sim_out);
        if (est->parsed()) return cmd_estimate(est_c, est_in, est_boot, est_out);
        if (tst->parsed())
            return cmd_test(test_c, tst_in, tst_stats, tst_lambda, tst_n2d,
                            tst_attempts, tst_cache, tst_build, tst_out);
        if (tda->parsed()) return cmd_tda(tda_in, tda_pts, tda_out);
        if (nul->parsed())
            return cmd_null_table(null_c, nul_stat, nul_n2d, nul_lambda, nul_attempts,
                                  nul_cache, nul_alpha);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::string(e.what()).find("infeasible") != std::string::npos
                   ? kExitInfeasible
                   : kExitInvalid;
    }
    return 0;
}
