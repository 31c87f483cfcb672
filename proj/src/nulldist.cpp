#include "pvt/nulldist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pvt/stereology.hpp"

namespace pvt {

const std::vector<double> kDefaultAlphaGrid = {0.005, 0.01,  0.0125, 0.025,
                                               0.05,  0.1,   0.9,    0.95,
                                               0.975, 0.9875, 0.99,   0.995};

std::size_t ConditionalEnsemble::total_retained() const {
    std::size_t n = 0;
    for (const auto& r : replicates) n += r.size();
    return n;
}

std::vector<const ConditionalReplicate*> ConditionalEnsemble::flattened() const {
    std::vector<const ConditionalReplicate*> out;
    out.reserve(total_retained());
    for (const auto& stratum : replicates)
        for (const auto& r : stratum) out.push_back(&r);
    return out;
}

std::vector<double> ConditionalEnsemble::replicate_weights() const {
    std::vector<double> out;
    out.reserve(total_retained());
    for (std::size_t s = 0; s < replicates.size(); ++s) {
        if (replicates[s].empty()) continue;
        double w = stratum_weight[s] / static_cast<double>(replicates[s].size());
        for (std::size_t i = 0; i < replicates[s].size(); ++i) out.push_back(w);
    }
    return out;
}

std::vector<int> poisson_support(double mean, double mass_tol, int k_min) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson_support: mean must be positive");
    auto log_pmf = [&](int k) {
        return static_cast<double>(k) * std::log(mean) - mean -
               std::lgamma(static_cast<double>(k) + 1.0);
    };
    int mode = static_cast<int>(mean);
    int lo = mode, hi = mode;
    double mass = std::exp(log_pmf(mode));
    while (mass < 1.0 - mass_tol) {
        double below = lo > 0 ? std::exp(log_pmf(lo - 1)) : -1.0;
        double above = std::exp(log_pmf(hi + 1));
        if (below >= above) {
            --lo;
            mass += below;
        } else {
            ++hi;
            mass += above;
        }
        if (hi - lo > 10000000)
            throw std::runtime_error("poisson_support: range explosion");
    }
    lo = std::max(lo, k_min);
    if (lo > hi) lo = hi;
    std::vector<int> out;
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
}

std::map<int, double> estimate_n2d_given_n3d(int k, const BoxGeometry& box,
                                             const SectionPlane& plane,
                                             int replicates, std::uint64_t seed) {
    if (k < 0) throw std::invalid_argument("estimate_n2d_given_n3d: negative k");
    if (k == 0) return {{0, 1.0}};
    if (replicates < 1)
        throw std::invalid_argument("estimate_n2d_given_n3d: need replicates");
    std::vector<int> counts(static_cast<std::size_t>(replicates), 0);
    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t i) {
        GeneratorSet gen = sample_fixed_generators(k, box, child_seed(seed, i));
        counts[i] = section_tessellation(gen, plane).n2d();
    });
    std::map<int, double> table;
    for (int c : counts) table[c] += 1.0 / static_cast<double>(replicates);
    return table;
}

ConditionalEnsemble build_conditional_ensemble(int n2d, double lambda,
                                               const BoxGeometry& box,
                                               const SectionPlane& plane,
                                               int attempts_per_k,
                                               std::uint64_t seed) {
    if (n2d < 1) throw std::invalid_argument("build_conditional_ensemble: n2d < 1");
    if (!(lambda > 0.0))
        throw std::invalid_argument("build_conditional_ensemble: lambda must be positive");
    if (attempts_per_k < 1)
        throw std::invalid_argument("build_conditional_ensemble: need attempts");

    ConditionalEnsemble ens;
    ens.n2d = n2d;
    ens.lambda = lambda;
    ens.box = box;
    ens.plane = plane;
    ens.seed = seed;
    ens.attempts_per_k = attempts_per_k;
    const double mean = lambda * box.volume();
    ens.ks = poisson_support(mean, 1e-6, std::max(1, n2d));
    {
        // Mass below n2d contributes exactly zero (a section of k generators
        // has at most k cells), so only the tail outside the k range is lost.
        auto pmf = [&](int k) {
            return std::exp(static_cast<double>(k) * std::log(mean) - mean -
                            std::lgamma(static_cast<double>(k) + 1.0));
        };
        double inside = 0.0;
        for (int k : ens.ks) inside += pmf(k);
        double feasible = 1.0;
        for (int k = 0; k < ens.ks.front(); ++k)
            if (k < n2d) feasible -= pmf(k);
        ens.truncation_loss = std::max(0.0, feasible - inside);
    }

    const std::size_t strata = ens.ks.size();
    const std::size_t jobs = strata * static_cast<std::size_t>(attempts_per_k);
    std::vector<ConditionalReplicate> slot(jobs);
    std::vector<char> kept(jobs, 0);
    parallel_for(jobs, [&](std::size_t j) {
        std::size_t s = j / static_cast<std::size_t>(attempts_per_k);
        GeneratorSet gen = sample_fixed_generators(ens.ks[s], box, child_seed(seed, j));
        SectionTessellation tess = section_tessellation(gen, plane);
        if (tess.n2d() != n2d) return;
        ConditionalReplicate rep;
        rep.n3d = ens.ks[s];
        rep.areas = cell_areas(tess);
        rep.centroids = cell_centroids(tess);
        slot[j] = std::move(rep);
        kept[j] = 1;
    });

    ens.replicates.resize(strata);
    ens.retention.resize(strata, 0.0);
    for (std::size_t s = 0; s < strata; ++s) {
        for (int a = 0; a < attempts_per_k; ++a) {
            std::size_t j = s * static_cast<std::size_t>(attempts_per_k) +
                            static_cast<std::size_t>(a);
            if (kept[j]) ens.replicates[s].push_back(std::move(slot[j]));
        }
        ens.retention[s] = static_cast<double>(ens.replicates[s].size()) /
                           static_cast<double>(attempts_per_k);
    }

    ens.stratum_weight.resize(strata, 0.0);
    double best = -1e300;
    std::vector<double> logw(strata, -1e300);
    for (std::size_t s = 0; s < strata; ++s) {
        if (ens.retention[s] <= 0.0) continue;
        double k = ens.ks[s];
        logw[s] = std::log(ens.retention[s]) + k * std::log(mean) -
                  std::lgamma(k + 1.0);
        best = std::max(best, logw[s]);
    }
    if (best <= -1e300)
        throw std::runtime_error(
            "build_conditional_ensemble: infeasible conditioning, no replicate "
            "attained n2d = " + std::to_string(n2d));
    double total = 0.0;
    for (std::size_t s = 0; s < strata; ++s)
        if (logw[s] > -1e300) {
            ens.stratum_weight[s] = std::exp(logw[s] - best);
            total += ens.stratum_weight[s];
        }
    for (double& w : ens.stratum_weight) w /= total;
    return ens;
}

std::string geometry_descriptor(const BoxGeometry& box, const SectionPlane& plane) {
    std::ostringstream os;
    os << "box " << box.lengths[0] << "x" << box.lengths[1] << "x" << box.lengths[2]
       << (box.mode == BoundaryMode::periodic ? " periodic" : " bounded")
       << "; plane n=(" << plane.normal.x << "," << plane.normal.y << ","
       << plane.normal.z << ") off=" << plane.offset << " win=["
       << plane.window_origin.x << "," << plane.window_origin.y << ";"
       << plane.window_size.x << "x" << plane.window_size.y << "]";
    return os.str();
}

double NullTable::quantile(double p) const {
    std::vector<std::pair<double, double>> vw;
    vw.reserve(samples.size());
    for (const auto& s : samples) vw.push_back({s.value, s.weight});
    return weighted_quantile(std::move(vw), p);
}

double NullTable::p_value(double t, bool two_sided) const {
    if (samples.empty()) throw std::runtime_error("NullTable::p_value: empty table");
    double total = 0.0, upper = 0.0, lower = 0.0;
    for (const auto& s : samples) {
        total += s.weight;
        if (s.value >= t) upper += s.weight;
        if (s.value <= t) lower += s.weight;
    }
    const double floor_p = 1.0 / (static_cast<double>(samples.size()) + 1.0);
    upper = std::max(upper / total, floor_p);
    lower = std::max(lower / total, floor_p);
    double p = two_sided ? 2.0 * std::min(upper, lower) : upper;
    return std::min(p, 1.0);
}

StepCDF mean_cdf_conditional(const ConditionalEnsemble& ens) {
    auto flat = ens.flattened();
    if (flat.empty()) throw std::runtime_error("mean_cdf_conditional: empty ensemble");
    std::vector<StepCDF> cdfs;
    cdfs.reserve(flat.size());
    for (const auto* r : flat) cdfs.push_back(StepCDF::from_sample(r->areas));
    std::vector<const StepCDF*> ptrs;
    for (const auto& c : cdfs) ptrs.push_back(&c);
    return StepCDF::mixture(ptrs, ens.replicate_weights());
}

EnsembleLandscapes ensemble_landscapes(const ConditionalEnsemble& ens) {
    auto flat = ens.flattened();
    if (flat.empty()) throw std::runtime_error("ensemble_landscapes: empty ensemble");
    std::vector<PersistenceDiagram> diagrams(flat.size());
    parallel_for(flat.size(), [&](std::size_t i) {
        PointCloud2 cloud{flat[i]->centroids};
        diagrams[i] = persistence_pairs(alpha_filtration(cloud));
    });

    EnsembleLandscapes out;
    for (const auto& d : diagrams) {
        for (const auto& p : d.h0) out.t_end_h0 = std::max(out.t_end_h0, p.death);
        for (const auto& p : d.h1) out.t_end_h1 = std::max(out.t_end_h1, p.death);
    }
    if (out.t_end_h0 <= 0.0) out.t_end_h0 = 1.0;
    if (out.t_end_h1 <= 0.0) out.t_end_h1 = 1.0;

    out.h0.resize(flat.size());
    out.h1.resize(flat.size());
    parallel_for(flat.size(), [&](std::size_t i) {
        out.h0[i] = landscape_from_diagram(diagrams[i].h0, out.t_end_h0);
        out.h1[i] = landscape_from_diagram(diagrams[i].h1, out.t_end_h1);
    });
    return out;
}

Landscape mean_landscape_conditional(const ConditionalEnsemble& ens,
                                     const EnsembleLandscapes& ls, int dimension) {
    if (dimension != 0 && dimension != 1)
        throw std::invalid_argument("mean_landscape_conditional: dimension must be 0 or 1");
    const auto& src = dimension == 0 ? ls.h0 : ls.h1;
    return mean_landscape(src, ens.replicate_weights(), 1e-12);
}

std::vector<double> loo_samples(const std::string& statistic,
                                const ConditionalEnsemble& ens) {
    auto flat = ens.flattened();
    if (flat.size() < 2) throw std::invalid_argument("loo_samples: need >= 2 replicates");
    auto w = ens.replicate_weights();
    std::vector<double> out(flat.size());
    if (statistic == "D") {
        StepCDF mean = mean_cdf_conditional(ens);
        parallel_for(flat.size(), [&](std::size_t i) {
            // mean without i equals (mean - w_i F_i) / (1 - w_i), so the sup
            // distance is the full-mean distance inflated by 1 / (1 - w_i)
            StepCDF fi = StepCDF::from_sample(flat[i]->areas);
            out[i] = ks_distance(mean, fi) / (1.0 - w[i]);
        });
    } else if (statistic == "L0" || statistic == "L1") {
        EnsembleLandscapes ls = ensemble_landscapes(ens);
        int dim = statistic == "L1" ? 1 : 0;
        Landscape mean = mean_landscape_conditional(ens, ls, dim);
        const auto& src = dim == 0 ? ls.h0 : ls.h1;
        parallel_for(flat.size(), [&](std::size_t i) {
            out[i] = landscape_l2_distance(src[i], mean) / (1.0 - w[i]);
        });
    } else {
        throw std::invalid_argument("loo_samples: unsupported statistic " + statistic);
    }
    return out;
}

QuantileTable loo_quantiles(const std::string& statistic,
                            const ConditionalEnsemble& ens,
                            const std::vector<double>& alphas) {
    std::vector<double> vals = loo_samples(statistic, ens);
    auto w = ens.replicate_weights();
    QuantileTable table;
    for (double a : alphas) {
        std::vector<std::pair<double, double>> vw;
        for (std::size_t i = 0; i < vals.size(); ++i) vw.push_back({vals[i], w[i]});
        table.alpha.push_back(a);
        table.value.push_back(weighted_quantile(std::move(vw), a));
    }
    return table;
}

NullTable null_table_from_ensemble(const ConditionalEnsemble& ens,
                                   const std::string& statistic) {
    auto flat = ens.flattened();
    auto w = ens.replicate_weights();
    NullTable table;
    table.statistic = statistic;
    table.n2d = ens.n2d;
    table.lambda = ens.lambda;
    table.geometry = geometry_descriptor(ens.box, ens.plane);
    table.seed = ens.seed;
    table.attempts_per_k = ens.attempts_per_k;
    table.truncation_loss = ens.truncation_loss;
    for (std::size_t s = 0; s < ens.ks.size(); ++s)
        if (ens.stratum_weight[s] > 0.0)
            table.weights_by_n3d[ens.ks[s]] = ens.stratum_weight[s];

    std::vector<double> vals;
    if (statistic == "C") {
        vals.resize(flat.size());
        parallel_for(flat.size(), [&](std::size_t i) {
            AreaSample s{flat[i]->areas, SampleSource::periodic_model};
            vals[i] = cv_statistic(s).value;
        });
    } else {
        vals = loo_samples(statistic, ens);
    }
    for (std::size_t i = 0; i < flat.size(); ++i)
        table.samples.push_back({vals[i], flat[i]->n3d, w[i]});
    std::sort(table.samples.begin(), table.samples.end(),
              [](const NullSample& a, const NullSample& b) { return a.value < b.value; });
    return table;
}

NullTable build_null_table(const std::string& statistic, int n2d, double lambda,
                           const BoxGeometry& box, const SectionPlane& plane,
                           int attempts_per_k, std::uint64_t seed) {
    ConditionalEnsemble ens =
        build_conditional_ensemble(n2d, lambda, box, plane, attempts_per_k, seed);
    return null_table_from_ensemble(ens, statistic);
}

BootstrapCI bootstrap_ci_from_samples(double lambda_hat,
                                      std::vector<double> sqrt_deviations,
                                      double level) {
    if (!(lambda_hat > 0.0))
        throw std::invalid_argument("bootstrap_ci: lambda_hat must be positive");
    if (sqrt_deviations.empty())
        throw std::invalid_argument("bootstrap_ci: empty sample");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("bootstrap_ci: level outside (0,1)");
    const double a = (1.0 - level) / 2.0;
    BootstrapCI ci;
    ci.level = level;
    ci.lambda_hat = lambda_hat;
    ci.l_low = quantile(sqrt_deviations, a);
    ci.l_high = quantile(sqrt_deviations, 1.0 - a);
    const double root = std::sqrt(lambda_hat);
    double lo = root - ci.l_high;
    double hi = root - ci.l_low;
    ci.lower = lo > 0.0 ? lo * lo : 0.0;
    ci.upper = hi > 0.0 ? hi * hi : 0.0;
    return ci;
}

BootstrapCI bootstrap_ci_lambda(double lambda_hat, const BoxGeometry& box,
                                int n_boot, std::uint64_t seed, double level) {
    if (!(lambda_hat > 0.0))
        throw std::invalid_argument("bootstrap_ci_lambda: lambda_hat must be positive");
    if (n_boot < 2) throw std::invalid_argument("bootstrap_ci_lambda: n_boot < 2");
    std::vector<double> devs(static_cast<std::size_t>(n_boot));
    const double root = std::sqrt(lambda_hat);
    parallel_for(static_cast<std::size_t>(n_boot), [&](std::size_t i) {
        std::uint64_t s = child_seed(seed, i);
        GeneratorSet gen = sample_poisson_generators(lambda_hat, box, child_seed(s, 0));
        Rng rng = make_rng(child_seed(s, 1));
        SectionPlane plane = sample_axis_plane(box, rng);
        SectionTessellation tess = section_tessellation(gen, plane);
        SectionSummary sum = summarize_section(tess);
        devs[i] = std::sqrt(estimate_lambda(sum, LambdaMethod::a).value) - root;
    });
    return bootstrap_ci_from_samples(lambda_hat, std::move(devs), level);
}

double calibrate_joint_level(const std::vector<double>& l0,
                             const std::vector<double>& l1,
                             const std::vector<double>& weights, double target) {
    if (l0.size() != l1.size() || l0.size() != weights.size() || l0.empty())
        throw std::invalid_argument("calibrate_joint_level: size mismatch");
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("calibrate_joint_level: bad target");
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);

    auto rate = [&](double m) {
        std::vector<std::pair<double, double>> vw0, vw1;
        for (std::size_t i = 0; i < l0.size(); ++i) {
            vw0.push_back({l0[i], weights[i]});
            vw1.push_back({l1[i], weights[i]});
        }
        double q0 = weighted_quantile(std::move(vw0), 1.0 - m);
        double q1 = weighted_quantile(std::move(vw1), 1.0 - m);
        double r = 0.0;
        for (std::size_t i = 0; i < l0.size(); ++i)
            if (l0[i] > q0 || l1[i] > q1) r += weights[i];
        return r / total;
    };

    double lo = 0.0, hi = target;  // joint rate >= marginal rate, so m <= target
    for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        if (rate(mid) > target)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

}  // namespace pvt
