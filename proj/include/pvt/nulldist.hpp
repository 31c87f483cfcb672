#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvt/geometry.hpp"
#include "pvt/stats.hpp"

namespace pvt {

// One simulated section retained by the conditioning N2D = n2d.
struct ConditionalReplicate {
    int n3d = 0;
    std::vector<double> areas;
    std::vector<Vec2> centroids;
};

// Retained replicates stratified by N3D = k with the Lemma-style mixture
// weights w_k proportional to P(N2D = n2d | N3D = k) (lambda V)^k / k!.
struct ConditionalEnsemble {
    int n2d = 0;
    double lambda = 0.0;
    BoxGeometry box;
    SectionPlane plane;
    std::uint64_t seed = 0;
    int attempts_per_k = 0;
    std::vector<int> ks;
    std::vector<double> stratum_weight;  // normalized, one per ks entry
    std::vector<double> retention;       // estimated P(N2D = n2d | N3D = k)
    std::vector<std::vector<ConditionalReplicate>> replicates;
    double truncation_loss = 0.0;        // Poisson mass outside the k range

    std::size_t total_retained() const;
    std::vector<const ConditionalReplicate*> flattened() const;
    // Per-replicate weights matching flattened(): stratum weight split evenly.
    std::vector<double> replicate_weights() const;
};

// k values covering at least 1 - mass_tol of the Poisson(mean) mass, never
// below k_min.
std::vector<int> poisson_support(double mean, double mass_tol, int k_min);

// Empirical distribution of N2D over `replicates` binomial-process sections
// with exactly k generators. k = 0 yields {0: 1} by convention.
std::map<int, double> estimate_n2d_given_n3d(int k, const BoxGeometry& box,
                                             const SectionPlane& plane,
                                             int replicates, std::uint64_t seed);

ConditionalEnsemble build_conditional_ensemble(int n2d, double lambda,
                                               const BoxGeometry& box,
                                               const SectionPlane& plane,
                                               int attempts_per_k,
                                               std::uint64_t seed);

struct NullSample {
    double value = 0.0;
    int n3d = 0;
    double weight = 0.0;
};

struct NullTable {
    int schema_version = 1;
    std::string statistic;  // "C", "D", "L0" or "L1"
    int n2d = 0;
    double lambda = 0.0;
    std::string geometry;   // descriptor: box lengths + mode + window
    std::uint64_t seed = 0;
    int attempts_per_k = 0;
    double truncation_loss = 0.0;
    std::map<int, double> weights_by_n3d;
    std::vector<NullSample> samples;  // sorted by value

    double quantile(double p) const;
    // Weighted upper-tail proportion P(T >= t); two-sided doubles the smaller
    // tail (capped at 1). Never returns below the resolution floor.
    double p_value(double t, bool two_sided = false) const;
};

std::string geometry_descriptor(const BoxGeometry& box, const SectionPlane& plane);

// statistic: "C" (CV per replicate), "D" (leave-one-out sup distance from the
// conditional mean CDF), "L0"/"L1" (leave-one-out landscape distances).
NullTable null_table_from_ensemble(const ConditionalEnsemble& ens,
                                   const std::string& statistic);
NullTable build_null_table(const std::string& statistic, int n2d, double lambda,
                           const BoxGeometry& box, const SectionPlane& plane,
                           int attempts_per_k, std::uint64_t seed);

StepCDF mean_cdf_conditional(const ConditionalEnsemble& ens);

// Per-replicate landscapes on a common domain end (max finite death per
// dimension across the ensemble).
struct EnsembleLandscapes {
    double t_end_h0 = 0.0;
    double t_end_h1 = 0.0;
    std::vector<Landscape> h0;  // ordering matches ConditionalEnsemble::flattened
    std::vector<Landscape> h1;
};

EnsembleLandscapes ensemble_landscapes(const ConditionalEnsemble& ens);

Landscape mean_landscape_conditional(const ConditionalEnsemble& ens,
                                     const EnsembleLandscapes& ls, int dimension);

struct QuantileTable {
    std::vector<double> alpha;
    std::vector<double> value;
};

extern const std::vector<double> kDefaultAlphaGrid;

// Leave-one-out null samples: each replicate against the mean object of the
// others. statistic in {"D", "L0", "L1"}.
std::vector<double> loo_samples(const std::string& statistic,
                                const ConditionalEnsemble& ens);
QuantileTable loo_quantiles(const std::string& statistic,
                            const ConditionalEnsemble& ens,
                            const std::vector<double>& alphas = kDefaultAlphaGrid);

struct BootstrapCI {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.90;
    double lambda_hat = 0.0;
    double l_low = 0.0;   // level/2 lower quantile of sqrt(lambda*) - sqrt(lambda_hat)
    double l_high = 0.0;  // matching upper quantile
};

BootstrapCI bootstrap_ci_from_samples(double lambda_hat,
                                      std::vector<double> sqrt_deviations,
                                      double level = 0.90);
// Simulates n_boot diagrams at lambda_hat, re-estimates lambda from one random
// section each (method a) and inverts the sqrt-scale deviation quantiles.
BootstrapCI bootstrap_ci_lambda(double lambda_hat, const BoxGeometry& box,
                                int n_boot, std::uint64_t seed,
                                double level = 0.90);

// Marginal quantile level m such that the joint rule "reject when L0 exceeds
// its (1-m) quantile or L1 exceeds its (1-m) quantile" has weighted rejection
// rate `target` on the given null samples.
double calibrate_joint_level(const std::vector<double>& l0,
                             const std::vector<double>& l1,
                             const std::vector<double>& weights, double target);

}  // namespace pvt
