#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pvt/tda.hpp"

namespace pvt {

enum class SampleSource { periodic_model, observed };

struct AreaSample {
    std::vector<double> areas;
    SampleSource source = SampleSource::observed;

    int n2d() const { return static_cast<int>(areas.size()); }
};

// Right-continuous step function with jumps at x[i], value F[i] on [x[i], x[i+1]).
struct StepCDF {
    std::vector<double> x;
    std::vector<double> F;

    double operator()(double t) const;
    double left_limit(double t) const;

    static StepCDF from_sample(std::vector<double> values);
    // Pointwise weighted mean of step CDFs; weights normalized internally.
    static StepCDF mixture(const std::vector<const StepCDF*>& cdfs,
                           const std::vector<double>& weights);
};

struct ReferenceCDF {
    StepCDF cdf;          // areas of 2D sectional cells at lambda = 1
    std::size_t n_cells = 0;
};

struct TestResult {
    std::string statistic;   // "C", "D", "L0" or "L1"
    double value = 0.0;
    double p_value = -1.0;   // negative until a null table evaluates it
    int n2d = 0;
    double lambda_hat = 0.0;
    double t_end = 0.0;
};

// sup |a - b| over the merged jump points, both one-sided limits.
double ks_distance(const StepCDF& a, const StepCDF& b);

// C = sample standard deviation (n-1 denominator) / mean.
TestResult cv_statistic(const AreaSample& sample);

// D = sup_x |F1(x) - G(x)| with G the ecdf of the areas rescaled to unit
// intensity (a -> lambda_hat^{2/3} a).
TestResult ks_statistic_periodic(const AreaSample& sample, const ReferenceCDF& ref,
                                 double lambda_hat);

// D = sup_x |mean_cdf(x) - ecdf(x)|; mean_n2d must match the sample size.
TestResult ks_statistic_conditional(const AreaSample& sample,
                                    const StepCDF& mean_cdf, int mean_n2d);

// L2 distances of the observed H0/H1 landscapes from the conditional means.
std::pair<TestResult, TestResult> landscape_statistics(const Landscape& h0,
                                                       const Landscape& h1,
                                                       const Landscape& mean_h0,
                                                       const Landscape& mean_h1);

// Epanechnikov density estimate on [0, inf) with the Jones linear-combination
// boundary correction, evaluated at the grid points.
std::vector<double> kde_boundary_corrected(const std::vector<double>& sample,
                                           double h,
                                           const std::vector<double>& grid);

// Left-continuous inverse CDF quantiles. The unweighted overload treats every
// value equally.
double quantile(std::vector<double> values, double p);
double weighted_quantile(std::vector<std::pair<double, double>> value_weight,
                         double p);

}  // namespace pvt
