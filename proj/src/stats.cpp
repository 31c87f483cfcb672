#include "pvt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pvt {

double StepCDF::operator()(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    if (it == x.begin()) return 0.0;
    return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

double StepCDF::left_limit(double t) const {
    auto it = std::lower_bound(x.begin(), x.end(), t);
    if (it == x.begin()) return 0.0;
    return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

StepCDF StepCDF::from_sample(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("StepCDF::from_sample: empty sample");
    std::sort(values.begin(), values.end());
    StepCDF out;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!out.x.empty() && out.x.back() == values[i]) {
            out.F.back() = static_cast<double>(i + 1) / n;
        } else {
            out.x.push_back(values[i]);
            out.F.push_back(static_cast<double>(i + 1) / n);
        }
    }
    return out;
}

StepCDF StepCDF::mixture(const std::vector<const StepCDF*>& cdfs,
                         const std::vector<double>& weights) {
    if (cdfs.empty() || cdfs.size() != weights.size())
        throw std::invalid_argument("StepCDF::mixture: bad inputs");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("StepCDF::mixture: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("StepCDF::mixture: zero weight");

    // Jump sizes merge additively, so accumulate (location, weighted jump).
    std::vector<std::pair<double, double>> jumps;
    for (std::size_t i = 0; i < cdfs.size(); ++i) {
        const StepCDF& c = *cdfs[i];
        double prev = 0.0;
        for (std::size_t j = 0; j < c.x.size(); ++j) {
            jumps.push_back({c.x[j], (c.F[j] - prev) * weights[i] / total});
            prev = c.F[j];
        }
    }
    std::sort(jumps.begin(), jumps.end());
    StepCDF out;
    double cum = 0.0;
    for (const auto& [loc, jump] : jumps) {
        cum += jump;
        if (!out.x.empty() && out.x.back() == loc)
            out.F.back() = cum;
        else {
            out.x.push_back(loc);
            out.F.push_back(cum);
        }
    }
    if (!out.F.empty()) out.F.back() = 1.0;  // absorb rounding
    return out;
}

double ks_distance(const StepCDF& a, const StepCDF& b) {
    double d = 0.0;
    for (const StepCDF* s : {&a, &b})
        for (double t : s->x) {
            d = std::max(d, std::abs(a(t) - b(t)));
            d = std::max(d, std::abs(a.left_limit(t) - b.left_limit(t)));
        }
    return d;
}

TestResult cv_statistic(const AreaSample& sample) {
    const auto& a = sample.areas;
    if (a.size() < 2)
        throw std::invalid_argument("cv_statistic: need at least two areas");
    for (double v : a)
        if (!(v > 0.0)) throw std::invalid_argument("cv_statistic: nonpositive area");
    const double n = static_cast<double>(a.size());
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : a) ss += (v - mean) * (v - mean);
    TestResult r;
    r.statistic = "C";
    r.value = std::sqrt(ss / (n - 1.0)) / mean;
    r.n2d = sample.n2d();
    return r;
}

TestResult ks_statistic_periodic(const AreaSample& sample, const ReferenceCDF& ref,
                                 double lambda_hat) {
    if (sample.areas.empty())
        throw std::invalid_argument("ks_statistic_periodic: empty sample");
    if (!(lambda_hat > 0.0))
        throw std::invalid_argument("ks_statistic_periodic: lambda_hat must be positive");
    const double scale = std::cbrt(lambda_hat * lambda_hat);
    std::vector<double> scaled;
    scaled.reserve(sample.areas.size());
    for (double v : sample.areas) scaled.push_back(v * scale);
    TestResult r;
    r.statistic = "D";
    r.value = ks_distance(ref.cdf, StepCDF::from_sample(std::move(scaled)));
    r.n2d = sample.n2d();
    r.lambda_hat = lambda_hat;
    return r;
}

TestResult ks_statistic_conditional(const AreaSample& sample,
                                    const StepCDF& mean_cdf, int mean_n2d) {
    if (sample.areas.empty())
        throw std::invalid_argument("ks_statistic_conditional: empty sample");
    if (mean_n2d != sample.n2d())
        throw std::invalid_argument("ks_statistic_conditional: n2d mismatch");
    TestResult r;
    r.statistic = "D";
    r.value = ks_distance(mean_cdf, StepCDF::from_sample(sample.areas));
    r.n2d = sample.n2d();
    return r;
}

std::pair<TestResult, TestResult> landscape_statistics(const Landscape& h0,
                                                       const Landscape& h1,
                                                       const Landscape& mean_h0,
                                                       const Landscape& mean_h1) {
    if (mean_h0.fns.empty() && mean_h1.fns.empty())
        throw std::invalid_argument("landscape_statistics: missing mean landscapes");
    TestResult l0, l1;
    l0.statistic = "L0";
    l0.value = landscape_l2_distance(h0, mean_h0);
    l0.t_end = std::max(h0.t_end, mean_h0.t_end);
    l1.statistic = "L1";
    l1.value = landscape_l2_distance(h1, mean_h1);
    l1.t_end = std::max(h1.t_end, mean_h1.t_end);
    return {l0, l1};
}

namespace {

double epan(double u) { return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }

// Truncated moments a_l(c) = int_{-1}^{c} u^l K(u) du for the Epanechnikov
// kernel, c in [0, 1].
double a0(double c) { return 0.75 * (c - c * c * c / 3.0 + 2.0 / 3.0); }
double a1(double c) { return 0.75 * (c * c / 2.0 - c * c * c * c / 4.0) - 0.1875; }
double a2(double c) {
    return 0.75 * (c * c * c / 3.0 - std::pow(c, 5) / 5.0 + 2.0 / 15.0);
}

}  // namespace

std::vector<double> kde_boundary_corrected(const std::vector<double>& sample,
                                           double h,
                                           const std::vector<double>& grid) {
    if (sample.empty())
        throw std::invalid_argument("kde_boundary_corrected: empty sample");
    if (!(h > 0.0))
        throw std::invalid_argument("kde_boundary_corrected: bandwidth must be positive");
    const double n = static_cast<double>(sample.size());
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid) {
        if (x < 0.0) {
            out.push_back(0.0);
            continue;
        }
        const double c = std::min(x / h, 1.0);
        const double m0 = a0(c), m1 = a1(c), m2 = a2(c);
        const double det = m0 * m2 - m1 * m1;
        double f = 0.0;
        for (double xi : sample) {
            double u = (x - xi) / h;
            // data live on [0, inf), so u <= c by construction
            f += (m2 - m1 * u) * epan(u);
        }
        out.push_back(f / (n * h * det));
    }
    return out;
}

double weighted_quantile(std::vector<std::pair<double, double>> value_weight,
                         double p) {
    if (value_weight.empty())
        throw std::invalid_argument("weighted_quantile: empty input");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("weighted_quantile: p outside [0,1]");
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& [v, w] : value_weight) {
        if (!(w >= 0.0)) throw std::invalid_argument("weighted_quantile: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("weighted_quantile: zero weight");
    double cum = 0.0;
    for (const auto& [v, w] : value_weight) {
        cum += w;
        if (cum >= p * total - 1e-12 * total) return v;
    }
    return value_weight.back().first;
}

double quantile(std::vector<double> values, double p) {
    std::vector<std::pair<double, double>> vw;
    vw.reserve(values.size());
    for (double v : values) vw.push_back({v, 1.0});
    return weighted_quantile(std::move(vw), p);
}

}  // namespace pvt
