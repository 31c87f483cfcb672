#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pvt/stats.hpp"

using namespace pvt;

TEST_CASE("cv statistic closed forms") {
    AreaSample equal{{2.0, 2.0, 2.0}};
    CHECK(cv_statistic(equal).value == 0.0);

    AreaSample two{{1.0, 3.0}};
    CHECK(cv_statistic(two).value == doctest::Approx(std::sqrt(2.0) / 2.0));

    AreaSample one{{1.0}};
    CHECK_THROWS_AS(cv_statistic(one), std::invalid_argument);

    AreaSample sample{{0.4, 1.1, 0.9, 2.3, 0.7}};
    double c = cv_statistic(sample).value;
    AreaSample scaled = sample;
    for (double& a : scaled.areas) a *= 17.5;
    CHECK(std::abs(cv_statistic(scaled).value - c) < 1e-12);
}

TEST_CASE("step cdf evaluation and ks distance") {
    StepCDF f = StepCDF::from_sample({1.0, 2.0, 3.0, 4.0});
    CHECK(f(0.5) == 0.0);
    CHECK(f(1.0) == doctest::Approx(0.25));
    CHECK(f(2.5) == doctest::Approx(0.5));
    CHECK(f(4.0) == doctest::Approx(1.0));
    CHECK(f.left_limit(1.0) == 0.0);
    CHECK(f.left_limit(2.0) == doctest::Approx(0.25));

    StepCDF g = StepCDF::from_sample({2.5});
    CHECK(ks_distance(f, g) == doctest::Approx(0.5));
    CHECK(ks_distance(f, f) == 0.0);
}

TEST_CASE("cdf mixture") {
    StepCDF a = StepCDF::from_sample({1.0, 2.0});
    StepCDF b = StepCDF::from_sample({2.0, 4.0});
    StepCDF m = StepCDF::mixture({&a, &b}, {1.0, 1.0});
    CHECK(m(1.0) == doctest::Approx(0.25));
    CHECK(m(2.0) == doctest::Approx(0.75));
    CHECK(m(4.0) == doctest::Approx(1.0));
    double prev = 0.0;
    for (double v : m.F) {
        CHECK(v >= prev);
        prev = v;
    }

    StepCDF single = StepCDF::mixture({&a}, {3.0});
    CHECK(ks_distance(single, a) == 0.0);
}

TEST_CASE("ks statistic periodic") {
    Rng rng = make_rng(5);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::vector<double> base;
    for (int i = 0; i < 4000; ++i) base.push_back(u(rng));
    ReferenceCDF ref{StepCDF::from_sample(base), base.size()};

    // a large sample from the same distribution should be close; keep its
    // atoms off the reference atoms so sup evaluations are stable
    std::vector<double> draw;
    for (int i = 0; i < 2000; ++i) draw.push_back(u(rng));
    AreaSample sample{draw};
    double d = ks_statistic_periodic(sample, ref, 1.0).value;
    CHECK(d < 0.05);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);

    // D depends on the areas only through lambda_hat^{2/3} * a
    AreaSample scaled = sample;
    for (double& a : scaled.areas) a *= 4.0;
    double d2 = ks_statistic_periodic(scaled, ref, 1.0 / 8.0).value;
    CHECK(std::abs(d2 - d) < 1e-12);

    CHECK_THROWS_AS(ks_statistic_periodic(sample, ref, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ks_statistic_periodic(AreaSample{}, ref, 1.0), std::invalid_argument);
}

TEST_CASE("ks statistic conditional") {
    AreaSample sample{{1.0, 2.0, 3.0}};
    StepCDF mean = StepCDF::from_sample(sample.areas);
    CHECK(ks_statistic_conditional(sample, mean, 3).value == 0.0);
    CHECK_THROWS_AS(ks_statistic_conditional(sample, mean, 4), std::invalid_argument);
}

TEST_CASE("landscape statistics") {
    Landscape l = landscape_from_diagram({{0.0, 2.0}}, 2.0);
    Landscape zero;
    zero.t_end = 2.0;
    auto [s0, s1] = landscape_statistics(l, zero, l, l);
    CHECK(s0.value == 0.0);
    CHECK(s1.value == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(s0.statistic == "L0");
    CHECK(s1.statistic == "L1");
}

TEST_CASE("kde boundary correction") {
    Rng rng = make_rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> sample;
    for (int i = 0; i < 4000; ++i) sample.push_back(u(rng));
    const double h = 0.2;

    // far from the boundary the correction is the identity
    auto far = kde_boundary_corrected(sample, h, {0.5});
    double plain = 0.0;
    for (double xi : sample) {
        double t = (0.5 - xi) / h;
        if (std::abs(t) < 1.0) plain += 0.75 * (1.0 - t * t);
    }
    plain /= static_cast<double>(sample.size()) * h;
    CHECK(std::abs(far[0] - plain) < 1e-9);

    // at zero the corrected estimate recovers the density, the plain one halves it
    auto at0 = kde_boundary_corrected(sample, h, {0.0});
    double plain0 = 0.0;
    for (double xi : sample) {
        double t = (0.0 - xi) / h;
        if (std::abs(t) < 1.0) plain0 += 0.75 * (1.0 - t * t);
    }
    plain0 /= static_cast<double>(sample.size()) * h;
    CHECK(std::abs(at0[0] - 1.0) < std::abs(plain0 - 1.0));
    CHECK(plain0 == doctest::Approx(0.5).epsilon(0.1));

    // normalization
    std::vector<double> grid;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) grid.push_back(1.5 * i / n);
    auto dens = kde_boundary_corrected(sample, h, grid);
    double integral = 0.0;
    for (int i = 0; i < n; ++i)
        integral += 0.5 * (dens[i] + dens[i + 1]) * (1.5 / n);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));

    CHECK_THROWS_AS(kde_boundary_corrected(sample, 0.0, {0.5}), std::invalid_argument);
}

TEST_CASE("quantiles") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    CHECK(quantile(v, 0.5) == doctest::Approx(50.0));
    CHECK(quantile(v, 0.95) == doctest::Approx(95.0));
    CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile(v, 1.0) == doctest::Approx(100.0));

    CHECK(weighted_quantile({{1.0, 0.2}, {5.0, 0.8}}, 0.5) == doctest::Approx(5.0));
    CHECK(weighted_quantile({{1.0, 0.2}, {5.0, 0.8}}, 0.1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(weighted_quantile({}, 0.5), std::invalid_argument);
}
