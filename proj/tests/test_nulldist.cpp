#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pvt/nulldist.hpp"

using namespace pvt;

TEST_CASE("poisson support covers the requested mass") {
    auto ks = poisson_support(200.0, 1e-6, 1);
    CHECK(ks.front() > 100);
    CHECK(ks.back() < 300);
    double mass = 0.0;
    for (int k : ks)
        mass += std::exp(k * std::log(200.0) - 200.0 - std::lgamma(k + 1.0));
    CHECK(mass > 1.0 - 1e-6);

    auto trimmed = poisson_support(4.0, 1e-6, 3);
    CHECK(trimmed.front() == 3);
}

TEST_CASE("n2d given n3d table") {
    BoxGeometry box = make_box(2, 2, 2, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.0, box);

    auto zero = estimate_n2d_given_n3d(0, box, plane, 10, 1);
    CHECK(zero.at(0) == doctest::Approx(1.0));

    auto one = estimate_n2d_given_n3d(1, box, plane, 50, 2);
    CHECK(one.at(1) == doctest::Approx(1.0));

    auto five = estimate_n2d_given_n3d(5, box, plane, 200, 3);
    double total = 0.0;
    for (const auto& [n2d, p] : five) {
        CHECK(n2d >= 1);
        CHECK(n2d <= 5);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("conditional ensemble: weights, feasibility, determinism") {
    BoxGeometry box = make_box(2, 2, 2, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.0, box);
    auto ens = build_conditional_ensemble(3, 0.5, box, plane, 60, 99);

    CHECK(ens.total_retained() > 20);
    double wsum = std::accumulate(ens.stratum_weight.begin(), ens.stratum_weight.end(), 0.0);
    CHECK(std::abs(wsum - 1.0) < 1e-12);
    CHECK(ens.truncation_loss < 1e-6);
    for (std::size_t s = 0; s < ens.ks.size(); ++s) {
        CHECK(ens.ks[s] >= 3);
        for (const auto& r : ens.replicates[s]) {
            CHECK(r.n3d == ens.ks[s]);
            CHECK(r.areas.size() == 3);
            CHECK(r.centroids.size() == 3);
        }
    }
    auto w = ens.replicate_weights();
    CHECK(w.size() == ens.total_retained());
    CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) < 1e-9);

    auto again = build_conditional_ensemble(3, 0.5, box, plane, 60, 99);
    REQUIRE(again.total_retained() == ens.total_retained());
    auto fa = ens.flattened(), fb = again.flattened();
    for (std::size_t i = 0; i < fa.size(); ++i) {
        REQUIRE(fa[i]->areas.size() == fb[i]->areas.size());
        for (std::size_t j = 0; j < fa[i]->areas.size(); ++j)
            CHECK(fa[i]->areas[j] == fb[i]->areas[j]);
    }

    CHECK_THROWS(build_conditional_ensemble(500, 0.5, box, plane, 5, 1));
}

TEST_CASE("null table quantiles and p-values") {
    BoxGeometry box = make_box(2, 2, 2, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.0, box);
    auto ens = build_conditional_ensemble(3, 0.5, box, plane, 80, 7);
    auto table = null_table_from_ensemble(ens, "C");

    CHECK(table.statistic == "C");
    CHECK(table.samples.size() == ens.total_retained());
    for (std::size_t i = 1; i < table.samples.size(); ++i)
        CHECK(table.samples[i].value >= table.samples[i - 1].value);

    double q05 = table.quantile(0.05);
    double q95 = table.quantile(0.95);
    CHECK(q05 <= q95);

    double below = table.p_value(table.samples.front().value - 1.0);
    CHECK(below == doctest::Approx(1.0));
    double above = table.p_value(table.samples.back().value + 1.0);
    CHECK(above <= 1.0 / static_cast<double>(table.samples.size()) + 1e-12);

    double prev = 2.0;
    for (double t = q05; t <= q95; t += (q95 - q05) / 7.0) {
        double p = table.p_value(t);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
    double two = table.p_value(table.quantile(0.5), true);
    CHECK(two <= 1.0);
    CHECK(two > 0.5);
}

TEST_CASE("conditional mean cdf is a proper cdf") {
    BoxGeometry box = make_box(2, 2, 2, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.0, box);
    auto ens = build_conditional_ensemble(3, 0.5, box, plane, 50, 21);
    auto mean = mean_cdf_conditional(ens);
    REQUIRE(!mean.F.empty());
    CHECK(mean.F.back() == doctest::Approx(1.0));
    double prev = 0.0;
    for (double v : mean.F) {
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("loo identities") {
    BoxGeometry box = make_box(2, 2, 2, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.0, box);
    auto ens = build_conditional_ensemble(3, 0.5, box, plane, 40, 33);

    // direct check of the leave-one-out shortcut on a few replicates
    auto flat = ens.flattened();
    auto w = ens.replicate_weights();
    auto d = loo_samples("D", ens);
    REQUIRE(d.size() == flat.size());

    std::vector<StepCDF> cdfs;
    for (const auto* r : flat) cdfs.push_back(StepCDF::from_sample(r->areas));
    for (std::size_t i = 0; i < std::min<std::size_t>(5, flat.size()); ++i) {
        std::vector<const StepCDF*> rest;
        std::vector<double> rw;
        for (std::size_t j = 0; j < flat.size(); ++j)
            if (j != i) {
                rest.push_back(&cdfs[j]);
                rw.push_back(w[j]);
            }
        StepCDF mean_wo = StepCDF::mixture(rest, rw);
        double direct = ks_distance(mean_wo, cdfs[i]);
        CHECK(d[i] == doctest::Approx(direct).epsilon(1e-9));
    }

    auto qt = loo_quantiles("D", ens);
    REQUIRE(qt.alpha.size() == kDefaultAlphaGrid.size());
    for (std::size_t i = 1; i < qt.alpha.size(); ++i)
        CHECK(qt.value[i] >= qt.value[i - 1] - 1e-12);
}

TEST_CASE("landscape ensemble structures") {
    BoxGeometry box = make_box(3, 3, 3, BoundaryMode::periodic);
    auto plane = axis_plane(2, 1.5, box);
    auto ens = build_conditional_ensemble(5, 0.6, box, plane, 40, 44);
    REQUIRE(ens.total_retained() >= 5);

    auto ls = ensemble_landscapes(ens);
    CHECK(ls.h0.size() == ens.total_retained());
    CHECK(ls.t_end_h0 > 0.0);
    auto mean0 = mean_landscape_conditional(ens, ls, 0);
    CHECK(!mean0.fns.empty());

    auto l0 = loo_samples("L0", ens);
    for (double v : l0) CHECK(v >= 0.0);
}

TEST_CASE("bootstrap ci basics") {
    auto degenerate = bootstrap_ci_from_samples(0.2, std::vector<double>(100, 0.0));
    CHECK(degenerate.lower == doctest::Approx(0.2));
    CHECK(degenerate.upper == doctest::Approx(0.2));

    std::vector<double> devs;
    Rng rng = make_rng(3);
    std::normal_distribution<double> nd(0.0, 0.05);
    for (int i = 0; i < 5000; ++i) devs.push_back(nd(rng));
    auto ci = bootstrap_ci_from_samples(0.2, devs);
    CHECK(ci.lower < 0.2);
    CHECK(ci.upper > 0.2);
    CHECK(ci.lower > 0.05);
    CHECK(ci.upper < 0.5);

    CHECK_THROWS_AS(bootstrap_ci_from_samples(-1.0, devs), std::invalid_argument);
}

TEST_CASE("joint level calibration") {
    Rng rng = make_rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> l0, l1, w;
    for (int i = 0; i < 4000; ++i) {
        l0.push_back(u(rng));
        l1.push_back(u(rng));
        w.push_back(1.0);
    }
    double m = calibrate_joint_level(l0, l1, w, 0.05);
    CHECK(m < 0.05);
    CHECK(m > 0.02);

    // achieved joint rate at the calibrated level
    double q0 = quantile(l0, 1.0 - m);
    double q1 = quantile(l1, 1.0 - m);
    int rej = 0;
    for (std::size_t i = 0; i < l0.size(); ++i) rej += l0[i] > q0 || l1[i] > q1;
    CHECK(static_cast<double>(rej) / l0.size() == doctest::Approx(0.05).epsilon(0.2));
}
