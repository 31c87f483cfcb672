#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pvt/stereology.hpp"

using namespace pvt;

namespace {

SectionTessellation grid_tessellation() {
    // 2x2 grid of unit squares in a 2x2 window.
    SectionTessellation tess;
    tess.window = {2, 2};
    tess.window_area = 4.0;
    int id = 0;
    for (int gy = 0; gy < 2; ++gy)
        for (int gx = 0; gx < 2; ++gx) {
            Cell c;
            double x0 = gx, y0 = gy;
            c.poly.v = {{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}};
            c.poly.label = {0, 0, 0, 0};
            c.generator_id = id++;
            c.visibility = Visibility::clipped;
            tess.cells.push_back(std::move(c));
        }
    return tess;
}

}  // namespace

TEST_CASE("prefactor identities hold to four decimals") {
    double c1 = stereology_c1();
    double c2 = stereology_c2();
    CHECK(std::pow(1.0 / c1, 1.5) == doctest::Approx(0.2008).epsilon(5e-4));
    CHECK(std::pow(2.0 / c1, 1.5) == doctest::Approx(0.5680).epsilon(5e-4));
    CHECK(std::pow(1.0 / c2, 3.0) == doctest::Approx(0.0837).epsilon(5e-4));
}

TEST_CASE("single full-window cell summary") {
    SectionTessellation tess;
    tess.window = {5, 4};
    tess.window_area = 20.0;
    Cell c;
    c.poly = make_rect({0, 0}, {5, 4});
    c.generator_id = 0;
    c.visibility = Visibility::clipped;
    tess.cells.push_back(c);

    auto s = summarize_section(tess);
    CHECK(s.p_a == 0.0);
    CHECK(s.l_a == 0.0);
    CHECK(s.n_a == doctest::Approx(1.0 / 20.0));
    CHECK(s.mean_area == doctest::Approx(20.0));
}

TEST_CASE("2x2 grid hand counts") {
    auto s = summarize_section(grid_tessellation());
    CHECK(s.n_cells == 4);
    CHECK(s.p_a == doctest::Approx(0.25));
    CHECK(s.n_a == doctest::Approx(1.0));
    CHECK(s.l_a == doctest::Approx(1.0));
    CHECK(s.mean_area == doctest::Approx(1.0));
}

TEST_CASE("estimator formulas and errors") {
    SectionSummary s;
    s.p_a = stereology_c1();
    s.n_a = 0.5 * stereology_c1();
    s.l_a = stereology_c2();
    s.mean_area = 0.686;
    s.n_cells = 1;

    CHECK(estimate_lambda(s, LambdaMethod::P).value == doctest::Approx(1.0));
    CHECK(estimate_lambda(s, LambdaMethod::N).value == doctest::Approx(1.0));
    CHECK(estimate_lambda(s, LambdaMethod::L).value == doctest::Approx(1.0));
    CHECK(estimate_lambda(s, LambdaMethod::a).value == doctest::Approx(1.0).epsilon(0.002));

    SectionSummary bad;
    CHECK_THROWS_AS(estimate_lambda(bad, LambdaMethod::P), std::domain_error);
    CHECK_THROWS_AS(estimate_lambda(bad, LambdaMethod::a), std::domain_error);

    SectionTessellation empty;
    CHECK_THROWS_AS(summarize_section(empty), std::invalid_argument);
}

TEST_CASE("scale equivariance of the estimators") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    auto gen = sample_fixed_generators(120, box, 31);
    auto tess = section_tessellation(gen, axis_plane(2, 5.0, box));
    auto s1 = summarize_section(tess);

    const double s = 3.0;
    BoxGeometry sbox = make_box(30, 30, 30, BoundaryMode::periodic);
    GeneratorSet sgen;
    sgen.box = sbox;
    for (const auto& p : gen.points) sgen.points.push_back(s * p);
    auto stess = section_tessellation(sgen, axis_plane(2, 15.0, sbox));
    auto s2 = summarize_section(stess);

    for (auto m : {LambdaMethod::P, LambdaMethod::N, LambdaMethod::L, LambdaMethod::a}) {
        double r = estimate_lambda(s2, m).value / estimate_lambda(s1, m).value;
        CHECK(r == doctest::Approx(1.0 / (s * s * s)).epsilon(1e-9));
    }
}
