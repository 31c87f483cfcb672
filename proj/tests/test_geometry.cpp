#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pvt/geometry.hpp"

using namespace pvt;

namespace {

GeneratorSet fixed_set(std::vector<Vec3> pts, const BoxGeometry& box) {
    GeneratorSet g;
    g.points = std::move(pts);
    g.box = box;
    g.intensity = static_cast<double>(g.points.size()) / box.volume();
    return g;
}

std::vector<double> sorted_toroidal_areas(const SectionTessellation& tess) {
    std::vector<double> a;
    for (const auto& m : toroidal_cell_metrics(tess)) a.push_back(m.area);
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace

TEST_CASE("poisson sampler basics") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    CHECK(sample_poisson_generators(0.0, box, 1).points.empty());
    CHECK_THROWS_AS(sample_poisson_generators(-1.0, box, 1), std::invalid_argument);

    auto a = sample_poisson_generators(1.0, box, 42);
    auto b = sample_poisson_generators(1.0, box, 42);
    REQUIRE(a.points.size() == b.points.size());
    CHECK(a.points[0].x == b.points[0].x);

    double meanc = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i)
        meanc += static_cast<double>(
            sample_poisson_generators(0.2, box, child_seed(7, i)).points.size());
    meanc /= reps;
    CHECK(std::abs(meanc - 200.0) < 3.0 * std::sqrt(200.0 / reps));
}

TEST_CASE("fixed sampler uniformity") {
    BoxGeometry box = make_box(1, 1, 1, BoundaryMode::bounded);
    CHECK(sample_fixed_generators(0, box, 3).points.empty());
    CHECK(sample_fixed_generators(1, box, 3).points.size() == 1);

    auto g = sample_fixed_generators(100000, box, 11);
    const double n = static_cast<double>(g.points.size());
    for (int axis = 0; axis < 3; ++axis) {
        std::vector<double> xs;
        for (const auto& p : g.points)
            xs.push_back(axis == 0 ? p.x : axis == 1 ? p.y : p.z);
        std::sort(xs.begin(), xs.end());
        double d = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double e = static_cast<double>(i + 1) / n;
            d = std::max(d, std::max(std::abs(e - xs[i]),
                                     std::abs(xs[i] - static_cast<double>(i) / n)));
        }
        CHECK(d < 1.63 / std::sqrt(n));  // 1% KS bound
    }
}

TEST_CASE("axis planes cover the box cross sections") {
    BoxGeometry box = make_box(4, 5, 6, BoundaryMode::periodic);
    auto p0 = axis_plane(0, 2.0, box);
    CHECK(p0.window_size.x * p0.window_size.y == doctest::Approx(30.0));
    auto p1 = axis_plane(1, 2.0, box);
    CHECK(p1.window_size.x * p1.window_size.y == doctest::Approx(24.0));
    auto p2 = axis_plane(2, 2.0, box);
    CHECK(p2.window_size.x * p2.window_size.y == doctest::Approx(20.0));

    SectionPlane bad;
    bad.normal = {0, 0, 2};
    CHECK_THROWS_AS(plane_frame(bad), std::invalid_argument);
}

TEST_CASE("degenerate and trivial sections") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::bounded);
    auto gen = fixed_set({{5, 5, 5}}, box);
    auto plane = axis_plane(2, 5.0, box);
    auto tess = section_tessellation(gen, plane);
    REQUIRE(tess.cells.size() == 1);
    CHECK(tess.n2d() == 1);
    CHECK(polygon_area(tess.cells[0].poly) == doctest::Approx(100.0));
    CHECK(tess.cells[0].visibility == Visibility::clipped);

    auto far_plane = axis_plane(2, 20.0, box);
    CHECK(section_tessellation(gen, far_plane).degenerate);
}

TEST_CASE("mirror generators tie to the lower id") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::bounded);
    auto gen = fixed_set({{5, 5, 4}, {5, 5, 6}}, box);
    auto tess = section_tessellation(gen, axis_plane(2, 5.0, box));
    REQUIRE(tess.n2d() == 1);
    CHECK(tess.cells[0].generator_id == 0);
    CHECK(polygon_area(tess.cells[0].poly) == doctest::Approx(100.0));
}

TEST_CASE("two-generator oracle splits along the bisector") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::bounded);
    auto gen = fixed_set({{2, 5, 5}, {8, 5, 5}}, box);
    auto plane = axis_plane(2, 5.0, box);
    auto labels = brute_force_section_oracle(gen, plane, 10);
    for (int iy = 0; iy < 10; ++iy)
        for (int ix = 0; ix < 10; ++ix)
            CHECK(labels[static_cast<std::size_t>(iy) * 10 + ix] == (ix < 5 ? 0 : 1));
}

TEST_CASE("tiling and oracle agreement on random instances") {
    for (int inst = 0; inst < 12; ++inst) {
        BoundaryMode mode = inst % 2 ? BoundaryMode::bounded : BoundaryMode::periodic;
        BoxGeometry box = make_box(10, 10, 10, mode);
        auto gen = sample_fixed_generators(50, box, child_seed(100, inst));
        auto plane = axis_plane(inst % 3, 2.0 + 0.5 * inst, box);
        auto tess = section_tessellation(gen, plane);

        double covered = 0.0;
        for (const auto& c : tess.cells) covered += polygon_area(c.poly);
        CHECK(std::abs(covered - tess.window_area) < 1e-8 * tess.window_area);

        const int gn = 40;
        auto labels = brute_force_section_oracle(gen, plane, gn);
        int checked = 0;
        for (int iy = 0; iy < gn; ++iy)
            for (int ix = 0; ix < gn; ++ix) {
                Vec2 p{(ix + 0.5) * tess.window.x / gn, (iy + 0.5) * tess.window.y / gn};
                const Cell* owner = nullptr;
                for (const auto& c : tess.cells)
                    if (point_in_convex(c.poly.v, p, 1e-12)) {
                        owner = &c;
                        break;
                    }
                REQUIRE(owner != nullptr);
                if (distance_to_boundary(owner->poly.v, p) <= 1e-9) continue;
                ++checked;
                CHECK(owner->generator_id == labels[static_cast<std::size_t>(iy) * gn + ix]);
            }
        CHECK(checked > gn * gn / 2);
    }
}

TEST_CASE("scaling equivariance") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    auto gen = sample_fixed_generators(80, box, 17);
    auto tess = section_tessellation(gen, axis_plane(2, 5.0, box));

    const double s = 2.5;
    BoxGeometry sbox = make_box(25, 25, 25, BoundaryMode::periodic);
    std::vector<Vec3> spts;
    for (const auto& p : gen.points) spts.push_back(s * p);
    auto stess = section_tessellation(fixed_set(spts, sbox), axis_plane(2, 12.5, sbox));

    auto a = sorted_toroidal_areas(tess);
    auto b = sorted_toroidal_areas(stess);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b[i] == doctest::Approx(s * s * a[i]).epsilon(1e-9));
}

TEST_CASE("periodic translation invariance") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    auto gen = sample_fixed_generators(60, box, 23);
    auto base = sorted_toroidal_areas(section_tessellation(gen, axis_plane(2, 5.0, box)));

    Vec3 shift{3.7, 8.1, 0.0};  // keep z so the same cells cross the plane
    std::vector<Vec3> moved;
    for (const auto& p : gen.points)
        moved.push_back({std::fmod(p.x + shift.x, 10.0), std::fmod(p.y + shift.y, 10.0),
                         p.z});
    auto shifted =
        sorted_toroidal_areas(section_tessellation(fixed_set(moved, box), axis_plane(2, 5.0, box)));
    REQUIRE(base.size() == shifted.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(shifted[i] == doctest::Approx(base[i]).epsilon(1e-7));
}

TEST_CASE("cell metrics closed forms") {
    CellMetrics sq = cell_metrics({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1e-12);
    CHECK(sq.area == doctest::Approx(1.0));
    CHECK(sq.perimeter == doctest::Approx(4.0));
    CHECK(sq.n_edges == 4);

    double h = std::sqrt(3.0);
    CellMetrics tri = cell_metrics({{0, 0}, {2, 0}, {1, h}}, 1e-12);
    CHECK(tri.area == doctest::Approx(std::sqrt(3.0)));
    CHECK(tri.perimeter == doctest::Approx(6.0));
    CHECK(tri.n_edges == 3);

    CHECK_THROWS_AS(cell_metrics({{0, 0}, {1, 0}}, 1e-12), std::invalid_argument);
}

TEST_CASE("toroidal metrics: areas tile and edges average six") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    double edge_sum = 0.0;
    int cells = 0;
    for (int rep = 0; rep < 30; ++rep) {
        auto gen = sample_poisson_generators(1.0, box, child_seed(300, rep));
        if (gen.points.empty()) continue;
        auto tess = section_tessellation(gen, axis_plane(2, 5.0, box));
        auto metrics = toroidal_cell_metrics(tess);
        double total = 0.0;
        for (const auto& m : metrics) {
            total += m.area;
            edge_sum += m.n_edges;
            ++cells;
        }
        CHECK(total == doctest::Approx(tess.window_area).epsilon(1e-8));
    }
    CHECK(cells > 3000);
    CHECK(edge_sum / cells == doctest::Approx(6.0).epsilon(0.01));
}

TEST_CASE("expected section cell count near 146") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    double mean = 0.0;
    const int reps = 150;
    for (int rep = 0; rep < reps; ++rep) {
        auto gen = sample_poisson_generators(1.0, box, child_seed(400, rep));
        Rng rng = make_rng(child_seed(401, rep));
        mean += section_tessellation(gen, sample_axis_plane(box, rng)).n2d();
    }
    mean /= reps;
    CHECK(std::abs(mean - 146.0) < 4.0);
}

TEST_CASE("window_cut hits the target exactly") {
    BoxGeometry box = make_box(10, 10, 10, BoundaryMode::periodic);
    auto gen = sample_poisson_generators(1.0, box, 55);
    auto tess = section_tessellation(gen, axis_plane(2, 5.0, box));
    REQUIRE(tess.n2d() > 60);

    auto same = window_cut(tess, tess.n2d());
    CHECK(same.n2d() == tess.n2d());

    auto cut = window_cut(tess, 50);
    CHECK(cut.n2d() == 50);
    CHECK(cut.window.x < tess.window.x);
    double covered = 0.0;
    for (const auto& c : cut.cells) covered += polygon_area(c.poly);
    CHECK(covered == doctest::Approx(cut.window_area).epsilon(1e-8));

    CHECK_THROWS(window_cut(tess, tess.n2d() + 5));
}
