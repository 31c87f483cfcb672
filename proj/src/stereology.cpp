#include "pvt/stereology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace pvt {

double stereology_c1() {
    const double pi = std::numbers::pi;
    return (8.0 / 15.0) * std::cbrt(3.0 / 4.0) * std::pow(pi, 5.0 / 3.0) *
           std::tgamma(4.0 / 3.0);
}

double stereology_c2() {
    const double pi = std::numbers::pi;
    return pi * std::cbrt(pi / 6.0) * std::tgamma(5.0 / 3.0);
}

namespace {

struct GridKey {
    long long x, y;
    bool operator==(const GridKey& o) const { return x == o.x && y == o.y; }
};

struct GridKeyHash {
    std::size_t operator()(const GridKey& k) const {
        return std::hash<long long>()(k.x * 0x9e3779b97f4a7c15LL ^ k.y);
    }
};

}  // namespace

SectionSummary summarize_section(const SectionTessellation& tess) {
    if (tess.cells.empty())
        throw std::invalid_argument("cannot summarize an empty tessellation");
    const double w = tess.window.x, h = tess.window.y;
    const double area = tess.window_area;
    const double tol = 1e-9 * std::max(w, h);
    const double snap = tol;

    auto on_boundary = [&](Vec2 p) {
        return p.x < tol || p.x > w - tol || p.y < tol || p.y > h - tol;
    };
    auto same_side = [&](Vec2 a, Vec2 b) {
        return (a.x < tol && b.x < tol) || (a.x > w - tol && b.x > w - tol) ||
               (a.y < tol && b.y < tol) || (a.y > h - tol && b.y > h - tol);
    };

    std::unordered_set<GridKey, GridKeyHash> interior_vertices;
    double interior_length = 0.0;
    double total_area = 0.0;
    for (const auto& cell : tess.cells) {
        std::vector<Vec2> v = merge_collinear(cell.poly.v, 1e-12 * area);
        const std::size_t m = v.size();
        total_area += std::abs(polygon_area(cell.poly.v));
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = (i + 1) % m;
            if (!on_boundary(v[i]))
                interior_vertices.insert(
                    {std::llround(v[i].x / snap), std::llround(v[i].y / snap)});
            if (!same_side(v[i], v[j])) interior_length += norm(v[j] - v[i]);
        }
    }

    SectionSummary s;
    s.n_cells = tess.n2d();
    s.p_a = static_cast<double>(interior_vertices.size()) / area;
    s.n_a = static_cast<double>(s.n_cells) / area;
    s.l_a = 0.5 * interior_length / area;  // every interior edge is shared once
    s.mean_area = total_area / static_cast<double>(s.n_cells);
    return s;
}

LambdaEstimate estimate_lambda(const SectionSummary& summary, LambdaMethod method) {
    const double c1 = stereology_c1();
    const double c2 = stereology_c2();
    double value = 0.0;
    switch (method) {
        case LambdaMethod::P:
            if (!(summary.p_a > 0.0) || !std::isfinite(summary.p_a))
                throw std::domain_error("lambda_P undefined: nonpositive vertex density");
            value = std::pow(summary.p_a / c1, 1.5);
            break;
        case LambdaMethod::N:
            if (!(summary.n_a > 0.0) || !std::isfinite(summary.n_a))
                throw std::domain_error("lambda_N undefined: nonpositive cell density");
            value = std::pow(2.0 * summary.n_a / c1, 1.5);
            break;
        case LambdaMethod::L:
            if (!(summary.l_a > 0.0) || !std::isfinite(summary.l_a))
                throw std::domain_error("lambda_L undefined: nonpositive edge density");
            value = std::pow(summary.l_a / c2, 3.0);
            break;
        case LambdaMethod::a:
            if (!(summary.mean_area > 0.0) || !std::isfinite(summary.mean_area))
                throw std::domain_error("lambda_a undefined: nonpositive mean area");
            value = std::pow(2.0 / (c1 * summary.mean_area), 1.5);
            break;
    }
    return {value, method};
}

const char* lambda_method_name(LambdaMethod m) {
    switch (m) {
        case LambdaMethod::P: return "P";
        case LambdaMethod::N: return "N";
        case LambdaMethod::L: return "L";
        case LambdaMethod::a: return "a";
    }
    return "?";
}

}  // namespace pvt
