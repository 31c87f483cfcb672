#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "pvt/tda.hpp"

namespace pvt {

namespace {

// Circumradius of the triangle abc. Degenerate triangles get +inf.
double circumradius(Vec2 a, Vec2 b, Vec2 c) {
    Vec2 ab = b - a, ac = c - a;
    double d = 2.0 * (ab.x * ac.y - ab.y * ac.x);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    double l2b = norm2(ab), l2c = norm2(ac);
    double ux = (ac.y * l2b - ab.y * l2c) / d;
    double uy = (ab.x * l2c - ac.x * l2b) / d;
    return std::sqrt(ux * ux + uy * uy);
}

}  // namespace

Filtration alpha_filtration(const PointCloud2& cloud) {
    Triangulation tri = delaunay2(cloud);
    const auto& pts = tri.points;

    std::vector<double> tri_radius(tri.triangles.size());
    std::map<std::pair<int, int>, double> edge_value;
    for (const auto& e : tri.edges)
        edge_value[e] = std::numeric_limits<double>::infinity();

    auto edge_of = [](int a, int b) {
        return std::make_pair(std::min(a, b), std::max(a, b));
    };

    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const Triangle& T = tri.triangles[t];
        double r = circumradius(pts[static_cast<std::size_t>(T.a)],
                                pts[static_cast<std::size_t>(T.b)],
                                pts[static_cast<std::size_t>(T.c)]);
        tri_radius[t] = r;
        for (auto [x, y] : {std::pair{T.a, T.b}, {T.b, T.c}, {T.c, T.a}}) {
            double& v = edge_value[edge_of(x, y)];
            v = std::min(v, r);
        }
    }

    Filtration out;
    out.simplices.reserve(pts.size() + tri.edges.size() + tri.triangles.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        out.simplices.push_back({0, {static_cast<int>(i), -1, -1}, 0.0});

    for (const auto& e : tri.edges) {
        Vec2 a = pts[static_cast<std::size_t>(e.first)];
        Vec2 b = pts[static_cast<std::size_t>(e.second)];
        Vec2 w{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        double h = 0.5 * norm(b - a);
        double r = edge_value[e];
        // Gabriel test: the edge appears at half its length if the diametral
        // disk is empty, else it inherits the smaller incident circumradius.
        bool gabriel = true;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            int id = static_cast<int>(i);
            if (id == e.first || id == e.second) continue;
            if (dot(pts[i] - w, pts[i] - w) < h * h) {
                gabriel = false;
                break;
            }
        }
        double value;
        if (gabriel) {
            value = h;
            if (std::isfinite(r) && value > r) value = r;
        } else {
            if (!std::isfinite(r))
                throw std::runtime_error("alpha_filtration: non-Gabriel hull edge");
            value = r;
        }
        out.simplices.push_back({1, {e.first, e.second, -1}, value});
    }

    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const Triangle& T = tri.triangles[t];
        if (!std::isfinite(tri_radius[t]))
            throw std::runtime_error("alpha_filtration: degenerate triangle");
        out.simplices.push_back({2, {T.a, T.b, T.c}, tri_radius[t]});
    }

    std::stable_sort(out.simplices.begin(), out.simplices.end(),
                     [](const Simplex& a, const Simplex& b) {
                         if (a.value != b.value) return a.value < b.value;
                         return a.dim < b.dim;
                     });
    return out;
}

}  // namespace pvt
