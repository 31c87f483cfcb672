#include "pvt/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvt {

LabeledPolygon make_rect(Vec2 lo, Vec2 hi) {
    LabeledPolygon p;
    p.v = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
    p.label = {kEdgeBottom, kEdgeRight, kEdgeTop, kEdgeLeft};
    return p;
}

void clip_halfplane(LabeledPolygon& poly, Vec2 n, double c, int new_label) {
    const std::size_t m = poly.v.size();
    if (m == 0) return;
    std::vector<Vec2> out_v;
    std::vector<int> out_l;
    out_v.reserve(m + 2);
    out_l.reserve(m + 2);

    std::vector<double> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = c - dot(n, poly.v[i]);

    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = (i + 1) % m;
        double sa = s[i], sb = s[j];
        if (sa >= 0.0) {
            out_v.push_back(poly.v[i]);
            out_l.push_back(poly.label[i]);
        }
        if ((sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0) ||
            (sa == 0.0 && sb < 0.0)) {
            double t = sa / (sa - sb);
            Vec2 p = poly.v[i] + t * (poly.v[j] - poly.v[i]);
            if (sb < 0.0) {
                out_v.push_back(p);
                out_l.push_back(new_label);
            } else {
                out_v.push_back(p);
                out_l.push_back(poly.label[i]);
            }
        }
    }

    // Remove consecutive duplicates, keeping the later edge label.
    std::vector<Vec2> v2;
    std::vector<int> l2;
    const std::size_t k = out_v.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = (i + 1) % k;
        if (out_v[i].x == out_v[j].x && out_v[i].y == out_v[j].y) continue;
        v2.push_back(out_v[i]);
        l2.push_back(out_l[i]);
    }
    if (v2.size() < 3) {
        v2.clear();
        l2.clear();
    }
    poly.v = std::move(v2);
    poly.label = std::move(l2);
}

double polygon_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = (i + 1) % m;
        a += cross(v[i], v[j]);
    }
    return 0.5 * a;
}

double polygon_perimeter(const std::vector<Vec2>& v) {
    double p = 0.0;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) p += norm(v[(i + 1) % m] - v[i]);
    return p;
}

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = (i + 1) % m;
        double w = cross(v[i], v[j]);
        a += w;
        c.x += (v[i].x + v[j].x) * w;
        c.y += (v[i].y + v[j].y) * w;
    }
    if (a == 0.0) return v.empty() ? Vec2{} : v[0];
    return {c.x / (3.0 * a), c.y / (3.0 * a)};
}

std::vector<Vec2> merge_collinear(const std::vector<Vec2>& v, double tol_area) {
    std::vector<Vec2> w = v;
    bool changed = true;
    while (changed && w.size() > 3) {
        changed = false;
        const std::size_t m = w.size();
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 a = w[(i + m - 1) % m], b = w[i], c = w[(i + 1) % m];
            double corner = 0.5 * std::abs(cross(b - a, c - b));
            if (corner < tol_area || (b.x == a.x && b.y == a.y)) {
                w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return w;
}

bool point_in_convex(const std::vector<Vec2>& v, Vec2 p, double tol) {
    const std::size_t m = v.size();
    if (m < 3) return false;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = (i + 1) % m;
        if (cross(v[j] - v[i], p - v[i]) < -tol) return false;
    }
    return true;
}

double distance_to_boundary(const std::vector<Vec2>& v, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = v[i], b = v[(i + 1) % m];
        Vec2 ab = b - a;
        double len2 = norm2(ab);
        double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, norm(p - (a + t * ab)));
    }
    return best;
}

}  // namespace pvt
