#pragma once

#include <vector>

#include "pvt/core.hpp"

namespace pvt {

// Convex polygon with per-edge provenance labels. Edge i runs from v[i] to
// v[(i+1) % size]. Labels >= 0 identify the clip (generator index) that
// produced the edge; negative labels identify window sides.
struct LabeledPolygon {
    std::vector<Vec2> v;
    std::vector<int> label;

    bool empty() const { return v.size() < 3; }
    std::size_t size() const { return v.size(); }
};

// Window side labels used for rectangle edges.
inline constexpr int kEdgeBottom = -1;
inline constexpr int kEdgeRight = -2;
inline constexpr int kEdgeTop = -3;
inline constexpr int kEdgeLeft = -4;

LabeledPolygon make_rect(Vec2 lo, Vec2 hi);

// Clips against the half-plane {x : dot(n, x) <= c}, labelling any newly
// created edge with new_label. Result may be empty.
void clip_halfplane(LabeledPolygon& poly, Vec2 n, double c, int new_label);

double polygon_area(const std::vector<Vec2>& v);      // signed (CCW positive)
double polygon_perimeter(const std::vector<Vec2>& v);
Vec2 polygon_centroid(const std::vector<Vec2>& v);

inline double polygon_area(const LabeledPolygon& p) { return polygon_area(p.v); }

// Drops vertices whose corner triangle has absolute area below tol_area, and
// exact consecutive duplicates. Used for edge counting on clipped cells.
std::vector<Vec2> merge_collinear(const std::vector<Vec2>& v, double tol_area);

// True if p lies inside or on the boundary of the convex CCW polygon.
bool point_in_convex(const std::vector<Vec2>& v, Vec2 p, double tol = 0.0);

// Distance from p to the polygon boundary (edges only).
double distance_to_boundary(const std::vector<Vec2>& v, Vec2 p);

}  // namespace pvt
