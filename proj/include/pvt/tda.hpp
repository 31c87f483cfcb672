#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pvt/core.hpp"

namespace pvt {

struct PointCloud2 {
    std::vector<Vec2> points;
};

struct Triangle {
    int a, b, c;  // CCW
};

struct Triangulation {
    std::vector<Vec2> points;
    std::vector<Triangle> triangles;
    std::vector<std::pair<int, int>> edges;  // unique, first < second
};

// Delaunay triangulation via incremental Bowyer-Watson with a ghost vertex
// and exact-filtered predicates. Collinear inputs yield an edge path.
Triangulation delaunay2(const PointCloud2& cloud);

struct Simplex {
    int dim;                 // 0, 1, 2
    std::array<int, 3> v;    // vertex ids, unused entries -1
    double value;            // radius at which the simplex enters
};

struct Filtration {
    std::vector<Simplex> simplices;  // sorted by (value, dim)
};

// Alpha complex filtration in radius units: vertices at 0, Gabriel edges at
// half their length, non-Gabriel edges at the smaller incident circumradius,
// triangles at their circumradius.
Filtration alpha_filtration(const PointCloud2& cloud);

struct PersistencePair {
    double birth, death;
};

struct PersistenceDiagram {
    std::vector<PersistencePair> h0;  // births all 0, sorted by death
    std::vector<PersistencePair> h1;  // sorted by death
    bool has_essential = false;       // the one never-dying component
};

// H0 via union-find over edges in filtration order, H1 via boundary-matrix
// reduction of triangles against cycle-creating edges. Zero-persistence H1
// pairs (death == birth exactly) are dropped.
PersistenceDiagram persistence_pairs(const Filtration& filt);

struct PiecewiseLinear {
    std::vector<std::pair<double, double>> pts;  // (t, value), t strictly increasing

    double operator()(double t) const;
};

struct Landscape {
    double t_end = 0.0;
    std::vector<PiecewiseLinear> fns;  // fns[k-1] is the k-th landscape function

    const PiecewiseLinear* fn(std::size_t k) const {  // 1-based, null if absent
        return k >= 1 && k <= fns.size() ? &fns[k - 1] : nullptr;
    }
};

// Exact piecewise-linear landscape: breakpoints at tent endpoints, apexes and
// all pairwise tent crossings; no grid sampling.
Landscape landscape_from_diagram(const std::vector<PersistencePair>& pairs,
                                 double t_end);

// Weighted pointwise mean; empty weights means uniform. prune_tol drops
// breakpoints reproduced by linear interpolation within that absolute error.
Landscape mean_landscape(const std::vector<Landscape>& landscapes,
                         const std::vector<double>& weights = {},
                         double prune_tol = 0.0);

// [sum_k int (a_k - b_k)^2 dt]^{1/2} with closed-form quadratic integration on
// the merged breakpoint grid; missing k treated as the zero function.
double landscape_l2_distance(const Landscape& a, const Landscape& b);

}  // namespace pvt
