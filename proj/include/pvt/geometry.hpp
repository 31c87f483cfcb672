#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvt/polygon.hpp"

namespace pvt {

enum class BoundaryMode { periodic, bounded };

struct BoxGeometry {
    std::array<double, 3> lengths{10.0, 10.0, 10.0};
    BoundaryMode mode = BoundaryMode::periodic;

    double volume() const { return lengths[0] * lengths[1] * lengths[2]; }
    bool valid() const {
        return lengths[0] > 0.0 && lengths[1] > 0.0 && lengths[2] > 0.0;
    }
};

inline BoxGeometry make_box(double lx, double ly, double lz, BoundaryMode mode) {
    return BoxGeometry{{lx, ly, lz}, mode};
}

struct GeneratorSet {
    std::vector<Vec3> points;  // inside the half-open box
    double intensity = 0.0;    // metadata: points per unit volume
    std::uint64_t seed = 0;
    BoxGeometry box;
};

// Plane {x : dot(normal, x) = offset} carrying an axis-aligned observation
// window in its own 2D frame (see plane_frame).
struct SectionPlane {
    Vec3 normal{0.0, 0.0, 1.0};
    double offset = 0.0;
    Vec2 window_origin{0.0, 0.0};  // in plane coordinates
    Vec2 window_size{0.0, 0.0};
};

struct PlaneFrame {
    Vec3 u, v;    // in-plane orthonormal axes
    Vec3 base;    // 3D point of plane coordinate (0, 0)
};

PlaneFrame plane_frame(const SectionPlane& plane);

enum class Visibility { complete, clipped };

struct Cell {
    LabeledPolygon poly;   // window-relative coordinates, CCW
    int generator_id = -1; // base generator index (periodic images share it)
    Visibility visibility = Visibility::complete;
};

struct CellMetrics {
    double area = 0.0;
    double perimeter = 0.0;
    int n_edges = 0;
};

struct SectionTessellation {
    std::vector<Cell> cells;
    Vec2 window{0.0, 0.0};  // cells live in [0, window.x] x [0, window.y]
    double window_area = 0.0;
    bool degenerate = false;  // plane missed the box
    BoundaryMode mode = BoundaryMode::bounded;

    // Number of distinct visible cells. Under periodic boundaries a wrapped
    // cell shows as several window pieces sharing one generator id.
    int n2d() const;
};

GeneratorSet sample_poisson_generators(double lambda, const BoxGeometry& box,
                                       std::uint64_t seed);
GeneratorSet sample_fixed_generators(long long k, const BoxGeometry& box,
                                     std::uint64_t seed);

// Random plane parallel to a uniformly chosen cube face, uniform offset,
// window equal to the full box cross-section.
SectionPlane sample_axis_plane(const BoxGeometry& box, Rng& rng);
SectionPlane axis_plane(int axis, double offset, const BoxGeometry& box);

// Exact planar section of the 3D Voronoi diagram, computed as the 2D power
// diagram of the generators projected onto the plane (weight -d^2 for a
// generator at distance d from the plane), clipped to the window.
SectionTessellation section_tessellation(const GeneratorSet& gen,
                                         const SectionPlane& plane);

CellMetrics cell_metrics(const std::vector<Vec2>& polygon, double collinear_tol_area);
CellMetrics cell_metrics(const Cell& cell, const SectionTessellation& tess);

// Metrics of the true (unwrapped) cells of a periodic full-window section:
// pieces sharing a generator id are merged; window-boundary edges and
// vertices are treated as wrap artifacts.
std::vector<CellMetrics> toroidal_cell_metrics(const SectionTessellation& tess);

// Per-visible-cell metrics for bounded sections (pieces are whole cells).
std::vector<CellMetrics> visible_cell_metrics(const SectionTessellation& tess);

// Areas of all visible cells (merged per generator id).
std::vector<double> cell_areas(const SectionTessellation& tess);
std::vector<Vec2> cell_centroids(const SectionTessellation& tess);

// Shrinks the window (centered, bisection on the scale factor) until exactly
// `target` cells are fully or partially visible. Throws std::runtime_error if
// no scale achieves the target exactly.
SectionTessellation window_cut(const SectionTessellation& tess, int target);

// Label grid oracle: for grid_n x grid_n window sample points, the id of the
// 3D-nearest generator (minimum-image when periodic). Row-major, cell centers.
std::vector<int> brute_force_section_oracle(const GeneratorSet& gen,
                                            const SectionPlane& plane,
                                            int grid_n);

// 3D squared distance honoring the box boundary mode.
double generator_distance2(const GeneratorSet& gen, Vec3 p, int i);

}  // namespace pvt
