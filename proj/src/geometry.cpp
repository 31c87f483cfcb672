#include "pvt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace pvt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 axis_unit(int a) {
    return {a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, a == 2 ? 1.0 : 0.0};
}

}  // namespace

PlaneFrame plane_frame(const SectionPlane& plane) {
    Vec3 n = plane.normal;
    double nn = norm(n);
    if (std::abs(nn - 1.0) > 1e-12)
        throw std::invalid_argument("section plane normal must be unit length");
    int k = 0;
    double best = std::abs(n.x);
    if (std::abs(n.y) < best) { k = 1; best = std::abs(n.y); }
    if (std::abs(n.z) < best) { k = 2; }
    Vec3 e = axis_unit(k);
    Vec3 u = e - dot(e, n) * n;
    u = (1.0 / norm(u)) * u;
    Vec3 v = cross(n, u);
    Vec3 base = plane.offset * n + plane.window_origin.x * u + plane.window_origin.y * v;
    return {u, v, base};
}

GeneratorSet sample_poisson_generators(double lambda, const BoxGeometry& box,
                                       std::uint64_t seed) {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw std::invalid_argument("intensity must be finite and nonnegative");
    if (!box.valid()) throw std::invalid_argument("degenerate box");
    Rng rng = make_rng(seed);
    long long count = 0;
    if (lambda > 0.0) {
        std::poisson_distribution<long long> pois(lambda * box.volume());
        count = pois(rng);
    }
    GeneratorSet gen;
    gen.box = box;
    gen.intensity = lambda;
    gen.seed = seed;
    gen.points.reserve(static_cast<std::size_t>(count));
    std::uniform_real_distribution<double> ux(0.0, box.lengths[0]);
    std::uniform_real_distribution<double> uy(0.0, box.lengths[1]);
    std::uniform_real_distribution<double> uz(0.0, box.lengths[2]);
    for (long long i = 0; i < count; ++i)
        gen.points.push_back({ux(rng), uy(rng), uz(rng)});
    return gen;
}

GeneratorSet sample_fixed_generators(long long k, const BoxGeometry& box,
                                     std::uint64_t seed) {
    if (k < 0) throw std::invalid_argument("generator count must be nonnegative");
    if (!box.valid()) throw std::invalid_argument("degenerate box");
    Rng rng = make_rng(seed);
    GeneratorSet gen;
    gen.box = box;
    gen.intensity = static_cast<double>(k) / box.volume();
    gen.seed = seed;
    gen.points.reserve(static_cast<std::size_t>(k));
    std::uniform_real_distribution<double> ux(0.0, box.lengths[0]);
    std::uniform_real_distribution<double> uy(0.0, box.lengths[1]);
    std::uniform_real_distribution<double> uz(0.0, box.lengths[2]);
    for (long long i = 0; i < k; ++i)
        gen.points.push_back({ux(rng), uy(rng), uz(rng)});
    return gen;
}

SectionPlane axis_plane(int axis, double offset, const BoxGeometry& box) {
    SectionPlane p;
    p.normal = axis_unit(axis);
    p.offset = offset;
    p.window_origin = {0.0, 0.0};
    p.window_size = {1.0, 1.0};
    PlaneFrame fr = plane_frame(p);
    // Window = projection of the box cross-section onto the plane frame.
    double smin = kInf, smax = -kInf, tmin = kInf, tmax = -kInf;
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy)
            for (int cz = 0; cz < 2; ++cz) {
                Vec3 corner{cx * box.lengths[0], cy * box.lengths[1],
                            cz * box.lengths[2]};
                double s = dot(corner, fr.u), t = dot(corner, fr.v);
                smin = std::min(smin, s);
                smax = std::max(smax, s);
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
            }
    p.window_origin = {smin, tmin};
    p.window_size = {smax - smin, tmax - tmin};
    return p;
}

SectionPlane sample_axis_plane(const BoxGeometry& box, Rng& rng) {
    std::uniform_int_distribution<int> ax(0, 2);
    int a = ax(rng);
    std::uniform_real_distribution<double> off(0.0, box.lengths[a]);
    return axis_plane(a, off(rng), box);
}

double generator_distance2(const GeneratorSet& gen, Vec3 p, int i) {
    const Vec3& g = gen.points[static_cast<std::size_t>(i)];
    if (gen.box.mode == BoundaryMode::periodic) {
        double s = 0.0;
        const double d[3] = {p.x - g.x, p.y - g.y, p.z - g.z};
        for (int a = 0; a < 3; ++a) {
            double L = gen.box.lengths[a];
            double w = std::abs(std::fmod(d[a], L));
            w = std::min(w, L - w);
            s += w * w;
        }
        return s;
    }
    return norm2(p - g);
}

int SectionTessellation::n2d() const {
    std::vector<int> ids;
    ids.reserve(cells.size());
    for (const auto& c : cells) ids.push_back(c.generator_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return static_cast<int>(ids.size());
}

namespace {

struct WorkingSet {
    std::vector<Vec2> q;       // projections onto the plane
    std::vector<double> dsq;   // squared distance to the plane
    std::vector<double> qn2;   // |q|^2 cached
    std::vector<int> base;     // original generator index
};

// Power distance of plane point x to working generator k is
// |x - q_k|^2 + dsq_k, which equals the 3D squared distance.
int power_owner(const WorkingSet& ws, Vec2 x) {
    int best = -1;
    double bestp = kInf;
    int bestbase = 0;
    const std::size_t m = ws.q.size();
    for (std::size_t k = 0; k < m; ++k) {
        double p = norm2(x - ws.q[k]) + ws.dsq[k];
        if (p < bestp ||
            (p == bestp && (ws.base[k] < bestbase ||
                            (ws.base[k] == bestbase && static_cast<int>(k) < best)))) {
            bestp = p;
            best = static_cast<int>(k);
            bestbase = ws.base[k];
        }
    }
    return best;
}

// True if generator a takes precedence over b when their power functions are
// identical on the whole plane.
bool tie_wins(const WorkingSet& ws, int a, int b) {
    if (ws.base[a] != ws.base[b]) return ws.base[a] < ws.base[b];
    return a < b;
}

bool build_power_cell(const WorkingSet& ws, int j, Vec2 win, double diag,
                      LabeledPolygon& out, std::vector<double>& l2buf) {
    const std::size_t m = ws.q.size();
    const std::size_t ju = static_cast<std::size_t>(j);
    out = make_rect({0.0, 0.0}, win);
    if (m == 1) return true;

    l2buf.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (k == ju) {
            l2buf[k] = kInf;
            continue;
        }
        double d2 = norm2(ws.q[k] - ws.q[ju]);
        if (d2 == 0.0 && ws.dsq[k] == ws.dsq[ju]) {
            if (tie_wins(ws, static_cast<int>(k), j)) {
                out.v.clear();
                out.label.clear();
                return false;  // identical power, lower id owns the plane
            }
            l2buf[k] = kInf;
            continue;
        }
        l2buf[k] = d2;
    }

    // Clip first against the nearest projected neighbors to shrink the cell,
    // then run one guarded pass over everything else.
    constexpr std::size_t kInit = 48;
    std::vector<std::pair<double, int>> nearest;
    nearest.reserve(m - 1);
    for (std::size_t k = 0; k < m; ++k)
        if (l2buf[k] < kInf) nearest.push_back({l2buf[k], static_cast<int>(k)});
    std::size_t ninit = std::min(kInit, nearest.size());
    std::partial_sort(nearest.begin(), nearest.begin() + static_cast<std::ptrdiff_t>(ninit),
                      nearest.end());

    auto clip_with = [&](int k) {
        std::size_t ku = static_cast<std::size_t>(k);
        Vec2 n = 2.0 * (ws.q[ku] - ws.q[ju]);
        double c = ws.qn2[ku] - ws.qn2[ju] + ws.dsq[ku] - ws.dsq[ju];
        clip_halfplane(out, n, c, k);
    };

    for (std::size_t t = 0; t < ninit; ++t) {
        clip_with(nearest[t].second);
        if (out.empty()) return false;
    }

    double r2 = 0.0;
    for (const Vec2& p : out.v) r2 = std::max(r2, norm2(p - ws.q[ju]));
    double radius = std::sqrt(r2);
    double slack = radius + 1e-9 * diag;

    for (std::size_t k = 0; k < m; ++k) {
        double d2 = l2buf[k];
        if (d2 == kInf) continue;
        double len = std::sqrt(d2);
        double t = 0.5 * (len + (ws.dsq[k] - ws.dsq[ju]) / len);
        if (t > slack) continue;
        clip_with(static_cast<int>(k));
        if (out.empty()) return false;
    }
    return true;
}

}  // namespace

SectionTessellation section_tessellation(const GeneratorSet& gen,
                                         const SectionPlane& plane) {
    SectionTessellation tess;
    tess.mode = gen.box.mode;
    tess.window = plane.window_size;
    tess.window_area = plane.window_size.x * plane.window_size.y;
    if (tess.window_area <= 0.0)
        throw std::invalid_argument("section window must have positive area");

    // Plane must cut the box.
    {
        double lo = kInf, hi = -kInf;
        for (int cx = 0; cx < 2; ++cx)
            for (int cy = 0; cy < 2; ++cy)
                for (int cz = 0; cz < 2; ++cz) {
                    Vec3 corner{cx * gen.box.lengths[0], cy * gen.box.lengths[1],
                                cz * gen.box.lengths[2]};
                    double s = dot(plane.normal, corner);
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
        if (plane.offset < lo || plane.offset > hi) {
            tess.degenerate = true;
            return tess;
        }
    }

    if (gen.points.empty() ||
        (gen.points.size() == 1 && gen.box.mode == BoundaryMode::bounded)) {
        Cell cell;
        cell.poly = make_rect({0.0, 0.0}, tess.window);
        cell.generator_id = gen.points.empty() ? -1 : 0;
        cell.visibility = Visibility::clipped;
        tess.cells.push_back(std::move(cell));
        return tess;
    }

    PlaneFrame fr = plane_frame(plane);
    WorkingSet ws;
    const std::size_t n = gen.points.size();
    if (gen.box.mode == BoundaryMode::periodic) {
        ws.q.reserve(27 * n);
        for (std::size_t i = 0; i < n; ++i)
            for (int ox = -1; ox <= 1; ++ox)
                for (int oy = -1; oy <= 1; ++oy)
                    for (int oz = -1; oz <= 1; ++oz) {
                        Vec3 g = gen.points[i] +
                                 Vec3{ox * gen.box.lengths[0], oy * gen.box.lengths[1],
                                      oz * gen.box.lengths[2]};
                        Vec3 rel = g - fr.base;
                        Vec2 q{dot(rel, fr.u), dot(rel, fr.v)};
                        double d = dot(g, plane.normal) - plane.offset;
                        ws.q.push_back(q);
                        ws.dsq.push_back(d * d);
                        ws.base.push_back(static_cast<int>(i));
                    }
    } else {
        ws.q.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec3 rel = gen.points[i] - fr.base;
            ws.q.push_back({dot(rel, fr.u), dot(rel, fr.v)});
            double d = dot(gen.points[i], plane.normal) - plane.offset;
            ws.dsq.push_back(d * d);
            ws.base.push_back(static_cast<int>(i));
        }
    }
    const std::size_t m = ws.q.size();
    ws.qn2.resize(m);
    for (std::size_t k = 0; k < m; ++k) ws.qn2[k] = norm2(ws.q[k]);

    Vec2 win = tess.window;
    double diag = norm(win);
    std::vector<char> visited(m, 0);
    std::deque<int> queue;
    std::vector<double> l2buf;

    auto push = [&](int k) {
        if (k >= 0 && !visited[static_cast<std::size_t>(k)]) {
            visited[static_cast<std::size_t>(k)] = 1;
            queue.push_back(k);
        }
    };
    push(power_owner(ws, {0.5 * win.x, 0.5 * win.y}));

    for (int round = 0; round < 8; ++round) {
        while (!queue.empty()) {
            int j = queue.front();
            queue.pop_front();
            LabeledPolygon poly;
            if (!build_power_cell(ws, j, win, diag, poly, l2buf)) continue;
            if (poly.empty()) continue;
            Cell cell;
            cell.generator_id = ws.base[static_cast<std::size_t>(j)];
            bool clipped = false;
            for (int lab : poly.label) {
                if (lab < 0)
                    clipped = true;
                else
                    push(lab);
            }
            cell.visibility = clipped ? Visibility::clipped : Visibility::complete;
            cell.poly = std::move(poly);
            tess.cells.push_back(std::move(cell));
        }
        // Sparse probe to catch any region the edge walk missed.
        double covered = 0.0;
        for (const auto& c : tess.cells) covered += polygon_area(c.poly.v);
        if (std::abs(covered - tess.window_area) <= 1e-9 * tess.window_area) break;
        int gn = 16 << round;
        bool found = false;
        for (int iy = 0; iy < gn && !found; ++iy)
            for (int ix = 0; ix < gn; ++ix) {
                Vec2 p{(ix + 0.5) * win.x / gn, (iy + 0.5) * win.y / gn};
                int o = power_owner(ws, p);
                if (o >= 0 && !visited[static_cast<std::size_t>(o)]) {
                    push(o);
                    found = true;
                }
            }
        if (!found) break;
    }
    return tess;
}

CellMetrics cell_metrics(const std::vector<Vec2>& polygon, double collinear_tol_area) {
    std::vector<Vec2> merged = merge_collinear(polygon, collinear_tol_area);
    if (merged.size() < 3)
        throw std::invalid_argument("cell polygon has fewer than 3 distinct vertices");
    CellMetrics cm;
    cm.area = std::abs(polygon_area(polygon));
    cm.perimeter = polygon_perimeter(polygon);
    cm.n_edges = static_cast<int>(merged.size());
    return cm;
}

CellMetrics cell_metrics(const Cell& cell, const SectionTessellation& tess) {
    return cell_metrics(cell.poly.v, 1e-12 * tess.window_area);
}

std::vector<CellMetrics> toroidal_cell_metrics(const SectionTessellation& tess) {
    std::map<int, CellMetrics> merged;
    const double tol = 1e-12 * tess.window_area;
    for (const auto& cell : tess.cells) {
        CellMetrics& cm = merged[cell.generator_id];
        cm.area += std::abs(polygon_area(cell.poly.v));
        const auto& v = cell.poly.v;
        const auto& lab = cell.poly.label;
        const std::size_t k = v.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = (i + 1) % k;
            if (lab[i] >= 0) cm.perimeter += norm(v[j] - v[i]);
            // A vertex is a true tessellation vertex iff neither incident edge
            // lies on the window boundary and the corner is a real corner.
            std::size_t prev = (i + k - 1) % k;
            if (lab[prev] >= 0 && lab[i] >= 0) {
                double corner = 0.5 * std::abs(cross(v[i] - v[prev], v[j] - v[i]));
                if (corner >= tol) cm.n_edges += 1;
            }
        }
    }
    std::vector<CellMetrics> out;
    out.reserve(merged.size());
    for (auto& [id, cm] : merged) out.push_back(cm);
    return out;
}

std::vector<CellMetrics> visible_cell_metrics(const SectionTessellation& tess) {
    std::vector<CellMetrics> out;
    out.reserve(tess.cells.size());
    for (const auto& c : tess.cells) out.push_back(cell_metrics(c, tess));
    return out;
}

std::vector<double> cell_areas(const SectionTessellation& tess) {
    std::map<int, double> merged;
    for (const auto& c : tess.cells)
        merged[c.generator_id] += std::abs(polygon_area(c.poly.v));
    std::vector<double> out;
    out.reserve(merged.size());
    for (auto& [id, a] : merged) out.push_back(a);
    return out;
}

std::vector<Vec2> cell_centroids(const SectionTessellation& tess) {
    std::map<int, std::pair<double, Vec2>> merged;
    for (const auto& c : tess.cells) {
        double a = std::abs(polygon_area(c.poly.v));
        Vec2 ct = polygon_centroid(c.poly.v);
        auto& [wsum, acc] = merged[c.generator_id];
        acc = acc + a * ct;
        wsum += a;
    }
    std::vector<Vec2> out;
    out.reserve(merged.size());
    for (auto& [id, wa] : merged)
        out.push_back(wa.first > 0.0 ? (1.0 / wa.first) * wa.second : Vec2{});
    return out;
}

namespace {

int count_cells_in_rect(const SectionTessellation& tess, Vec2 lo, Vec2 hi) {
    std::vector<int> ids;
    for (const auto& c : tess.cells) {
        LabeledPolygon p = c.poly;
        clip_halfplane(p, {-1.0, 0.0}, -lo.x, kEdgeLeft);
        clip_halfplane(p, {1.0, 0.0}, hi.x, kEdgeRight);
        clip_halfplane(p, {0.0, -1.0}, -lo.y, kEdgeBottom);
        clip_halfplane(p, {0.0, 1.0}, hi.y, kEdgeTop);
        if (!p.empty() && std::abs(polygon_area(p.v)) > 1e-14 * tess.window_area)
            ids.push_back(c.generator_id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return static_cast<int>(ids.size());
}

}  // namespace

SectionTessellation window_cut(const SectionTessellation& tess, int target) {
    int full = tess.n2d();
    if (target > full) throw std::runtime_error("window_cut: target exceeds cell count");
    if (target < 1) throw std::runtime_error("window_cut: target must be positive");
    if (target == full) return tess;

    Vec2 center{0.5 * tess.window.x, 0.5 * tess.window.y};
    auto rect_at = [&](double s) {
        Vec2 half{0.5 * s * tess.window.x, 0.5 * s * tess.window.y};
        return std::pair<Vec2, Vec2>{center - half, center + half};
    };
    auto count_at = [&](double s) {
        auto [lo, hi] = rect_at(s);
        return count_cells_in_rect(tess, lo, hi);
    };

    double slo = 1e-9, shi = 1.0;
    if (count_at(slo) > target)
        throw std::runtime_error("window_cut: target infeasible (too few cells at center)");
    for (int it = 0; it < 70; ++it) {
        double mid = 0.5 * (slo + shi);
        if (count_at(mid) <= target)
            slo = mid;
        else
            shi = mid;
    }
    if (count_at(slo) != target)
        throw std::runtime_error("window_cut: no window scale yields the exact target");

    auto [lo, hi] = rect_at(slo);
    SectionTessellation out;
    out.mode = tess.mode;
    out.window = hi - lo;
    out.window_area = out.window.x * out.window.y;
    out.degenerate = false;
    for (const auto& c : tess.cells) {
        LabeledPolygon p = c.poly;
        clip_halfplane(p, {-1.0, 0.0}, -lo.x, kEdgeLeft);
        clip_halfplane(p, {1.0, 0.0}, hi.x, kEdgeRight);
        clip_halfplane(p, {0.0, -1.0}, -lo.y, kEdgeBottom);
        clip_halfplane(p, {0.0, 1.0}, hi.y, kEdgeTop);
        if (p.empty() || std::abs(polygon_area(p.v)) <= 1e-14 * tess.window_area)
            continue;
        Cell cell;
        cell.generator_id = c.generator_id;
        for (auto& vv : p.v) vv = vv - lo;
        bool clipped = false;
        for (int lab : p.label)
            if (lab < 0) clipped = true;
        cell.visibility = clipped ? Visibility::clipped : Visibility::complete;
        cell.poly = std::move(p);
        out.cells.push_back(std::move(cell));
    }
    return out;
}

std::vector<int> brute_force_section_oracle(const GeneratorSet& gen,
                                            const SectionPlane& plane,
                                            int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("oracle grid must be at least 2x2");
    PlaneFrame fr = plane_frame(plane);
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    const int n = static_cast<int>(gen.points.size());
    for (int iy = 0; iy < grid_n; ++iy)
        for (int ix = 0; ix < grid_n; ++ix) {
            Vec2 w{(ix + 0.5) * plane.window_size.x / grid_n,
                   (iy + 0.5) * plane.window_size.y / grid_n};
            Vec3 p = fr.base + w.x * fr.u + w.y * fr.v;
            int best = -1;
            double bestd = kInf;
            for (int i = 0; i < n; ++i) {
                double d = generator_distance2(gen, p, i);
                if (d < bestd) {
                    bestd = d;
                    best = i;
                }
            }
            labels.push_back(best);
        }
    return labels;
}

}  // namespace pvt
