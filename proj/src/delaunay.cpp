#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "pvt/predicates.hpp"
#include "pvt/tda.hpp"

namespace pvt {

namespace {

constexpr int kGhost = -1;

struct Tri {
    int v[3];
    bool alive = true;
    bool is_ghost() const { return v[2] == kGhost; }
};

std::uint64_t edge_key(int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x + 1)) << 32) |
           static_cast<std::uint32_t>(y + 1);
}

struct Mesh {
    const std::vector<Vec2>& pts;
    std::vector<Tri> tris;
    std::unordered_map<std::uint64_t, int> edge_to_tri;  // directed edge -> tri

    explicit Mesh(const std::vector<Vec2>& p) : pts(p) {}

    void add_tri(int a, int b, int c) {
        // Normalize so a ghost vertex, if any, sits in slot 2.
        if (a == kGhost) { int t = a; a = b; b = c; c = t; }
        if (b == kGhost) { int t = c; c = b; b = a; a = t; }
        int id = static_cast<int>(tris.size());
        tris.push_back({{a, b, c}, true});
        edge_to_tri[edge_key(a, b)] = id;
        edge_to_tri[edge_key(b, c)] = id;
        edge_to_tri[edge_key(c, a)] = id;
    }

    void kill(int id) {
        Tri& t = tris[static_cast<std::size_t>(id)];
        t.alive = false;
        edge_to_tri.erase(edge_key(t.v[0], t.v[1]));
        edge_to_tri.erase(edge_key(t.v[1], t.v[2]));
        edge_to_tri.erase(edge_key(t.v[2], t.v[0]));
    }

    bool conflicts(const Tri& t, Vec2 p) const {
        if (!t.is_ghost())
            return incircle(pts[static_cast<std::size_t>(t.v[0])],
                            pts[static_cast<std::size_t>(t.v[1])],
                            pts[static_cast<std::size_t>(t.v[2])], p) > 0;
        // Ghost (u, v, G): outside half-plane is strictly left of u->v; a point
        // exactly on the open hull segment also conflicts.
        Vec2 u = pts[static_cast<std::size_t>(t.v[0])];
        Vec2 v = pts[static_cast<std::size_t>(t.v[1])];
        int o = orient2d(u, v, p);
        if (o > 0) return true;
        if (o == 0) {
            double s = dot(p - u, v - u);
            if (s > 0.0 && s < norm2(v - u)) return true;
        }
        return false;
    }

    void insert(int pid) {
        Vec2 p = pts[static_cast<std::size_t>(pid)];
        std::vector<int> bad;
        for (int i = 0; i < static_cast<int>(tris.size()); ++i)
            if (tris[static_cast<std::size_t>(i)].alive &&
                conflicts(tris[static_cast<std::size_t>(i)], p))
                bad.push_back(i);
        if (bad.empty())
            throw std::runtime_error("delaunay2: point conflicts with no triangle");
        std::vector<char> is_bad(tris.size(), 0);
        for (int i : bad) is_bad[static_cast<std::size_t>(i)] = 1;

        std::vector<std::pair<int, int>> boundary;
        for (int i : bad) {
            const Tri& t = tris[static_cast<std::size_t>(i)];
            const int e[3][2] = {{t.v[0], t.v[1]}, {t.v[1], t.v[2]}, {t.v[2], t.v[0]}};
            for (const auto& ed : e) {
                auto it = edge_to_tri.find(edge_key(ed[1], ed[0]));
                if (it == edge_to_tri.end() || !is_bad[static_cast<std::size_t>(it->second)])
                    boundary.push_back({ed[0], ed[1]});
            }
        }
        for (int i : bad) kill(i);
        for (auto [x, y] : boundary) add_tri(x, y, pid);
    }
};

Triangulation collinear_result(std::vector<Vec2> pts) {
    Triangulation out;
    out.points = std::move(pts);
    std::vector<int> order(out.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Vec2& pa = out.points[static_cast<std::size_t>(a)];
        const Vec2& pb = out.points[static_cast<std::size_t>(b)];
        return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        int a = order[i], b = order[i + 1];
        out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return out;
}

}  // namespace

Triangulation delaunay2(const PointCloud2& cloud) {
    const std::vector<Vec2>& pts = cloud.points;
    const std::size_t n = pts.size();
    for (const Vec2& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("delaunay2: non-finite coordinate");
    {
        std::vector<Vec2> sorted = pts;
        std::sort(sorted.begin(), sorted.end(), [](Vec2 a, Vec2 b) {
            return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (sorted[i].x == sorted[i + 1].x && sorted[i].y == sorted[i + 1].y)
                throw std::invalid_argument("delaunay2: duplicate points");
    }
    if (n < 3) return collinear_result(pts);

    // First non-collinear triple; fully collinear clouds become an edge path.
    std::size_t third = n;
    for (std::size_t i = 2; i < n; ++i)
        if (orient2d(pts[0], pts[1], pts[i]) != 0) {
            third = i;
            break;
        }
    if (third == n) return collinear_result(pts);

    Mesh mesh(pts);
    {
        int a = 0, b = 1, c = static_cast<int>(third);
        if (orient2d(pts[0], pts[1], pts[third]) < 0) std::swap(b, c);
        mesh.add_tri(a, b, c);
        mesh.add_tri(b, a, kGhost);
        mesh.add_tri(c, b, kGhost);
        mesh.add_tri(a, c, kGhost);
    }
    for (std::size_t i = 2; i < n; ++i) {
        if (i == third) continue;
        mesh.insert(static_cast<int>(i));
    }

    Triangulation out;
    out.points = pts;
    std::vector<std::pair<int, int>> edges;
    for (const Tri& t : mesh.tris) {
        if (!t.alive || t.is_ghost()) continue;
        out.triangles.push_back({t.v[0], t.v[1], t.v[2]});
        const int e[3][2] = {{t.v[0], t.v[1]}, {t.v[1], t.v[2]}, {t.v[2], t.v[0]}};
        for (const auto& ed : e)
            edges.push_back({std::min(ed[0], ed[1]), std::max(ed[0], ed[1])});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out.edges = std::move(edges);
    return out;
}

}  // namespace pvt
