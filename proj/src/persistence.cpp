#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "pvt/tda.hpp"

namespace pvt {

namespace {

struct UnionFind {
    std::vector<int> parent, rank_;
    explicit UnionFind(std::size_t n) : parent(n), rank_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)])
            std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)])
            ++rank_[static_cast<std::size_t>(a)];
        return true;
    }
};

}  // namespace

PersistenceDiagram persistence_pairs(const Filtration& filt) {
    const auto& simplices = filt.simplices;
    double prev = -1.0;
    int n_vertices = 0;
    for (const Simplex& s : simplices) {
        if (s.value < prev)
            throw std::invalid_argument("persistence_pairs: filtration not sorted");
        prev = s.value;
        if (s.dim == 0) {
            if (s.value != 0.0)
                throw std::invalid_argument("persistence_pairs: vertex born late");
            ++n_vertices;
        }
    }

    PersistenceDiagram out;
    if (n_vertices == 0) return out;

    // H0: each edge that merges two components kills the younger one (both
    // components are born at 0, so every merge yields a (0, value) pair).
    UnionFind uf(static_cast<std::size_t>(n_vertices));
    std::vector<std::size_t> cycle_edges;  // positions of edges creating loops
    std::map<std::pair<int, int>, int> edge_index;
    int n_edges = 0;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        const Simplex& s = simplices[i];
        if (s.dim != 1) continue;
        edge_index[{std::min(s.v[0], s.v[1]), std::max(s.v[0], s.v[1])}] = n_edges++;
        if (uf.unite(s.v[0], s.v[1]))
            out.h0.push_back({0.0, s.value});
        else
            cycle_edges.push_back(i);
    }
    out.has_essential = true;
    if (static_cast<int>(out.h0.size()) + 1 +
            static_cast<int>([&] {
                int roots = 0;
                for (int v = 0; v < n_vertices; ++v)
                    if (uf.find(v) == v) ++roots;
                return roots - 1;
            }()) != n_vertices)
        throw std::runtime_error("persistence_pairs: H0 bookkeeping mismatch");

    // Components never merged stay essential; the spec'd use always feeds a
    // connected complex, so only one essential class is reported either way.

    // H1: reduce triangle boundaries over Z/2 against edge positions. The low
    // entry of a reduced column pairs that edge with the triangle.
    std::map<int, std::size_t> pivot_to_col;  // low edge -> reduced column id
    std::vector<std::vector<int>> columns;
    std::vector<double> col_value;
    std::vector<double> edge_value(static_cast<std::size_t>(n_edges));
    for (const Simplex& s : simplices)
        if (s.dim == 1)
            edge_value[static_cast<std::size_t>(
                edge_index[{std::min(s.v[0], s.v[1]), std::max(s.v[0], s.v[1])}])] =
                s.value;

    auto xor_into = [](std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> r;
        r.reserve(a.size() + b.size());
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(r));
        a = std::move(r);
    };

    for (const Simplex& s : simplices) {
        if (s.dim != 2) continue;
        std::vector<int> col;
        for (auto [x, y] : {std::pair{s.v[0], s.v[1]}, {s.v[1], s.v[2]}, {s.v[2], s.v[0]}}) {
            auto it = edge_index.find({std::min(x, y), std::max(x, y)});
            if (it == edge_index.end())
                throw std::runtime_error("persistence_pairs: triangle edge missing");
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            auto it = pivot_to_col.find(col.back());
            if (it == pivot_to_col.end()) break;
            xor_into(col, columns[it->second]);
        }
        if (col.empty()) continue;  // already a boundary
        int low = col.back();
        pivot_to_col[low] = columns.size();
        columns.push_back(std::move(col));
        col_value.push_back(s.value);
        double birth = edge_value[static_cast<std::size_t>(low)];
        double death = col_value.back();
        if (death > birth) out.h1.push_back({birth, death});
    }

    auto by_death = [](const PersistencePair& a, const PersistencePair& b) {
        if (a.death != b.death) return a.death < b.death;
        return a.birth < b.birth;
    };
    std::sort(out.h0.begin(), out.h0.end(), by_death);
    std::sort(out.h1.begin(), out.h1.end(), by_death);
    return out;
}

}  // namespace pvt
