#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvt/tda.hpp"

namespace pvt {

double PiecewiseLinear::operator()(double t) const {
    if (pts.empty()) return 0.0;
    if (t <= pts.front().first) return pts.front().second;
    if (t >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double x, const std::pair<double, double>& p) {
                                   return x < p.first;
                               });
    auto lo = it - 1;
    double u = (t - lo->first) / (it->first - lo->first);
    return lo->second + u * (it->second - lo->second);
}

namespace {

// Drop interior points lying within tol of the segment between their kept
// neighbors. tol == 0 keeps everything.
void prune_pl(std::vector<std::pair<double, double>>& pts, double tol) {
    if (tol <= 0.0 || pts.size() < 3) return;
    std::vector<std::pair<double, double>> kept;
    kept.reserve(pts.size());
    kept.push_back(pts.front());
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const auto& a = kept.back();
        const auto& b = pts[i];
        const auto& c = pts[i + 1];
        double u = (b.first - a.first) / (c.first - a.first);
        double lin = a.second + u * (c.second - a.second);
        if (std::abs(b.second - lin) > tol) kept.push_back(b);
    }
    kept.push_back(pts.back());
    pts = std::move(kept);
}

double tent(const PersistencePair& p, double t) {
    double v = std::min(t - p.birth, p.death - t);
    return v > 0.0 ? v : 0.0;
}

}  // namespace

Landscape landscape_from_diagram(const std::vector<PersistencePair>& pairs,
                                 double t_end) {
    if (!(t_end > 0.0))
        throw std::invalid_argument("landscape_from_diagram: t_end must be positive");
    std::vector<PersistencePair> ps;
    for (const auto& p : pairs) {
        if (!(p.death >= p.birth))
            throw std::invalid_argument("landscape_from_diagram: death < birth");
        if (p.death > p.birth && p.birth < t_end) ps.push_back(p);
    }

    Landscape out;
    out.t_end = t_end;
    if (ps.empty()) {
        return out;
    }

    // The k-th largest of a family of tents is piecewise linear with
    // breakpoints only at tent endpoints, apexes and up/down slope crossings.
    std::vector<double> ts;
    ts.push_back(0.0);
    ts.push_back(t_end);
    for (const auto& p : ps) {
        ts.push_back(p.birth);
        ts.push_back(p.death);
        ts.push_back(0.5 * (p.birth + p.death));
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            ts.push_back(0.5 * (ps[i].birth + ps[j].death));
            ts.push_back(0.5 * (ps[j].birth + ps[i].death));
        }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    ts.erase(std::remove_if(ts.begin(), ts.end(),
                            [&](double t) { return t < 0.0 || t > t_end; }),
             ts.end());

    // vals[i] holds the tent heights at ts[i], sorted descending, zeros dropped.
    std::vector<std::vector<double>> vals(ts.size());
    std::size_t depth = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto& v = vals[i];
        for (const auto& p : ps) {
            double h = tent(p, ts[i]);
            if (h > 0.0) v.push_back(h);
        }
        std::sort(v.begin(), v.end(), std::greater<>());
        depth = std::max(depth, v.size());
    }

    const double scale = [&] {
        double m = 1.0;
        for (const auto& v : vals)
            if (!v.empty()) m = std::max(m, v.front());
        return m;
    }();
    const double tol = 1e-13 * scale;

    for (std::size_t k = 0; k < depth; ++k) {
        PiecewiseLinear fn;
        fn.pts.reserve(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i)
            fn.pts.push_back({ts[i], k < vals[i].size() ? vals[i][k] : 0.0});
        prune_pl(fn.pts, tol);
        out.fns.push_back(std::move(fn));
    }
    return out;
}

Landscape mean_landscape(const std::vector<Landscape>& landscapes,
                         const std::vector<double>& weights, double prune_tol) {
    if (landscapes.empty())
        throw std::invalid_argument("mean_landscape: no landscapes");
    if (!weights.empty() && weights.size() != landscapes.size())
        throw std::invalid_argument("mean_landscape: weight count mismatch");

    std::vector<double> w(landscapes.size(),
                          1.0 / static_cast<double>(landscapes.size()));
    if (!weights.empty()) {
        double total = 0.0;
        for (double x : weights) {
            if (!(x >= 0.0))
                throw std::invalid_argument("mean_landscape: negative weight");
            total += x;
        }
        if (!(total > 0.0))
            throw std::invalid_argument("mean_landscape: zero total weight");
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights[i] / total;
    }

    Landscape out;
    std::size_t depth = 0;
    for (const auto& l : landscapes) {
        out.t_end = std::max(out.t_end, l.t_end);
        depth = std::max(depth, l.fns.size());
    }

    for (std::size_t k = 1; k <= depth; ++k) {
        std::vector<double> ts;
        ts.push_back(0.0);
        ts.push_back(out.t_end);
        for (const auto& l : landscapes)
            if (const PiecewiseLinear* f = l.fn(k))
                for (const auto& p : f->pts) ts.push_back(p.first);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

        PiecewiseLinear fn;
        fn.pts.resize(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) fn.pts[i] = {ts[i], 0.0};

        // Two-pointer evaluation per landscape keeps this linear in points.
        for (std::size_t li = 0; li < landscapes.size(); ++li) {
            const PiecewiseLinear* f = landscapes[li].fn(k);
            if (!f || f->pts.empty()) continue;
            std::size_t j = 0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                double t = ts[i];
                while (j + 1 < f->pts.size() && f->pts[j + 1].first <= t) ++j;
                double v;
                if (t <= f->pts.front().first)
                    v = f->pts.front().second;
                else if (t >= f->pts.back().first)
                    v = f->pts.back().second;
                else {
                    const auto& a = f->pts[j];
                    const auto& b = f->pts[j + 1];
                    v = a.second + (t - a.first) / (b.first - a.first) *
                                       (b.second - a.second);
                }
                fn.pts[i].second += w[li] * v;
            }
        }
        prune_pl(fn.pts, prune_tol);
        out.fns.push_back(std::move(fn));
    }
    while (!out.fns.empty()) {
        const auto& pts = out.fns.back().pts;
        bool zero = std::all_of(pts.begin(), pts.end(),
                                [](const auto& p) { return p.second == 0.0; });
        if (!zero) break;
        out.fns.pop_back();
    }
    return out;
}

double landscape_l2_distance(const Landscape& a, const Landscape& b) {
    std::size_t depth = std::max(a.fns.size(), b.fns.size());
    double total = 0.0;
    for (std::size_t k = 1; k <= depth; ++k) {
        const PiecewiseLinear* fa = a.fn(k);
        const PiecewiseLinear* fb = b.fn(k);
        std::vector<double> ts;
        if (fa)
            for (const auto& p : fa->pts) ts.push_back(p.first);
        if (fb)
            for (const auto& p : fb->pts) ts.push_back(p.first);
        if (ts.empty()) continue;
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

        auto diff = [&](double t) {
            double v = 0.0;
            if (fa) v += (*fa)(t);
            if (fb) v -= (*fb)(t);
            return v;
        };
        double prev_t = ts.front();
        double prev_v = diff(prev_t);
        for (std::size_t i = 1; i < ts.size(); ++i) {
            double t = ts[i];
            double v = diff(t);
            // diff is linear on the interval, integrate its square exactly
            total += (t - prev_t) * (prev_v * prev_v + prev_v * v + v * v) / 3.0;
            prev_t = t;
            prev_v = v;
        }
    }
    return std::sqrt(total);
}

}  // namespace pvt
