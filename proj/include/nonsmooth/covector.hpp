#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsmooth/geometry.hpp"

namespace nonsmooth {

// A covector is the tau=1 slice of a conic covector; same storage as Vec.
using Covector = Vec;

struct ConicCovector {
    Vec xi{0, 0};
    double tau = 1.0;
};

struct NotReducibleError : std::runtime_error {
    explicit NotReducibleError(const std::string& what) : std::runtime_error(what) {}
};

inline Covector reduce_conic(const ConicCovector& c) {
    if (!(c.tau > 0.0))
        throw NotReducibleError("reduce_conic: tau must be positive");
    return scale(c.xi, 1.0 / c.tau);
}

enum class Provenance { homological, clarke, hull };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::homological: return "homological";
        case Provenance::clarke: return "clarke";
        default: return "hull";
    }
}

// A finite sampled approximation of a subdifferential at a point. `pitch` is
// the sampling resolution: membership and all set comparisons are made up to
// pitch. Hull-provenance sets list hull vertices in boundary order and are
// interpreted as their convex span.
struct CovectorSet {
    int dim = 1;
    Vec x{0, 0};
    std::vector<Covector> points;
    double pitch = 0.0;
    Provenance provenance = Provenance::homological;

    bool empty() const { return points.empty(); }
};

namespace detail {

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline double dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
    Vec ab = sub(b, a);
    double len2 = dot(ab, ab, 2);
    if (len2 <= 0.0) return dist(p, a, 2);
    double t = dot(sub(p, a), ab, 2) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, add(a, scale(ab, t)), 2);
}

// Distance from p to the convex region spanned by hull vertices (boundary
// order); 0 when inside.
inline double dist_to_hull(const Vec& p, const std::vector<Vec>& hull, int dim) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (dim == 1) {
        double lo = hull.front()[0], hi = lo;
        for (const auto& v : hull) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        if (p[0] < lo) return lo - p[0];
        if (p[0] > hi) return p[0] - hi;
        return 0.0;
    }
    if (hull.size() == 1) return dist(p, hull[0], 2);
    if (hull.size() == 2) return dist_point_segment(p, hull[0], hull[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < hull.size(); ++i) {
        const Vec& a = hull[i];
        const Vec& b = hull[(i + 1) % hull.size()];
        if (cross2(a, b, p) < 0.0) inside = false;
        best = std::min(best, dist_point_segment(p, a, b));
    }
    return inside ? 0.0 : best;
}

}  // namespace detail

// Andrew monotone-chain hull; returns vertices in counter-clockwise order.
// Collinear interior points are dropped. dim 1 returns {min, max}.
inline std::vector<Vec> convex_hull(std::vector<Vec> pts, int dim) {
    if (pts.empty()) return pts;
    if (dim == 1) {
        double lo = pts.front()[0], hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        if (lo == hi) return {vec1(lo)};
        return {vec1(lo), vec1(hi)};
    }
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Vec> hull(2 * pts.size());
    size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && detail::cross2(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    size_t lower = k + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (k >= lower && detail::cross2(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

// Distance from xi to the set (hull region for hull-provenance sets, nearest
// sample otherwise).
inline double set_distance(const CovectorSet& s, const Covector& xi) {
    if (s.points.empty()) return std::numeric_limits<double>::infinity();
    if (s.provenance == Provenance::clarke || s.provenance == Provenance::hull)
        return detail::dist_to_hull(xi, s.points, s.dim);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points) best = std::min(best, dist(p, xi, s.dim));
    return best;
}

inline bool membership(const CovectorSet& s, const Covector& xi) {
    return set_distance(s, xi) <= s.pitch;
}

// Symmetric Hausdorff distance between the point lists (hull semantics are
// not expanded: both sides are compared as finite samples).
inline double hausdorff(const CovectorSet& a, const CovectorSet& b) {
    if (a.points.empty() && b.points.empty()) return 0.0;
    if (a.points.empty() || b.points.empty())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& p : a.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b.points) best = std::min(best, dist(p, q, a.dim));
        worst = std::max(worst, best);
    }
    for (const auto& q : b.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : a.points) best = std::min(best, dist(p, q, a.dim));
        worst = std::max(worst, best);
    }
    return worst;
}

inline CovectorSet minkowski_sum(const CovectorSet& a, const CovectorSet& b) {
    if (a.dim != b.dim)
        throw DomainError("minkowski_sum: dimension mismatch");
    CovectorSet out;
    out.dim = a.dim;
    out.x = a.x;
    out.pitch = a.pitch + b.pitch;
    out.provenance = Provenance::hull;
    out.points.reserve(a.points.size() * b.points.size());
    for (const auto& p : a.points)
        for (const auto& q : b.points) out.points.push_back(add(p, q));
    if (out.dim == 2 && out.points.size() > 3)
        out.points = convex_hull(out.points, 2);
    else if (out.dim == 1 && out.points.size() > 2)
        out.points = convex_hull(out.points, 1);
    return out;
}

// lambda * S: points and pitch scale together.
inline CovectorSet scale_set(const CovectorSet& s, double lambda) {
    CovectorSet out = s;
    for (auto& p : out.points) p = scale(p, lambda);
    out.pitch = std::abs(lambda) * s.pitch;
    if (lambda == 0.0 && !s.points.empty()) {
        out.points = {vec2(0, 0)};
        out.pitch = 0.0;
    }
    if (lambda < 0.0 && s.dim == 2 &&
        (s.provenance == Provenance::clarke || s.provenance == Provenance::hull) &&
        out.points.size() > 2)
        std::reverse(out.points.begin(), out.points.end());  // keep CCW order
    return out;
}

inline CovectorSet negate_set(const CovectorSet& s) { return scale_set(s, -1.0); }

}  // namespace nonsmooth
