#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nonsmooth {

// Points and covectors in R^1 / R^2. Dimension 1 uses slot 0 only.
using Vec = std::array<double, 2>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec scale(const Vec& a, double s) { return {a[0] * s, a[1] * s}; }
inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
}
inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }
inline double dist(const Vec& a, const Vec& b, int dim) { return norm(sub(a, b), dim); }

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Closed axis-aligned box.
struct Box {
    int dim = 1;
    Vec lo{0.0, 0.0};
    Vec hi{1.0, 1.0};

    bool contains(const Vec& p, double tol = 1e-12) const {
        for (int k = 0; k < dim; ++k)
            if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) return false;
        return true;
    }
    bool contains_box(const Box& inner, double tol = 1e-12) const {
        for (int k = 0; k < dim; ++k)
            if (inner.lo[k] < lo[k] - tol || inner.hi[k] > hi[k] + tol) return false;
        return true;
    }
    double diameter() const {
        Vec d = sub(hi, lo);
        return norm(d, dim);
    }
    Box intersect(const Box& other) const {
        Box r;
        r.dim = dim;
        for (int k = 0; k < dim; ++k) {
            r.lo[k] = std::max(lo[k], other.lo[k]);
            r.hi[k] = std::min(hi[k], other.hi[k]);
        }
        return r;
    }
};

inline Box box1(double lo, double hi) { return Box{1, {lo, 0.0}, {hi, 0.0}}; }
inline Box box2(double lx, double ly, double hx, double hy) {
    return Box{2, {lx, ly}, {hx, hy}};
}
inline Box ball_box(const Vec& center, double r, int dim) {
    Box b;
    b.dim = dim;
    for (int k = 0; k < dim; ++k) {
        b.lo[k] = center[k] - r;
        b.hi[k] = center[k] + r;
    }
    return b;
}

// Regular vertex grid over a box. Vertex (i0, i1) sits at
// lo + i * spacing; linear index = i1 * res[0] + i0 (axis 0 fastest).
struct GridSpec {
    Box box;
    std::array<int, 2> res{2, 1};

    int dim() const { return box.dim; }
    double spacing(int axis) const {
        return (box.hi[axis] - box.lo[axis]) / (res[axis] - 1);
    }
    double max_spacing() const {
        double h = spacing(0);
        if (dim() == 2) h = std::max(h, spacing(1));
        return h;
    }
    std::int64_t vertex_count() const {
        std::int64_t n = res[0];
        if (dim() == 2) n *= res[1];
        return n;
    }
    Vec vertex(int i0, int i1 = 0) const {
        Vec p{box.lo[0] + i0 * spacing(0), 0.0};
        if (dim() == 2) p[1] = box.lo[1] + i1 * spacing(1);
        return p;
    }
    std::int64_t vertex_index(int i0, int i1 = 0) const {
        return static_cast<std::int64_t>(i1) * res[0] + i0;
    }
    void validate() const {
        for (int k = 0; k < dim(); ++k) {
            if (box.lo[k] >= box.hi[k]) throw DomainError("GridSpec: lo >= hi");
            if (res[k] < 2) throw DomainError("GridSpec: resolution < 2");
        }
    }
};

inline GridSpec grid1(double lo, double hi, int n) {
    GridSpec g;
    g.box = box1(lo, hi);
    g.res = {n, 1};
    return g;
}
inline GridSpec grid2(const Box& b, int n0, int n1) {
    GridSpec g;
    g.box = b;
    g.res = {n0, n1};
    return g;
}

}  // namespace nonsmooth
