#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "nonsmooth/calculus.hpp"
#include "nonsmooth/cubical.hpp"
#include "nonsmooth/field.hpp"
#include "nonsmooth/geometry.hpp"
#include "nonsmooth/subdiff.hpp"

namespace nonsmooth {

// Classical conjugate, paper convention: f*(k) = inf_x(-<k,x> + f(x)).
struct ConjugateTable {
    GridSpec k_grid;
    std::vector<double> values;
    std::vector<uint8_t> boundary_attained;  // inf reached on the x-grid edge
};

inline ConjugateTable classical_conjugate(const ScalarField& f, const GridSpec& k_grid,
                                          const GridSpec& x_grid) {
    const int d = f.dim();
    BaseGrid b{x_grid, eval_grid(f, x_grid)};
    ConjugateTable out;
    out.k_grid = k_grid;
    const int n0 = k_grid.res[0];
    const int n1 = d == 2 ? k_grid.res[1] : 1;
    const int m0 = x_grid.res[0];
    const int m1 = d == 2 ? x_grid.res[1] : 1;
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            Vec k = k_grid.vertex(i, j);
            double best = std::numeric_limits<double>::infinity();
            int bi = 0, bj = 0;
            for (int v1 = 0; v1 < m1; ++v1)
                for (int v0 = 0; v0 < m0; ++v0) {
                    Vec x = x_grid.vertex(v0, v1);
                    double val = b.values[static_cast<size_t>(
                                     x_grid.vertex_index(v0, v1))] -
                                 dot(k, x, d);
                    if (val < best) {
                        best = val;
                        bi = v0;
                        bj = v1;
                    }
                }
            bool edge = bi == 0 || bi == m0 - 1 ||
                        (d == 2 && (bj == 0 || bj == m1 - 1));
            out.values.push_back(best);
            out.boundary_attained.push_back(edge ? 1 : 0);
        }
    return out;
}

// Germ of the extended transform at (y, t): compact-support Betti numbers of
// {x : f(x) - <y,x> <= t} truncated to `box`.
inline std::vector<int> extended_legendre_germ(const ScalarField& f, const Covector& y,
                                               double t, const Box& box,
                                               const GridSpec& grid) {
    const int d = f.dim();
    std::vector<double> values;
    values.reserve(static_cast<size_t>(grid.vertex_count()));
    const int m1 = d == 2 ? grid.res[1] : 1;
    for (int j = 0; j < m1; ++j)
        for (int i = 0; i < grid.res[0]; ++i) {
            Vec x = grid.vertex(i, j);
            values.push_back(f.eval_unchecked(x) - dot(y, x, d));
        }
    return compact_support_betti(values, grid, t, box);
}

// Per-cell flags of a germ table.
enum GermFlag : uint8_t {
    germ_retried = 1,           // transversality failure, recomputed at t + dt/2
    germ_touches_boundary = 2,  // the sublevel set meets the truncation box edge
    germ_failed = 4,            // still degenerate after retry
    germ_empty = 8,             // the sublevel set is empty
    germ_full = 16,             // the sublevel set covers the whole truncation box
    germ_boundary_fill = 32,    // ... and its last uncovered vertex was on the box edge
};

struct GermTable {
    GridSpec y_grid;  // covector axis (1-D for fronts; 2-D tables supported)
    GridSpec t_grid;  // always 1-D
    Box box;
    int degrees = 2;                      // entries per cell
    std::vector<int> betti;               // [cell * degrees + k], cell = ti*ny + yi
    std::vector<uint8_t> flags;
    int ny() const { return y_grid.res[0] * (y_grid.dim() == 2 ? y_grid.res[1] : 1); }
    int nt() const { return t_grid.res[0]; }
    const int* cell(int yi, int ti) const {
        return &betti[static_cast<size_t>(ti * ny() + yi) * degrees];
    }
    uint8_t flag(int yi, int ti) const {
        return flags[static_cast<size_t>(ti * ny() + yi)];
    }
    bool nonzero(int yi, int ti) const {
        const int* c = cell(yi, ti);
        for (int k = 0; k < degrees; ++k)
            if (c[k] != 0) return true;
        return false;
    }
};

namespace detail {

// One germ column: fixed y, sweep of t values; reuses the tilted vertex array.
inline void germ_column(const ScalarField& f, const Vec& y, const GridSpec& grid,
                        const Box& box, const GridSpec& t_grid, GermTable& table,
                        int yi) {
    const int d = f.dim();
    std::vector<double> values;
    values.reserve(static_cast<size_t>(grid.vertex_count()));
    const int m1 = d == 2 ? grid.res[1] : 1;
    for (int j = 0; j < m1; ++j)
        for (int i = 0; i < grid.res[0]; ++i) {
            Vec x = grid.vertex(i, j);
            values.push_back(f.eval_unchecked(x) - dot(y, x, d));
        }
    VertexWindow w = window_to_vertices(grid, box);
    auto touches = [&](double t) {
        if (w.empty()) return false;
        const int nv0 = w.nv(0);
        const int nv1 = d == 2 ? w.nv(1) : 1;
        for (int j = 0; j < nv1; ++j)
            for (int i = 0; i < nv0; ++i) {
                if (i != 0 && i != nv0 - 1 && (d == 1 || (j != 0 && j != nv1 - 1)))
                    continue;
                if (values[static_cast<size_t>(grid.vertex_index(
                        w.lo[0] + i, d == 2 ? w.lo[1] + j : 0))] <= t)
                    return true;
            }
        return false;
    };
    double vmin = std::numeric_limits<double>::infinity();
    for (double v : values) vmin = std::min(vmin, v);
    // The level at which the sublevel set covers the whole box is the max of
    // the tilted values over the box window. When that max sits only on the
    // window edge, the fill event is located by the box, not by f, and the
    // germ jump it causes is a truncation artifact (see extract_front).
    double vmax_all = -std::numeric_limits<double>::infinity();
    double vmax_int = vmax_all;
    if (!w.empty()) {
        const int nv0 = w.nv(0);
        const int nv1 = d == 2 ? w.nv(1) : 1;
        for (int j = 0; j < nv1; ++j)
            for (int i = 0; i < nv0; ++i) {
                double v = values[static_cast<size_t>(grid.vertex_index(
                    w.lo[0] + i, d == 2 ? w.lo[1] + j : 0))];
                vmax_all = std::max(vmax_all, v);
                bool edge = i == 0 || i == nv0 - 1 ||
                            (d == 2 && (j == 0 || j == nv1 - 1));
                if (!edge) vmax_int = std::max(vmax_int, v);
            }
    }
    bool fill_on_edge = vmax_all > vmax_int + 1e-12;
    double dt = t_grid.spacing(0);
    for (int ti = 0; ti < table.nt(); ++ti) {
        double t = t_grid.vertex(ti)[0];
        uint8_t fl = 0;
        std::vector<int> g;
        try {
            g = compact_support_betti(values, grid, t, box);
        } catch (const TransversalityError&) {
            fl |= germ_retried;
            try {
                g = compact_support_betti(values, grid, t + 0.5 * dt, box);
                t = t + 0.5 * dt;
            } catch (const TransversalityError&) {
                fl |= germ_failed;
                g.assign(static_cast<size_t>(d) + 1, 0);
            }
        }
        if (t < vmin) fl |= germ_empty;
        if (touches(t)) fl |= germ_touches_boundary;
        if (t >= vmax_all) {
            fl |= germ_full;
            if (fill_on_edge) fl |= germ_boundary_fill;
        }
        size_t idx = static_cast<size_t>(ti * table.ny() + yi);
        table.flags[idx] = fl;
        for (int k = 0; k < table.degrees; ++k)
            table.betti[idx * static_cast<size_t>(table.degrees) + static_cast<size_t>(k)] =
                k < static_cast<int>(g.size()) ? g[static_cast<size_t>(k)] : 0;
    }
}

}  // namespace detail

inline GermTable germ_table(const ScalarField& f, const GridSpec& y_grid,
                            const GridSpec& t_grid, const Box& box,
                            const GridSpec& grid) {
    GermTable table;
    table.y_grid = y_grid;
    table.t_grid = t_grid;
    table.box = box;
    table.degrees = f.dim() + 1;
    const int ny0 = y_grid.res[0];
    const int ny1 = y_grid.dim() == 2 ? y_grid.res[1] : 1;
    table.betti.assign(static_cast<size_t>(ny0) * ny1 * t_grid.res[0] *
                           table.degrees,
                       0);
    table.flags.assign(static_cast<size_t>(ny0) * ny1 * t_grid.res[0], 0);
    for (int j = 0; j < ny1; ++j)
        for (int i = 0; i < ny0; ++i)
            detail::germ_column(f, y_grid.vertex(i, j), grid, box, t_grid, table,
                                j * ny0 + i);
    return table;
}

// An edge of the decorated front: two adjacent table cells with different
// germs. axis 0: (yi, yi+1) at fixed ti; axis 1: (ti, ti+1) at fixed yi.
struct FrontEdge {
    int yi = 0, ti = 0;
    int axis = 1;
    double y = 0.0, t = 0.0;  // edge midpoint in (y, t)
    std::vector<int> betti_lo, betti_hi;
    bool box_artifact = false;  // jump caused by the truncation box, not by f
};

struct Front {
    std::vector<FrontEdge> edges;
};

inline Front extract_front(const GermTable& table) {
    Front front;
    const int ny = table.ny();
    const int nt = table.nt();
    auto betti_of = [&](int yi, int ti) {
        return std::vector<int>(table.cell(yi, ti), table.cell(yi, ti) + table.degrees);
    };
    for (int ti = 0; ti < nt; ++ti)
        for (int yi = 0; yi < ny; ++yi) {
            std::vector<int> a = betti_of(yi, ti);
            if (yi + 1 < ny) {
                std::vector<int> b = betti_of(yi + 1, ti);
                if (a != b) {
                    FrontEdge e;
                    e.yi = yi;
                    e.ti = ti;
                    e.axis = 0;
                    e.y = 0.5 * (table.y_grid.vertex(yi)[0] +
                                 table.y_grid.vertex(yi + 1)[0]);
                    e.t = table.t_grid.vertex(ti)[0];
                    e.betti_lo = a;
                    e.betti_hi = b;
                    front.edges.push_back(std::move(e));
                }
            }
            if (ti + 1 < nt) {
                std::vector<int> b = betti_of(yi, ti + 1);
                if (a != b) {
                    FrontEdge e;
                    e.yi = yi;
                    e.ti = ti;
                    e.axis = 1;
                    e.y = table.y_grid.vertex(yi)[0];
                    e.t = 0.5 * (table.t_grid.vertex(ti)[0] +
                                 table.t_grid.vertex(ti + 1)[0]);
                    e.betti_lo = a;
                    e.betti_hi = b;
                    // A jump is intrinsic when the sublevel set is born there
                    // (lower side empty); if it instead coincides with the set
                    // reaching the truncation box edge, it is a box artifact.
                    bool lower_empty = table.flag(e.yi, ti) & germ_empty;
                    bool touch_lo = table.flag(e.yi, ti) & germ_touches_boundary;
                    bool touch_hi = table.flag(e.yi, ti + 1) & germ_touches_boundary;
                    e.box_artifact = !lower_empty && touch_lo != touch_hi;
                    // A jump caused by the set covering the whole box is
                    // intrinsic only when the last covered level is attained
                    // inside the box (e.g. an interior local max); when it is
                    // attained on the box edge, the box located the event.
                    bool full_lo = table.flag(e.yi, ti) & germ_full;
                    bool full_hi = table.flag(e.yi, ti + 1) & germ_full;
                    bool edge_fill = table.flag(e.yi, ti + 1) & germ_boundary_fill;
                    if (!lower_empty && !full_lo && full_hi && edge_fill)
                        e.box_artifact = true;
                    front.edges.push_back(std::move(e));
                }
            }
        }
    return front;
}

// ---- rotation / inversion representative checks (1-D) -----------------------

struct RotationParams {
    GridSpec p_x_grid;     // base points where the subdifferential is scanned
    GridSpec germ_x_grid;  // x-grid for the germ computations
    GridSpec y_grid;       // table covector axis (1-D)
    GridSpec t_grid;
    Box germ_box;
    CalcParams calc;
    double pitch = 0.1;  // comparison tolerance base
};

namespace detail {

struct FrontPoint {
    double y, t;
    int yi;
    bool cusp = false;
};

// Genuine (non-artifact) t-jump midpoints of the front, with cusp flags where
// the per-column jump curve bends by more than a cell.
inline std::vector<FrontPoint> rotation_front_points(const GermTable& table,
                                                     const Front& front) {
    std::vector<FrontPoint> pts;
    for (const auto& e : front.edges)
        if (e.axis == 1 && !e.box_artifact) pts.push_back({e.y, e.t, e.yi, false});
    double t_cell = table.t_grid.spacing(0);
    for (auto& p : pts) {
        double left = std::numeric_limits<double>::quiet_NaN();
        double right = left;
        for (const auto& q : pts) {
            if (q.yi == p.yi - 1) left = q.t;
            if (q.yi == p.yi + 1) right = q.t;
        }
        if (!std::isnan(left) && !std::isnan(right) &&
            std::abs(left + right - 2.0 * p.t) > 2.0 * t_cell)
            p.cusp = true;
    }
    return pts;
}

inline bool in_window(double v, double lo, double hi, double margin) {
    return v >= lo + margin && v <= hi - margin;
}

}  // namespace detail

// Compares J(graph of the subdifferential), J(x, xi) = (xi, f(x) - xi.x),
// with the t-jump locus of the germ table, by symmetric Hausdorff distance
// within the table window (points near the window edge are exempt, tolerance
// doubled at cusp cells).
inline InclusionReport check_rotation_1d(const ScalarField& f,
                                         const RotationParams& params) {
    GermTable table = germ_table(f, params.y_grid, params.t_grid, params.germ_box,
                                 params.germ_x_grid);
    Front front = extract_front(table);
    auto fpts = detail::rotation_front_points(table, front);

    std::vector<Vec> jp;  // (y, t) images of the subdifferential graph
    for (int i = 0; i < params.p_x_grid.res[0]; ++i) {
        Vec x = params.p_x_grid.vertex(i);
        CovectorSet s = scan_subdiff(f, x, params.calc);
        for (const auto& xi : s.points)
            jp.push_back(vec2(xi[0], f.eval(x) - xi[0] * x[0]));
    }

    double y_cell = params.y_grid.spacing(0);
    double t_cell = params.t_grid.spacing(0);
    double tol = params.pitch + y_cell + t_cell;
    double my = y_cell + tol, mt = t_cell + tol;
    const Box& ybox = params.y_grid.box;
    const Box& tbox = params.t_grid.box;

    InclusionReport rep;
    rep.tolerance = tol;
    auto note = [&](double gap, const Vec& w) {
        if (gap > 1e-12) {  // float-noise violations do not count
            rep.worst_violation = std::max(rep.worst_violation, gap);
            rep.witnesses.push_back(w);
        }
    };
    for (const auto& p : fpts) {
        if (!detail::in_window(p.y, ybox.lo[0], ybox.hi[0], my) ||
            !detail::in_window(p.t, tbox.lo[0], tbox.hi[0], mt))
            continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : jp) best = std::min(best, std::hypot(q[0] - p.y, q[1] - p.t));
        note(best - (p.cusp ? 2.0 * tol : tol), vec2(p.y, p.t));
    }
    for (const auto& q : jp) {
        if (!detail::in_window(q[0], ybox.lo[0], ybox.hi[0], my) ||
            !detail::in_window(q[1], tbox.lo[0], tbox.hi[0], mt))
            continue;
        double best = std::numeric_limits<double>::infinity();
        bool near_cusp = false;
        for (const auto& p : fpts) {
            double d = std::hypot(q[0] - p.y, q[1] - p.t);
            if (d < best) {
                best = d;
                near_cusp = p.cusp;
            }
        }
        note(best - (near_cusp ? 2.0 * tol : tol), q);
    }
    rep.holds = rep.worst_violation <= 0.0;
    return rep;
}

// Applies the rotation correspondence twice: recovers (x, xi) pairs from the
// front (x = minus the local slope dt/dy; isolated columns span all sampled
// x) and compares with the directly scanned subdifferential graph.
inline InclusionReport check_inversion_1d(const ScalarField& f,
                                          const RotationParams& params) {
    GermTable table = germ_table(f, params.y_grid, params.t_grid, params.germ_box,
                                 params.germ_x_grid);
    Front front = extract_front(table);
    auto fpts = detail::rotation_front_points(table, front);

    double y_cell = params.y_grid.spacing(0);
    std::vector<Vec> recovered;  // (x, xi)
    for (const auto& p : fpts) {
        // least-squares slope over front points in nearby columns
        double sw = 0, swy = 0, swt = 0, swyy = 0, swyt = 0;
        int nnb = 0;
        for (const auto& q : fpts) {
            if (&q == &p) continue;
            if (std::abs(q.yi - p.yi) > 2) continue;
            ++nnb;
        }
        if (nnb == 0) {
            for (int i = 0; i < params.p_x_grid.res[0]; ++i)
                recovered.push_back(vec2(params.p_x_grid.vertex(i)[0], p.y));
            continue;
        }
        for (const auto& q : fpts) {
            if (std::abs(q.yi - p.yi) > 2) continue;
            sw += 1;
            swy += q.y;
            swt += q.t;
            swyy += q.y * q.y;
            swyt += q.y * q.t;
        }
        double den = sw * swyy - swy * swy;
        if (std::abs(den) < 1e-12 * std::max(1.0, swyy)) {
            for (int i = 0; i < params.p_x_grid.res[0]; ++i)
                recovered.push_back(vec2(params.p_x_grid.vertex(i)[0], p.y));
            continue;
        }
        double slope = (sw * swyt - swy * swt) / den;
        recovered.push_back(vec2(-slope, p.y));
    }

    std::vector<Vec> pgraph;  // (x, xi)
    for (int i = 0; i < params.p_x_grid.res[0]; ++i) {
        Vec x = params.p_x_grid.vertex(i);
        CovectorSet s = scan_subdiff(f, x, params.calc);
        for (const auto& xi : s.points) pgraph.push_back(vec2(x[0], xi[0]));
    }

    double tol = 2.0 * (params.pitch + y_cell + params.t_grid.spacing(0));
    double mx = params.p_x_grid.spacing(0) + tol;
    double my = y_cell + tol;
    const Box& xbox = params.p_x_grid.box;
    const Box& ybox = params.y_grid.box;
    auto clip = [&](const Vec& v) {
        return detail::in_window(v[0], xbox.lo[0], xbox.hi[0], mx) &&
               detail::in_window(v[1], ybox.lo[0], ybox.hi[0], my);
    };
    InclusionReport rep;
    rep.tolerance = tol;
    auto side = [&](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        for (const auto& p : from) {
            if (!clip(p)) continue;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to)
                best = std::min(best, std::hypot(q[0] - p[0], q[1] - p[1]));
            if (best - tol > 1e-12) {
                rep.worst_violation = std::max(rep.worst_violation, best - tol);
                rep.witnesses.push_back(p);
            }
        }
    };
    side(recovered, pgraph);
    side(pgraph, recovered);
    rep.holds = rep.worst_violation <= 0.0;
    return rep;
}

}  // namespace nonsmooth
