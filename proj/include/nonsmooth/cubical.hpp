#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsmooth/geometry.hpp"

namespace nonsmooth {

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};
struct TransversalityError : std::runtime_error {
    explicit TransversalityError(const std::string& what) : std::runtime_error(what) {}
};

// Ranks of H_k(X) -> H_k(Y) for nested sublevel complexes X <= Y,
// together with both Betti vectors. Entries indexed by degree 0..dim.
struct InclusionRanks {
    std::vector<int> betti_X;
    std::vector<int> betti_Y;
    std::vector<int> induced_rank;

    bool is_rank_isomorphism() const {
        for (size_t k = 0; k < induced_rank.size(); ++k)
            if (induced_rank[k] != betti_X[k] || induced_rank[k] != betti_Y[k])
                return false;
        return true;
    }
};

namespace detail {

// Inclusive vertex index range of a window box on a grid; empty() when the
// window misses the grid.
struct VertexWindow {
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{-1, -1};
    int dim = 1;

    bool empty() const {
        for (int k = 0; k < dim; ++k)
            if (hi[k] < lo[k]) return true;
        return false;
    }
    int nv(int k) const { return hi[k] - lo[k] + 1; }
};

inline VertexWindow window_to_vertices(const GridSpec& grid, const Box& window) {
    VertexWindow w;
    w.dim = grid.dim();
    for (int k = 0; k < w.dim; ++k) {
        double h = grid.spacing(k);
        double lo = (window.lo[k] - grid.box.lo[k]) / h;
        double hi = (window.hi[k] - grid.box.lo[k]) / h;
        w.lo[k] = std::max(0, static_cast<int>(std::ceil(lo - 1e-9)));
        w.hi[k] = std::min(grid.res[k] - 1, static_cast<int>(std::floor(hi + 1e-9)));
    }
    return w;
}

// Union-find over a flat index set.
struct UnionFind {
    std::vector<std::int32_t> parent;
    void reset(std::int32_t n) {
        parent.assign(n, -1);  // -1: not a member
    }
    void make(std::int32_t i) { parent[i] = i; }
    bool member(std::int32_t i) const { return parent[i] >= 0; }
    std::int32_t find(std::int32_t i) {
        std::int32_t r = i;
        while (parent[r] != r) r = parent[r];
        while (parent[i] != r) {
            std::int32_t nxt = parent[i];
            parent[i] = r;
            i = nxt;
        }
        return r;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    }
};

// Scratch buffers reused across sublevel queries; one instance per thread.
struct Workspace {
    std::vector<double> vals;      // window vertex values
    std::vector<uint8_t> top_x;    // top-cell membership masks
    std::vector<uint8_t> top_y;
    UnionFind uf_x, uf_y;
    std::vector<std::int32_t> seen_roots;
    std::vector<uint8_t> cell_mark;  // interleaved cell-grid marks
    std::vector<std::int32_t> cell_pos;
    UnionFind uf_holes;
    std::vector<uint8_t> root_keep;
};

inline Workspace& tls_workspace() {
    thread_local Workspace ws;
    return ws;
}

// Counts of (vertices, edges, faces) of the union of the closed top cells
// selected by `tops`, on the interleaved cell grid of the window.
struct CellCounts {
    std::int64_t v = 0, e = 0, f = 0;
    std::int64_t chi(int dim) const { return dim == 1 ? v - e : v - e + f; }
};

}  // namespace detail

// An explicit cubical complex: the closure of a set of top cells of a grid
// window, stored as a presence bitmap on interleaved cell coordinates
// (even = vertex coordinate, odd = interval), c in [0, 2*(nv-1)].
struct CubicalComplex {
    GridSpec grid;
    detail::VertexWindow window;
    std::array<int, 2> nc{0, 0};  // interleaved extents per axis
    std::vector<uint8_t> present;
    std::array<std::int64_t, 3> cells_by_dim{0, 0, 0};

    int dim() const { return grid.dim(); }
    bool empty() const {
        return cells_by_dim[0] + cells_by_dim[1] + cells_by_dim[2] == 0;
    }
    std::int64_t cell_index(int c0, int c1 = 0) const {
        return static_cast<std::int64_t>(c1) * nc[0] + c0;
    }
    bool has_cell(int c0, int c1 = 0) const {
        if (c0 < 0 || c0 >= nc[0]) return false;
        if (dim() == 2 && (c1 < 0 || c1 >= nc[1])) return false;
        return present[static_cast<size_t>(cell_index(c0, c1))] != 0;
    }
    std::int64_t total_cells() const {
        return cells_by_dim[0] + cells_by_dim[1] + cells_by_dim[2];
    }
    std::int64_t euler_characteristic() const {
        return cells_by_dim[0] - cells_by_dim[1] + cells_by_dim[2];
    }
};

inline bool is_subcomplex(const CubicalComplex& a, const CubicalComplex& b) {
    if (a.empty()) return true;
    if (a.window.lo != b.window.lo || a.nc != b.nc) return false;
    for (size_t i = 0; i < a.present.size(); ++i)
        if (a.present[i] && !b.present[i]) return false;
    return true;
}

// A top cell and its closure are included iff all its vertices lie in the
// window and all its vertex values are below the threshold (strict by
// default; the closed variant serves the compact-support computations).
template <class ValueFn>
CubicalComplex build_sublevel_complex_fn(ValueFn&& value_at,  // (i0, i1) -> double
                                         const GridSpec& grid, double threshold,
                                         const Box& window, bool strict = true) {
    CubicalComplex cx;
    cx.grid = grid;
    cx.window = detail::window_to_vertices(grid, window);
    if (cx.window.empty()) return cx;
    const int d = grid.dim();
    const int nv0 = cx.window.nv(0);
    const int nv1 = d == 2 ? cx.window.nv(1) : 1;
    cx.nc[0] = 2 * nv0 - 1;
    cx.nc[1] = d == 2 ? 2 * nv1 - 1 : 1;
    cx.present.assign(static_cast<size_t>(cx.nc[0]) * cx.nc[1], 0);

    auto below = [&](int li0, int li1) {
        double v = value_at(cx.window.lo[0] + li0,
                            d == 2 ? cx.window.lo[1] + li1 : 0);
        return strict ? v < threshold : v <= threshold;
    };
    if (d == 1) {
        for (int i = 0; i + 1 < nv0; ++i) {
            if (below(i, 0) && below(i + 1, 0)) {
                cx.present[static_cast<size_t>(2 * i)] = 1;
                cx.present[static_cast<size_t>(2 * i + 1)] = 1;
                cx.present[static_cast<size_t>(2 * i + 2)] = 1;
            }
        }
    } else {
        for (int j = 0; j + 1 < nv1; ++j)
            for (int i = 0; i + 1 < nv0; ++i) {
                if (below(i, j) && below(i + 1, j) && below(i, j + 1) &&
                    below(i + 1, j + 1)) {
                    for (int cj = 2 * j; cj <= 2 * j + 2; ++cj)
                        for (int ci = 2 * i; ci <= 2 * i + 2; ++ci)
                            cx.present[static_cast<size_t>(cx.cell_index(ci, cj))] = 1;
                }
            }
    }
    for (int cj = 0; cj < cx.nc[1]; ++cj)
        for (int ci = 0; ci < cx.nc[0]; ++ci)
            if (cx.present[static_cast<size_t>(cx.cell_index(ci, cj))])
                ++cx.cells_by_dim[(ci & 1) + (cj & 1)];
    return cx;
}

inline CubicalComplex build_sublevel_complex(const std::vector<double>& values,
                                             const GridSpec& grid, double threshold,
                                             const Box& window, bool strict = true) {
    grid.validate();
    if (static_cast<std::int64_t>(values.size()) != grid.vertex_count())
        throw PreconditionError("build_sublevel_complex: value array size mismatch");
    return build_sublevel_complex_fn(
        [&](int i0, int i1) { return values[static_cast<size_t>(grid.vertex_index(i0, i1))]; },
        grid, threshold, window, strict);
}

// Z/2 Betti numbers of a closure-of-top-cells complex. In the plane such a
// complex never carries a 2-cycle, so degree 0 comes from vertex-edge
// connectivity and degree 1 from the Euler characteristic.
inline std::vector<int> homology_ranks(const CubicalComplex& cx) {
    const int d = cx.dim();
    std::vector<int> betti(static_cast<size_t>(d) + 1, 0);
    if (cx.empty()) return betti;
    detail::UnionFind uf;
    uf.reset(static_cast<std::int32_t>(cx.present.size()));
    std::int64_t vertices = 0;
    for (int cj = 0; cj < cx.nc[1]; cj += 2)
        for (int ci = 0; ci < cx.nc[0]; ci += 2)
            if (cx.has_cell(ci, cj)) {
                uf.make(static_cast<std::int32_t>(cx.cell_index(ci, cj)));
                ++vertices;
            }
    auto unite_edge = [&](int ci, int cj) {
        if (!cx.has_cell(ci, cj)) return;
        if (ci & 1)
            uf.unite(static_cast<std::int32_t>(cx.cell_index(ci - 1, cj)),
                     static_cast<std::int32_t>(cx.cell_index(ci + 1, cj)));
        else
            uf.unite(static_cast<std::int32_t>(cx.cell_index(ci, cj - 1)),
                     static_cast<std::int32_t>(cx.cell_index(ci, cj + 1)));
    };
    for (int cj = 0; cj < cx.nc[1]; ++cj)
        for (int ci = 0; ci < cx.nc[0]; ++ci)
            if (((ci & 1) + (cj & 1)) == 1) unite_edge(ci, cj);
    std::int64_t comps = 0;
    for (int cj = 0; cj < cx.nc[1]; cj += 2)
        for (int ci = 0; ci < cx.nc[0]; ci += 2) {
            auto id = static_cast<std::int32_t>(cx.cell_index(ci, cj));
            if (cx.has_cell(ci, cj) && uf.find(id) == id) ++comps;
        }
    betti[0] = static_cast<int>(comps);
    if (d == 2) betti[1] = static_cast<int>(comps - cx.euler_characteristic());
    return betti;
}

namespace detail {

// ---- fast two-threshold analysis over top cells -----------------------------
//
// Works directly on top-cell masks without materializing CubicalComplex.
// Degree-0 data comes from union-find on top cells (vertex-sharing
// adjacency), degree-1 Betti numbers from the Euler characteristic, and the
// degree-1 induced rank from a two-level persistence reduction, run only
// when both sides carry cycles.

struct PairAnalysis {
    InclusionRanks ranks;
    bool iso = false;
};

// Count distinct cells in the union of closed top cells flagged in `tops`.
inline CellCounts count_cells(const std::vector<uint8_t>& tops, int nt0, int nt1,
                              int dim, std::vector<uint8_t>& mark) {
    CellCounts c;
    const int nc0 = 2 * nt0 + 1;
    const int nc1 = dim == 2 ? 2 * nt1 + 1 : 1;
    mark.assign(static_cast<size_t>(nc0) * nc1, 0);
    auto set = [&](int ci, int cj) {
        auto& m = mark[static_cast<size_t>(cj) * nc0 + ci];
        if (!m) {
            m = 1;
            int cd = (ci & 1) + (cj & 1);
            if (cd == 0)
                ++c.v;
            else if (cd == 1)
                ++c.e;
            else
                ++c.f;
        }
    };
    if (dim == 1) {
        for (int i = 0; i < nt0; ++i)
            if (tops[static_cast<size_t>(i)])
                for (int ci = 2 * i; ci <= 2 * i + 2; ++ci) set(ci, 0);
    } else {
        for (int j = 0; j < nt1; ++j)
            for (int i = 0; i < nt0; ++i)
                if (tops[static_cast<size_t>(j) * nt0 + i])
                    for (int cj = 2 * j; cj <= 2 * j + 2; ++cj)
                        for (int ci = 2 * i; ci <= 2 * i + 2; ++ci) set(ci, cj);
    }
    return c;
}

// Union-find over top cells; two top cells are connected when their closures
// share a vertex (8-connectivity in 2-D, endpoint sharing in 1-D).
inline int top_components(const std::vector<uint8_t>& tops, int nt0, int nt1,
                          int dim, UnionFind& uf) {
    const std::int32_t n = static_cast<std::int32_t>(nt0) * std::max(nt1, 1);
    uf.reset(n);
    int count = 0;
    if (dim == 1) {
        for (int i = 0; i < nt0; ++i)
            if (tops[static_cast<size_t>(i)]) {
                uf.make(i);
                ++count;
                if (i > 0 && tops[static_cast<size_t>(i - 1)]) uf.unite(i, i - 1);
            }
    } else {
        for (int j = 0; j < nt1; ++j)
            for (int i = 0; i < nt0; ++i) {
                std::int32_t id = j * nt0 + i;
                if (!tops[static_cast<size_t>(id)]) continue;
                uf.make(id);
                ++count;
                if (i > 0 && tops[static_cast<size_t>(id - 1)]) uf.unite(id, id - 1);
                if (j > 0) {
                    std::int32_t below = id - nt0;
                    if (tops[static_cast<size_t>(below)]) uf.unite(id, below);
                    if (i > 0 && tops[static_cast<size_t>(below - 1)])
                        uf.unite(id, below - 1);
                    if (i + 1 < nt0 && tops[static_cast<size_t>(below + 1)])
                        uf.unite(id, below + 1);
                }
            }
    }
    int comps = 0;
    for (std::int32_t i = 0; i < n; ++i)
        if (uf.member(i) && uf.find(i) == i) ++comps;
    (void)count;
    return comps;
}

// Two-level persistence reduction; returns, per degree k, the number of
// degree-k classes of X killed by cells of Y \ X.
inline std::array<int, 3> killed_by_level1(const std::vector<uint8_t>& top_x,
                                           const std::vector<uint8_t>& top_y,
                                           int nt0, int nt1, int dim) {
    const int nc0 = 2 * nt0 + 1;
    const int nc1 = dim == 2 ? 2 * nt1 + 1 : 1;
    const std::int64_t ncells = static_cast<std::int64_t>(nc0) * nc1;
    std::vector<uint8_t> level(static_cast<size_t>(ncells), 255);  // 255: absent
    auto mark_top = [&](int i, int j, uint8_t lev) {
        if (dim == 1) {
            for (int ci = 2 * i; ci <= 2 * i + 2; ++ci) {
                auto& l = level[static_cast<size_t>(ci)];
                l = std::min(l, lev);
            }
        } else {
            for (int cj = 2 * j; cj <= 2 * j + 2; ++cj)
                for (int ci = 2 * i; ci <= 2 * i + 2; ++ci) {
                    auto& l = level[static_cast<size_t>(cj) * nc0 + ci];
                    l = std::min(l, lev);
                }
        }
    };
    for (int j = 0; j < std::max(nt1, 1); ++j)
        for (int i = 0; i < nt0; ++i) {
            size_t id = static_cast<size_t>(j) * nt0 + i;
            if (top_y[id]) mark_top(i, j, top_x[id] ? 0 : 1);
        }

    // filtration order: (level, dim, index)
    std::vector<std::int32_t> order;
    order.reserve(1024);
    for (std::int64_t c = 0; c < ncells; ++c)
        if (level[static_cast<size_t>(c)] != 255) order.push_back(static_cast<std::int32_t>(c));
    auto cell_dim = [&](std::int32_t c) {
        int ci = static_cast<int>(c % nc0), cj = static_cast<int>(c / nc0);
        return (ci & 1) + (cj & 1);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        int la = level[static_cast<size_t>(a)], lb = level[static_cast<size_t>(b)];
        if (la != lb) return la < lb;
        int da = cell_dim(a), db = cell_dim(b);
        if (da != db) return da < db;
        return a < b;
    });
    std::vector<std::int32_t> pos(static_cast<size_t>(ncells), -1);
    for (size_t p = 0; p < order.size(); ++p) pos[static_cast<size_t>(order[p])] = static_cast<std::int32_t>(p);

    std::vector<std::vector<std::int32_t>> cols(order.size());
    std::vector<std::int32_t> owner(order.size(), -1);
    std::array<int, 3> killed{0, 0, 0};
    std::vector<std::int32_t> col, tmp;
    for (size_t p = 0; p < order.size(); ++p) {
        std::int32_t c = order[p];
        int ci = static_cast<int>(c % nc0), cj = static_cast<int>(c / nc0);
        col.clear();
        if (ci & 1) {
            col.push_back(pos[static_cast<size_t>(c - 1)]);
            col.push_back(pos[static_cast<size_t>(c + 1)]);
        }
        if (cj & 1) {
            col.push_back(pos[static_cast<size_t>(c - nc0)]);
            col.push_back(pos[static_cast<size_t>(c + nc0)]);
        }
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            std::int32_t piv = col.back();
            std::int32_t own = owner[static_cast<size_t>(piv)];
            if (own < 0) break;
            // symmetric difference with the owning column
            const auto& other = cols[static_cast<size_t>(own)];
            tmp.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                          other.end(), std::back_inserter(tmp));
            col.swap(tmp);
        }
        if (!col.empty()) {
            std::int32_t piv = col.back();
            owner[static_cast<size_t>(piv)] = static_cast<std::int32_t>(p);
            cols[p] = col;
            std::int32_t birth_cell = order[static_cast<size_t>(piv)];
            if (level[static_cast<size_t>(birth_cell)] == 0 &&
                level[static_cast<size_t>(c)] == 1) {
                int bd = cell_dim(birth_cell);
                if (bd >= 0 && bd < 3) ++killed[static_cast<size_t>(bd)];
            }
        }
    }
    return killed;
}

// Fill complement holes of a 2-D top-cell mask that neither touch the window
// boundary nor meet the core index range. Such holes vanish in the
// shrinking-window limit of the singularity test, so at a fixed finite scale
// they are discretization artifacts (typically a sub-cell ridge of the field
// sporadically blocking a single cell far from the probe point). Complement
// cells use 4-connectivity, dual to the 8-connectivity of the set itself.
inline void fill_far_holes(std::vector<uint8_t>& tops, int nt0, int nt1, int i_lo,
                           int i_hi, int j_lo, int j_hi, Workspace& ws) {
    const std::int32_t n = static_cast<std::int32_t>(nt0) * nt1;
    UnionFind& uf = ws.uf_holes;
    uf.reset(n);
    for (int j = 0; j < nt1; ++j)
        for (int i = 0; i < nt0; ++i) {
            std::int32_t id = j * nt0 + i;
            if (tops[static_cast<size_t>(id)]) continue;
            uf.make(id);
            if (i > 0 && !tops[static_cast<size_t>(id - 1)]) uf.unite(id, id - 1);
            if (j > 0 && !tops[static_cast<size_t>(id - nt0)]) uf.unite(id, id - nt0);
        }
    ws.root_keep.assign(static_cast<size_t>(n), 0);
    auto mark = [&](std::int32_t id) {
        if (!tops[static_cast<size_t>(id)])
            ws.root_keep[static_cast<size_t>(uf.find(id))] = 1;
    };
    for (int i = 0; i < nt0; ++i) {
        mark(i);
        mark((nt1 - 1) * nt0 + i);
    }
    for (int j = 0; j < nt1; ++j) {
        mark(j * nt0);
        mark(j * nt0 + nt0 - 1);
    }
    for (int j = j_lo; j <= j_hi; ++j)
        for (int i = i_lo; i <= i_hi; ++i) mark(j * nt0 + i);
    for (std::int32_t id = 0; id < n; ++id)
        if (!tops[static_cast<size_t>(id)] && !ws.root_keep[static_cast<size_t>(uf.find(id))])
            tops[static_cast<size_t>(id)] = 1;
}

// When a core ball is given, connected components of either sublevel set
// whose closed cells never meet the ball are discarded before ranks are
// computed. In the shrinking-window limit of the singularity test such
// components leave every small enough window, so at a fixed finite scale
// they are window artifacts, not part of the germ at the probe point.
template <class ValueFn>
PairAnalysis analyze_sublevel_pair(ValueFn&& value_at, const GridSpec& grid,
                                   const Box& window, double a_low, double a_high,
                                   Workspace& ws, const Vec* core_center = nullptr,
                                   double core_radius = 0.0) {
    if (a_low > a_high)
        throw PreconditionError("inclusion_induced_ranks: thresholds not nested");
    const int d = grid.dim();
    PairAnalysis out;
    out.ranks.betti_X.assign(static_cast<size_t>(d) + 1, 0);
    out.ranks.betti_Y.assign(static_cast<size_t>(d) + 1, 0);
    out.ranks.induced_rank.assign(static_cast<size_t>(d) + 1, 0);

    VertexWindow w = window_to_vertices(grid, window);
    if (w.empty()) {
        out.iso = true;
        return out;
    }
    const int nv0 = w.nv(0);
    const int nv1 = d == 2 ? w.nv(1) : 1;
    const int nt0 = nv0 - 1;
    const int nt1 = d == 2 ? nv1 - 1 : 0;
    if (nt0 <= 0 || (d == 2 && nt1 <= 0)) {
        out.iso = true;
        return out;
    }

    ws.vals.resize(static_cast<size_t>(nv0) * nv1);
    for (int j = 0; j < nv1; ++j)
        for (int i = 0; i < nv0; ++i)
            ws.vals[static_cast<size_t>(j) * nv0 + i] =
                value_at(w.lo[0] + i, d == 2 ? w.lo[1] + j : 0);

    const std::int64_t ntop = static_cast<std::int64_t>(nt0) * std::max(nt1, 1);
    ws.top_x.assign(static_cast<size_t>(ntop), 0);
    ws.top_y.assign(static_cast<size_t>(ntop), 0);
    bool any_y = false;
    if (d == 1) {
        for (int i = 0; i < nt0; ++i) {
            double m = std::max(ws.vals[static_cast<size_t>(i)],
                                ws.vals[static_cast<size_t>(i) + 1]);
            if (m < a_high) {
                ws.top_y[static_cast<size_t>(i)] = 1;
                any_y = true;
                if (m < a_low) ws.top_x[static_cast<size_t>(i)] = 1;
            }
        }
    } else {
        for (int j = 0; j < nt1; ++j)
            for (int i = 0; i < nt0; ++i) {
                const double* row = &ws.vals[static_cast<size_t>(j) * nv0];
                double m = std::max(std::max(row[i], row[i + 1]),
                                    std::max(row[i + nv0], row[i + nv0 + 1]));
                if (m < a_high) {
                    ws.top_y[static_cast<size_t>(j) * nt0 + i] = 1;
                    any_y = true;
                    if (m < a_low) ws.top_x[static_cast<size_t>(j) * nt0 + i] = 1;
                }
            }
    }
    if (!any_y) {
        out.iso = true;  // both empty
        return out;
    }

    if (core_center) {
        // top-cell index ranges of the core ball's bounding box
        auto axis_range = [&](int k, int nt, int& lo, int& hi) {
            double h = grid.spacing(k);
            double base = grid.box.lo[k] + w.lo[k] * h;
            double clo = (*core_center)[k] - core_radius;
            double chi = (*core_center)[k] + core_radius;
            lo = std::max(0, static_cast<int>(std::ceil((clo - base) / h - 1.0 - 1e-9)));
            hi = std::min(nt - 1,
                          static_cast<int>(std::floor((chi - base) / h + 1e-9)));
        };
        int i_lo, i_hi, j_lo = 0, j_hi = 0;
        axis_range(0, nt0, i_lo, i_hi);
        if (d == 2) axis_range(1, nt1, j_lo, j_hi);
        // Euclidean distance from the closed cell (i,j) to the core center
        auto in_core = [&](int i, int j) {
            double s = 0.0;
            int idx[2] = {i, j};
            for (int k = 0; k < d; ++k) {
                double h = grid.spacing(k);
                double lo = grid.box.lo[k] + (w.lo[k] + idx[k]) * h;
                double c = std::clamp((*core_center)[k], lo, lo + h);
                double dk = c - (*core_center)[k];
                s += dk * dk;
            }
            return s <= core_radius * core_radius * (1.0 + 1e-12);
        };
        if (d == 2) {
            // fill Y first so the filled X stays a subset of the filled Y
            fill_far_holes(ws.top_y, nt0, nt1, i_lo, i_hi, j_lo, j_hi, ws);
            fill_far_holes(ws.top_x, nt0, nt1, i_lo, i_hi, j_lo, j_hi, ws);
        }
        top_components(ws.top_x, nt0, nt1, d, ws.uf_x);
        top_components(ws.top_y, nt0, nt1, d, ws.uf_y);
        std::vector<std::int32_t> keep_x, keep_y;
        auto note = [](std::vector<std::int32_t>& v, std::int32_t r) {
            for (std::int32_t s : v)
                if (s == r) return;
            v.push_back(r);
        };
        for (int j = j_lo; j <= j_hi; ++j)
            for (int i = i_lo; i <= i_hi; ++i) {
                if (!in_core(i, j)) continue;
                std::int32_t t = static_cast<std::int32_t>(j) * nt0 + i;
                if (ws.top_x[static_cast<size_t>(t)]) note(keep_x, ws.uf_x.find(t));
                if (ws.top_y[static_cast<size_t>(t)]) note(keep_y, ws.uf_y.find(t));
            }
        auto keeps = [](const std::vector<std::int32_t>& v, std::int32_t r) {
            for (std::int32_t s : v)
                if (s == r) return true;
            return false;
        };
        any_y = false;
        for (std::int64_t t = 0; t < ntop; ++t) {
            std::int32_t ti = static_cast<std::int32_t>(t);
            if (ws.top_x[static_cast<size_t>(t)] && !keeps(keep_x, ws.uf_x.find(ti)))
                ws.top_x[static_cast<size_t>(t)] = 0;
            if (ws.top_y[static_cast<size_t>(t)]) {
                if (!keeps(keep_y, ws.uf_y.find(ti)))
                    ws.top_y[static_cast<size_t>(t)] = 0;
                else
                    any_y = true;
            }
        }
        if (!any_y) {
            out.iso = true;
            return out;
        }
    }

    int b0x = top_components(ws.top_x, nt0, nt1, d, ws.uf_x);
    int b0y = top_components(ws.top_y, nt0, nt1, d, ws.uf_y);
    out.ranks.betti_X[0] = b0x;
    out.ranks.betti_Y[0] = b0y;

    int b1x = 0, b1y = 0;
    if (d == 2) {
        CellCounts cx = count_cells(ws.top_x, nt0, nt1, d, ws.cell_mark);
        CellCounts cy = count_cells(ws.top_y, nt0, nt1, d, ws.cell_mark);
        b1x = static_cast<int>(b0x - cx.chi(d));
        b1y = static_cast<int>(b0y - cy.chi(d));
        out.ranks.betti_X[1] = b1x;
        out.ranks.betti_Y[1] = b1y;
    }

    // induced rank, degree 0: number of Y components hit by X components
    int rank0 = 0;
    ws.seen_roots.clear();
    for (std::int64_t t = 0; t < ntop; ++t) {
        if (!ws.top_x[static_cast<size_t>(t)]) continue;
        std::int32_t r = ws.uf_y.find(static_cast<std::int32_t>(t));
        bool fresh = true;
        for (std::int32_t s : ws.seen_roots)
            if (s == r) {
                fresh = false;
                break;
            }
        if (fresh) {
            ws.seen_roots.push_back(r);
            ++rank0;
        }
    }
    out.ranks.induced_rank[0] = rank0;

    if (d == 2) {
        int rank1;
        if (b1x == 0 || b1y == 0) {
            rank1 = 0;
        } else {
            auto killed = killed_by_level1(ws.top_x, ws.top_y, nt0, nt1, d);
            rank1 = b1x - killed[1];
        }
        out.ranks.induced_rank[1] = rank1;
    }

    out.iso = out.ranks.is_rank_isomorphism();
    return out;
}

}  // namespace detail

// Per-degree rank of the map H_k({values < a_low} & window) ->
// H_k({values < a_high} & window) induced by inclusion.
inline InclusionRanks inclusion_induced_ranks(const std::vector<double>& values,
                                              const GridSpec& grid, const Box& window,
                                              double a_low, double a_high) {
    grid.validate();
    if (static_cast<std::int64_t>(values.size()) != grid.vertex_count())
        throw PreconditionError("inclusion_induced_ranks: value array size mismatch");
    auto& ws = detail::tls_workspace();
    return detail::analyze_sublevel_pair(
               [&](int i0, int i1) {
                   return values[static_cast<size_t>(grid.vertex_index(i0, i1))];
               },
               grid, window, a_low, a_high, ws)
        .ranks;
}

// ---- box-truncated compact-support cohomology -------------------------------
//
// Ranks of H_*(A & B, A & dB) over Z/2, with A = {values <= threshold} and B
// the box; over a field these agree with the compact-support cohomology of A
// truncated to B, provided all topological changes of A happen inside B.
inline std::vector<int> compact_support_betti(const std::vector<double>& values,
                                              const GridSpec& grid, double threshold,
                                              const Box& box) {
    grid.validate();
    if (static_cast<std::int64_t>(values.size()) != grid.vertex_count())
        throw PreconditionError("compact_support_betti: value array size mismatch");
    const int d = grid.dim();
    CubicalComplex cx = build_sublevel_complex(values, grid, threshold, box,
                                               /*strict=*/false);
    std::vector<int> betti(static_cast<size_t>(d) + 1, 0);
    if (cx.empty()) return betti;

    const int nc0 = cx.nc[0];
    const int nc1 = cx.nc[1];
    auto on_boundary = [&](int ci, int cj) {
        if (ci == 0 || ci == nc0 - 1) return true;
        if (d == 2 && (cj == 0 || cj == nc1 - 1)) return true;
        return false;
    };

    // transversality: reject a boundary-layer top cell whose vertices all sit
    // exactly at the threshold
    {
        const int nv0 = cx.window.nv(0);
        const int nv1 = d == 2 ? cx.window.nv(1) : 1;
        auto val = [&](int li, int lj) {
            return values[static_cast<size_t>(grid.vertex_index(
                cx.window.lo[0] + li, d == 2 ? cx.window.lo[1] + lj : 0))];
        };
        auto flat = [&](int li, int lj, int ei, int ej) {
            for (int j = lj; j <= lj + ej; ++j)
                for (int i = li; i <= li + ei; ++i)
                    if (val(i, j) != threshold) return false;
            return true;
        };
        if (d == 1) {
            for (int i = 0; i + 1 < nv0; ++i)
                if ((i == 0 || i + 2 == nv0) && flat(i, 0, 1, 0))
                    throw TransversalityError(
                        "compact_support_betti: degenerate boundary layer");
        } else {
            for (int j = 0; j + 1 < nv1; ++j)
                for (int i = 0; i + 1 < nv0; ++i)
                    if ((i == 0 || i + 2 == nv0 || j == 0 || j + 2 == nv1) &&
                        flat(i, j, 1, 1))
                        throw TransversalityError(
                            "compact_support_betti: degenerate boundary layer");
        }
    }

    // relative chain complex: cells of A not lying in the boundary layer
    std::vector<std::int32_t> rel_cells;
    std::vector<std::int32_t> pos(static_cast<size_t>(nc0) * nc1, -1);
    for (int cj = 0; cj < nc1; ++cj)
        for (int ci = 0; ci < nc0; ++ci)
            if (cx.has_cell(ci, cj) && !on_boundary(ci, cj)) {
                pos[static_cast<size_t>(cx.cell_index(ci, cj))] =
                    static_cast<std::int32_t>(rel_cells.size());
                rel_cells.push_back(static_cast<std::int32_t>(cx.cell_index(ci, cj)));
            }
    const auto n = static_cast<std::int32_t>(rel_cells.size());
    std::array<std::int64_t, 3> nk{0, 0, 0};
    auto cell_dim = [&](std::int32_t c) {
        int ci = static_cast<int>(c % nc0), cj = static_cast<int>(c / nc0);
        return (ci & 1) + (cj & 1);
    };
    for (std::int32_t i = 0; i < n; ++i) ++nk[static_cast<size_t>(cell_dim(rel_cells[static_cast<size_t>(i)]))];

    // rank of the relative boundary in each degree via column reduction
    std::array<int, 3> rank{0, 0, 0};
    std::vector<std::vector<std::int32_t>> cols(static_cast<size_t>(n));
    std::vector<std::int32_t> owner(static_cast<size_t>(n), -1);
    std::vector<std::int32_t> col, tmp;
    for (std::int32_t p = 0; p < n; ++p) {
        std::int32_t c = rel_cells[static_cast<size_t>(p)];
        int ci = static_cast<int>(c % nc0), cj = static_cast<int>(c / nc0);
        int cd = cell_dim(c);
        if (cd == 0) continue;
        col.clear();
        auto push_face = [&](std::int32_t fc) {
            std::int32_t fp = pos[static_cast<size_t>(fc)];
            if (fp >= 0) col.push_back(fp);  // faces in the boundary layer are quotiented away
        };
        if (ci & 1) {
            push_face(c - 1);
            push_face(c + 1);
        }
        if (cj & 1) {
            push_face(c - nc0);
            push_face(c + nc0);
        }
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            std::int32_t piv = col.back();
            std::int32_t own = owner[static_cast<size_t>(piv)];
            if (own < 0) break;
            const auto& other = cols[static_cast<size_t>(own)];
            tmp.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                          other.end(), std::back_inserter(tmp));
            col.swap(tmp);
        }
        if (!col.empty()) {
            owner[static_cast<size_t>(col.back())] = p;
            cols[static_cast<size_t>(p)] = col;
            ++rank[static_cast<size_t>(cd)];
        }
    }
    for (int k = 0; k <= d; ++k) {
        std::int64_t b = nk[static_cast<size_t>(k)] - rank[static_cast<size_t>(k)];
        if (k + 1 <= 2) b -= rank[static_cast<size_t>(k) + 1];
        betti[static_cast<size_t>(k)] = static_cast<int>(b);
    }
    return betti;
}

}  // namespace nonsmooth
