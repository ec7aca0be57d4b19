#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsmooth/covector.hpp"
#include "nonsmooth/cubical.hpp"
#include "nonsmooth/field.hpp"
#include "nonsmooth/geometry.hpp"
#include "nonsmooth/parallel.hpp"
#include "nonsmooth/registry.hpp"
#include "nonsmooth/rng.hpp"

namespace nonsmooth {

struct UnstableVerdictError : std::runtime_error {
    explicit UnstableVerdictError(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateSamplingError : std::runtime_error {
    explicit DegenerateSamplingError(const std::string& what)
        : std::runtime_error(what) {}
};

// Scale schedule and probe budget for the homological tests. scale_factors
// are fractions of the domain diameter, decreasing; epsilon at scale r is
// max(r^2, eps_cells * grid spacing * slope bound), so the fattened level
// always clears discretization noise by a few cells.
struct ScanParams {
    double delta = 0.05;
    int probes = 64;
    std::vector<double> scale_factors{0.2, 0.1, 0.05};
    double eps_cells = 4.0;
    double locus_tube = 1e-6;
    std::uint64_t seed = 0;
};

struct ScaleEvidence {
    double r = 0.0;
    double eps = 0.0;
    InclusionRanks ranks;
    bool singular = false;
};

struct SingularityVerdict {
    bool singular = false;
    std::vector<ScaleEvidence> evidence;
    int stabilized_at = -1;  // index into scale_factors of the finest agreeing scale
    bool has_witness = false;
    Vec witness_x{0, 0};   // probe base point
    Vec witness_xi{0, 0};  // probe tilt perturbation
};

// Precomputed vertex values of a field on its full domain grid; shared by
// every tilted sublevel query (tilts are affine and applied on the fly).
struct BaseGrid {
    GridSpec grid;
    std::vector<double> values;
};

inline BaseGrid make_base_grid(const ScalarField& field, int res) {
    BaseGrid b;
    b.grid.box = field.domain();
    b.grid.res = {res, field.dim() == 2 ? res : 1};
    b.values = eval_grid(field, b.grid);
    return b;
}

namespace detail {

// Singularity of g = (base field) - <tilt, .> at point x0, tested at the two
// finest schedule scales; the scales must agree or the verdict is unstable.
inline SingularityVerdict singular_scales(const BaseGrid& base, const Vec& tilt,
                                          const Vec& x0, double a, double slope,
                                          const ScanParams& params) {
    const GridSpec& grid = base.grid;
    const int d = grid.dim();
    auto value_at = [&](int i0, int i1) {
        Vec p = grid.vertex(i0, i1);
        return base.values[static_cast<size_t>(grid.vertex_index(i0, i1))] -
               dot(tilt, p, d);
    };
    double diam = grid.box.diameter();
    double eps_floor = params.eps_cells * grid.max_spacing() * slope;
    auto& ws = tls_workspace();

    // If the probe point analytically dominates every grid vertex near it (an
    // interior maximum of the tilted field falling between vertices), the
    // strict sublevel at a would swallow the peak vertex and erase the germ.
    // Clamp the lower threshold to the top vertex value inside the probe core
    // so the peak vertex stays excluded; when any nearby vertex reaches a the
    // clamp is inactive.
    double rho_core = 3.0 * grid.max_spacing();
    double a_low = a;
    {
        double vmax = -std::numeric_limits<double>::infinity();
        int lo0 = std::max(0, static_cast<int>(std::floor(
                                  (x0[0] - rho_core - grid.box.lo[0]) / grid.spacing(0))));
        int hi0 = std::min(grid.res[0] - 1,
                           static_cast<int>(std::ceil(
                               (x0[0] + rho_core - grid.box.lo[0]) / grid.spacing(0))));
        int lo1 = 0, hi1 = 0;
        if (d == 2) {
            lo1 = std::max(0, static_cast<int>(std::floor(
                                  (x0[1] - rho_core - grid.box.lo[1]) / grid.spacing(1))));
            hi1 = std::min(grid.res[1] - 1,
                           static_cast<int>(std::ceil(
                               (x0[1] + rho_core - grid.box.lo[1]) / grid.spacing(1))));
        }
        for (int i1 = lo1; i1 <= hi1; ++i1)
            for (int i0 = lo0; i0 <= hi0; ++i0)
                if (dist(grid.vertex(i0, i1), x0, d) <= rho_core)
                    vmax = std::max(vmax, value_at(i0, i1));
        if (vmax < a) a_low = vmax;
    }

    SingularityVerdict v;
    size_t nf = params.scale_factors.size();
    if (nf < 2)
        throw PreconditionError("ScanParams: schedule needs at least two scales");
    // finest first: if the two finest scales agree the verdict is stable and
    // coarser levels never change it (tie-break rule)
    for (size_t j = 0; j < 2; ++j) {
        double factor = params.scale_factors[nf - 1 - j];
        double r = factor * diam;
        double eps = std::max(r * r, eps_floor);
        Box window = ball_box(x0, r, d);
        // only components adhering to the probe point belong to the germ; the
        // core prunes sublevel components that drift in at the window edge.
        // Its radius is grid-adapted and scale-independent, so both schedule
        // scales keep exactly the same near-probe structure.
        double rho = rho_core;
        auto pa = analyze_sublevel_pair(value_at, grid, window, a_low, a + eps, ws, &x0, rho);
        v.evidence.push_back({r, eps, pa.ranks, !pa.iso});
    }
    if (v.evidence[0].singular != v.evidence[1].singular)
        throw UnstableVerdictError("singularity verdict did not stabilize across the two finest scales");
    v.singular = v.evidence[0].singular;
    v.stabilized_at = static_cast<int>(nf) - 1;
    return v;
}

}  // namespace detail

// Is x a singular point of the field (a = field(x))? Evidence carries the
// inclusion ranks at the two finest schedule scales.
inline SingularityVerdict is_singular_point(const ScalarField& field, const Vec& x,
                                            const ScanParams& params,
                                            const BaseGrid& base) {
    if (!field.domain().contains(x, 1e-9))
        throw DomainError("is_singular_point: x outside domain");
    double a = field.eval_unchecked(x);
    double slope = field.lipschitz_const().value_or(1.0);
    return detail::singular_scales(base, vec2(0, 0), x, a, slope, params);
}

inline SingularityVerdict is_singular_point(const ScalarField& field, const Vec& x,
                                            const ScanParams& params = {},
                                            int grid_res = 257) {
    return is_singular_point(field, x, params, make_base_grid(field, grid_res));
}

// Is x a critical point of y -> field(y) - <xi, y>? Probes (x', xi') with
// |x'-x| <= delta, |xi'| <= delta: the center pair, gradient-aligned pairs
// (xi + xi' = grad(x'), which detect every C^1 critical value exactly), and
// free low-discrepancy pairs. True on the first stable singular probe.
inline SingularityVerdict is_critical_point(const ScalarField& field, const Vec& x,
                                            const Covector& xi, const ScanParams& params,
                                            const BaseGrid& base) {
    const int d = field.dim();
    const double delta = params.delta;
    double K = field.lipschitz_const().value_or(1.0);

    std::vector<std::pair<Vec, Vec>> probes;  // (x', xi')
    probes.reserve(static_cast<size_t>(params.probes));
    probes.emplace_back(x, vec2(0, 0));
    if (field.has_grad() && params.probes > 1) {
        int quota = (params.probes - 1) / 2;
        HaltonBall ball(x, delta, d, params.seed);
        for (int t = 0; t < 4 * quota && quota > 0; ++t) {
            Vec xp = ball.next();
            if (!field.domain().contains(xp, 0.0)) continue;
            if (field.singular_locus(xp, params.locus_tube)) continue;
            Vec xip = sub(field.grad(xp), xi);
            // closed-ball admissibility, with slack for float cancellation
            if (norm(xip, d) > delta * (1.0 + 1e-9) + 1e-12) continue;
            probes.emplace_back(xp, xip);
            --quota;
        }
    }
    // locus probes: the germ can only fail to be C^1 on the singular locus,
    // so project sphere samples onto it (Newton steps on the distance field)
    // and retune the tilt coordinatewise toward the finite-difference
    // gradient, which averages across the kink
    if (params.probes > 1 &&
        field.locus_distance(x) < std::numeric_limits<double>::infinity()) {
        auto fd_grad = [&](auto&& fn, const Vec& p, double step) {
            Vec g{0, 0};
            for (int k = 0; k < d; ++k) {
                Vec hi = p, lo = p;
                hi[k] += step;
                lo[k] -= step;
                g[k] = (fn(hi) - fn(lo)) / (2.0 * step);
            }
            return g;
        };
        std::vector<Vec> locus_pts;
        HaltonBall sphere(vec2(0, 0), 1.0, d, params.seed + 3);
        for (int t = 0; t < 32 && locus_pts.size() < 8; ++t) {
            Vec u = sphere.next();
            double nu = norm(u, d);
            if (nu < 1e-6) continue;
            Vec p = add(x, scale(u, 0.9 * delta / nu));
            bool on_locus = false;
            for (int it = 0; it < 4; ++it) {
                if (!field.domain().contains(p, 0.0)) break;
                double ld = field.locus_distance(p);
                if (ld <= 1e-9) {
                    on_locus = true;
                    break;
                }
                Vec dg = fd_grad(
                    [&](const Vec& q) { return field.locus_distance(q); }, p, 1e-7);
                double ng2 = dot(dg, dg, d);
                if (ng2 < 1e-12) break;
                p = sub(p, scale(dg, ld / ng2));
            }
            if (!on_locus || !field.domain().contains(p, 0.0)) continue;
            double rad = dist(p, x, d);
            if (rad < 0.5 * delta || rad > delta) continue;
            bool dup = false;
            for (const auto& q : locus_pts)
                if (dist(q, p, d) < 0.1 * delta) {
                    dup = true;
                    break;
                }
            if (!dup) locus_pts.push_back(p);
        }
        for (const Vec& p : locus_pts) {
            Vec fg = fd_grad([&](const Vec& q) { return field.eval_unchecked(q); },
                             p, 1e-5);
            for (int msk = 0; msk < (1 << d); ++msk) {
                Vec tilt = xi;
                for (int k = 0; k < d; ++k)
                    if (msk & (1 << k)) tilt[k] = fg[k];
                Vec xip = sub(tilt, xi);
                if (norm(xip, d) > delta * (1.0 + 1e-9) + 1e-12) continue;
                bool dup = false;
                for (const auto& pr : probes)
                    if (dist(pr.first, p, d) < 1e-12 &&
                        dist(pr.second, xip, d) < 1e-12) {
                        dup = true;
                        break;
                    }
                if (!dup) probes.emplace_back(p, xip);
            }
        }
    }
    {
        HaltonBall xball(x, delta, d, params.seed + 1);
        HaltonBall kball(vec2(0, 0), delta, d, params.seed + 2);
        while (probes.size() < static_cast<size_t>(params.probes)) {
            Vec xp = xball.next();
            Vec xip = kball.next();
            if (!field.domain().contains(xp, 0.0)) continue;
            probes.emplace_back(xp, xip);
        }
    }

    bool any_unstable = false;
    SingularityVerdict last;
    for (const auto& [xp, xip] : probes) {
        Vec tilt = add(xi, xip);
        // a probe point where the tilted field is C^1 with nonvanishing
        // gradient is regular: its sublevel germ is a half-ball and the
        // inclusion is an isomorphism, so the homology test is skipped
        if (field.has_grad() && !field.singular_locus(xp, params.locus_tube)) {
            Vec dg = sub(field.grad(xp), tilt);
            if (norm(dg, d) > 1e-10 * (1.0 + norm(tilt, d))) continue;
        }
        double a = field.eval_unchecked(xp) - dot(tilt, xp, d);
        double slope = K + norm(tilt, d);
        try {
            SingularityVerdict v =
                detail::singular_scales(base, tilt, xp, a, slope, params);
            if (v.singular) {
                v.has_witness = true;
                v.witness_x = xp;
                v.witness_xi = xip;
                return v;
            }
            last = v;
        } catch (const UnstableVerdictError&) {
            any_unstable = true;
        }
    }
    if (any_unstable)
        throw UnstableVerdictError("is_critical_point: no stable witness and at least one unstable probe");
    last.singular = false;
    return last;
}

inline SingularityVerdict is_critical_point(const ScalarField& field, const Vec& x,
                                            const Covector& xi,
                                            const ScanParams& params = {},
                                            int grid_res = 257) {
    return is_critical_point(field, x, xi, params, make_base_grid(field, grid_res));
}

// Covector grid spanning the Lipschitz ball with a margin of one pitch.
inline GridSpec default_xi_grid(double K, double pitch, int dim) {
    double span = K + pitch;
    int n = static_cast<int>(std::lround(2.0 * span / pitch)) + 1;
    GridSpec g;
    g.box.dim = dim;
    for (int k = 0; k < dim; ++k) {
        g.box.lo[k] = -span;
        g.box.hi[k] = span;
    }
    g.res = {n, dim == 2 ? n : 1};
    return g;
}

// The homological subdifferential at x: all xi on the grid passing the
// critical-point test. pitch = grid spacing. Scan order is deterministic;
// probe evaluations may run in parallel.
inline CovectorSet homological_subdifferential(const ScalarField& field, const Vec& x,
                                               const GridSpec& xi_grid,
                                               const ScanParams& params,
                                               const BaseGrid& base) {
    const int d = field.dim();
    CovectorSet out;
    out.dim = d;
    out.x = x;
    out.pitch = xi_grid.max_spacing();
    out.provenance = Provenance::homological;

    double cap = std::numeric_limits<double>::infinity();
    if (field.lipschitz_const())
        cap = *field.lipschitz_const() + out.pitch + 1e-9;

    const int n0 = xi_grid.res[0];
    const int n1 = d == 2 ? xi_grid.res[1] : 1;
    const std::int64_t n = static_cast<std::int64_t>(n0) * n1;
    std::vector<uint8_t> status(static_cast<size_t>(n), 0);  // 1 accept, 2 unstable
    parallel_for(n, [&](std::int64_t idx) {
        int i0 = static_cast<int>(idx % n0);
        int i1 = static_cast<int>(idx / n0);
        Vec xi = xi_grid.vertex(i0, i1);
        if (norm(xi, d) > cap) return;
        try {
            if (is_critical_point(field, x, xi, params, base).singular)
                status[static_cast<size_t>(idx)] = 1;
        } catch (const UnstableVerdictError&) {
            status[static_cast<size_t>(idx)] = 2;
        }
    });
    for (std::int64_t idx = 0; idx < n; ++idx) {
        if (status[static_cast<size_t>(idx)] == 2) {
            Vec xi = xi_grid.vertex(static_cast<int>(idx % n0),
                                    static_cast<int>(idx / n0));
            throw UnstableVerdictError(
                "homological_subdifferential: unstable verdict at xi = (" +
                std::to_string(xi[0]) + ", " + std::to_string(xi[1]) + ")");
        }
        if (status[static_cast<size_t>(idx)] == 1)
            out.points.push_back(xi_grid.vertex(static_cast<int>(idx % n0),
                                                static_cast<int>(idx / n0)));
    }
    return out;
}

inline CovectorSet homological_subdifferential(const ScalarField& field, const Vec& x,
                                               const GridSpec& xi_grid,
                                               const ScanParams& params = {},
                                               int grid_res = 257) {
    return homological_subdifferential(field, x, xi_grid, params,
                                       make_base_grid(field, grid_res));
}

// Clarke subdifferential via gradient sampling: hull of gradients at
// quasi-random differentiability points in ball(x, radius). pitch =
// radius * sampled gradient modulus.
inline CovectorSet clarke_subdifferential(const ScalarField& field, const Vec& x,
                                          double radius, int samples,
                                          double locus_tube = 1e-6,
                                          std::uint64_t seed = 0) {
    const int d = field.dim();
    if (!field.has_grad())
        throw LocusError("clarke_subdifferential: field has no gradient");
    HaltonBall ball(x, radius, d, seed);
    std::vector<Vec> grads;
    grads.reserve(static_cast<size_t>(samples));
    double modulus = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vec p = ball.next();
        if (!field.domain().contains(p, 0.0)) continue;
        if (field.singular_locus(p, locus_tube)) continue;
        Vec g = field.grad(p);
        modulus = std::max(modulus, norm(g, d));
        grads.push_back(g);
    }
    if (grads.empty())
        throw DegenerateSamplingError(
            "clarke_subdifferential: all samples fell on the singular locus");
    CovectorSet out;
    out.dim = d;
    out.x = x;
    out.points = convex_hull(std::move(grads), d);
    out.pitch = radius * modulus;
    out.provenance = Provenance::clarke;
    return out;
}

}  // namespace nonsmooth
