#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsmooth/covector.hpp"
#include "nonsmooth/field.hpp"
#include "nonsmooth/geometry.hpp"
#include "nonsmooth/registry.hpp"
#include "nonsmooth/subdiff.hpp"

namespace nonsmooth {

struct NotCauchyError : std::runtime_error {
    explicit NotCauchyError(const std::string& what) : std::runtime_error(what) {}
};

// Outcome of an inclusion/equality check. worst_violation is the largest
// distance from a left-set point to the right set beyond the combined pitch,
// clamped at zero; holds iff it is zero.
struct InclusionReport {
    bool holds = true;
    double worst_violation = 0.0;
    std::vector<Covector> witnesses;
    double tolerance = 0.0;
};

struct SmoothMap {
    int dim = 1;
    Box domain;  // source box X; the map must send it into the field's domain
    std::function<Vec(const Vec&)> map;
    std::function<Mat(const Vec&)> jacobian;
    double jac_norm_bound = 1.0;  // sup of |dL| over the source box
};

struct CalcParams {
    ScanParams scan;
    double pitch = 0.05;  // xi-grid pitch for all scans
    int grid_res = 257;
    // The probe radius delta fattens every scanned set by roughly
    // delta * (local gradient variation); the rule checks compare sets only
    // up to the grid pitch, so delta is kept at a quarter pitch to make the
    // fattening a sub-pitch effect.
    CalcParams() { scan.delta = 0.0125; }
};

// Rebuild a field with an explicit Lipschitz constant (for symbolic
// combinations whose bound is computed by the caller).
inline ScalarField with_lipschitz(const ScalarField& f, double K) {
    return ScalarField(
        f.dim(), f.domain(), [f](const Vec& x) { return f.eval_unchecked(x); },
        f.has_grad() ? ScalarField::GradFn([f](const Vec& x) { return f.grad(x); })
                     : ScalarField::GradFn(nullptr),
        [f](const Vec& x) { return f.locus_distance(x); }, K);
}

inline double max_abs_on_grid(const ScalarField& f, int res = 65) {
    BaseGrid b = make_base_grid(f, res);
    double m = 0.0;
    for (double v : b.values) m = std::max(m, std::abs(v));
    return m;
}

// Homological scan with the default K-sized xi-grid.
inline CovectorSet scan_subdiff(const ScalarField& f, const Vec& x,
                                const CalcParams& params) {
    if (!f.lipschitz_const())
        throw PreconditionError("scan_subdiff: field needs a Lipschitz constant");
    GridSpec xi = default_xi_grid(*f.lipschitz_const(), params.pitch, f.dim());
    return homological_subdifferential(f, x, xi, params.scan, params.grid_res);
}

// One-sided inclusion A subset B up to the combined pitch.
inline InclusionReport inclusion_report(const CovectorSet& A, const CovectorSet& B) {
    InclusionReport rep;
    rep.tolerance = A.pitch + B.pitch;
    for (const auto& p : A.points) {
        double d = set_distance(B, p) - rep.tolerance;
        if (d > 1e-12) {  // float-noise violations do not count
            rep.witnesses.push_back(p);
            rep.worst_violation = std::max(rep.worst_violation, d);
        }
    }
    rep.holds = rep.worst_violation <= 0.0;
    return rep;
}

// Two-sided (Hausdorff) comparison up to the combined pitch.
inline InclusionReport equality_report(const CovectorSet& A, const CovectorSet& B) {
    InclusionReport rep;
    rep.tolerance = A.pitch + B.pitch;
    double h = hausdorff(A, B);
    rep.worst_violation = std::max(0.0, h - rep.tolerance);
    if (rep.worst_violation <= 1e-12) rep.worst_violation = 0.0;
    rep.holds = rep.worst_violation <= 0.0;
    if (!rep.holds) {
        for (const auto& p : A.points)
            if (set_distance(B, p) > rep.tolerance) rep.witnesses.push_back(p);
        for (const auto& q : B.points)
            if (set_distance(A, q) > rep.tolerance) rep.witnesses.push_back(q);
    }
    return rep;
}

// d(f+g) subset df + dg
inline InclusionReport check_sum_rule(const ScalarField& f, const ScalarField& g,
                                      const Vec& x, const CalcParams& params = {}) {
    ScalarField s = field_sum(f, g);
    CovectorSet left = scan_subdiff(s, x, params);
    CovectorSet right =
        minkowski_sum(scan_subdiff(f, x, params), scan_subdiff(g, x, params));
    return inclusion_report(left, right);
}

// d(f.h) subset h(x).df + f(x).dh
inline InclusionReport check_leibniz(const ScalarField& f, const ScalarField& h,
                                     const Vec& x, const CalcParams& params = {}) {
    if (!f.lipschitz_const() || !h.lipschitz_const())
        throw PreconditionError("check_leibniz: both fields need Lipschitz constants");
    double Kp = *f.lipschitz_const() * max_abs_on_grid(h) +
                *h.lipschitz_const() * max_abs_on_grid(f);
    ScalarField prod = with_lipschitz(field_product(f, h), Kp);
    CovectorSet left = scan_subdiff(prod, x, params);
    double fv = f.eval(x), hv = h.eval(x);
    CovectorSet right = minkowski_sum(scale_set(scan_subdiff(f, x, params), hv),
                                      scale_set(scan_subdiff(h, x, params), fv));
    return inclusion_report(left, right);
}

// d(-f) = -df, two-sided.
inline InclusionReport check_negation(const ScalarField& f, const Vec& x,
                                      const CalcParams& params = {}) {
    CovectorSet left = scan_subdiff(field_negate(f), x, params);
    CovectorSet right = negate_set(scan_subdiff(f, x, params));
    return equality_report(left, right);
}

// d(f o L)|_x subset { eta o dL(x) : eta in df|_{L(x)} }
inline InclusionReport check_chain_rule(const ScalarField& f, const SmoothMap& L,
                                        const Vec& x, const CalcParams& params = {}) {
    if (!f.lipschitz_const())
        throw PreconditionError("check_chain_rule: field needs a Lipschitz constant");
    double Kg = *f.lipschitz_const() * L.jac_norm_bound;
    auto lmap = L.map;
    auto ljac = L.jacobian;
    ScalarField g(
        f.dim(), L.domain, [f, lmap](const Vec& y) { return f.eval(lmap(y)); },
        f.has_grad() ? ScalarField::GradFn([f, lmap, ljac](const Vec& y) {
            return ljac(y).apply_transpose(f.grad(lmap(y)));
        })
                     : ScalarField::GradFn(nullptr),
        [f, lmap, L](const Vec& y) {
            return f.locus_distance(lmap(y)) / std::max(L.jac_norm_bound, 1e-12);
        },
        Kg);
    CovectorSet left = scan_subdiff(g, x, params);
    Vec lx = L.map(x);
    Mat J = L.jacobian(x);
    CovectorSet inner = scan_subdiff(f, lx, params);
    CovectorSet right;
    right.dim = f.dim();
    right.x = x;
    right.pitch = inner.pitch * std::max(J.op_norm(), 1.0);
    right.provenance = inner.provenance;
    for (const auto& eta : inner.points) right.points.push_back(J.apply_transpose(eta));
    return inclusion_report(left, right);
}

// dg|_x = lambda.df|_{Ax+b} o A + l for g = lambda.f(Ax+b) + <l,x> + alpha;
// two-sided. target_domain is g's box (must map into f's domain under A,b).
inline InclusionReport check_affine_calculability(const ScalarField& f, double lambda,
                                                  const Mat& A, const Vec& b,
                                                  const Vec& l, double alpha,
                                                  const Vec& x, const Box& target_domain,
                                                  const CalcParams& params = {}) {
    if (!f.lipschitz_const())
        throw PreconditionError("check_affine_calculability: field needs a Lipschitz constant");
    int d = f.dim();
    ScalarField pre = field_affine_precompose(f, A, b, target_domain);
    ScalarField g = field_affine_offset(field_scale(pre, lambda), l, alpha);
    double Kg = std::abs(lambda) * *f.lipschitz_const() * std::max(A.op_norm(), 1e-12) +
                norm(l, d);
    g = with_lipschitz(g, Kg);
    CovectorSet left = scan_subdiff(g, x, params);
    CovectorSet inner = scan_subdiff(f, add(A.apply(x), b), params);
    CovectorSet right;
    right.dim = d;
    right.x = x;
    right.pitch = inner.pitch * std::abs(lambda) * std::max(A.op_norm(), 1.0);
    right.provenance = inner.provenance;
    for (const auto& eta : inner.points)
        right.points.push_back(add(scale(A.apply_transpose(eta), lambda), l));
    return equality_report(left, right);
}

// ---- C^0 limit behavior ------------------------------------------------------

struct LimitParams {
    double rho = 0.2;        // base-point ball of the limit proposition
    int ball_res = 33;       // gradient sample grid per axis inside the ball
    double cover_tol = 0.1;  // tolerance for the inclusion side
    int n_stride = 1;
};

struct LimitReport {
    std::vector<int> indices;
    std::vector<double> dist_per_n;  // dist(xi, D_n)
    bool excluded = false;
    double margin = 0.0;  // best tail margin: max_k min_{n>=k} dist
    int k = -1;           // start index achieving the margin
    bool covered = false; // xi within cover_tol of D_n for all n >= some k
};

// D_n = gradients of f_n over a grid in ball(x, rho); reports how xi relates
// to the tail of the sequence (exclusion margin / coverage).
inline LimitReport check_limit_behavior(const FieldSequence& seq, const Vec& x,
                                        const Covector& xi, int n_max,
                                        const LimitParams& params = {}) {
    const int d = seq.limit.dim();
    // Cauchy-style sanity: sup-distance to the limit must not grow past the
    // declared monotone index.
    {
        int lo = std::max(seq.monotone_from, 1);
        double prev = std::numeric_limits<double>::infinity();
        for (int n : {lo, std::max(lo * 2, lo + 1), n_max}) {
            if (n > n_max) break;
            ScalarField fn = seq.generator(n);
            BaseGrid b = make_base_grid(fn, 65);
            double sup = 0.0;
            for (int i1 = 0; i1 < (d == 2 ? b.grid.res[1] : 1); ++i1)
                for (int i0 = 0; i0 < b.grid.res[0]; ++i0) {
                    Vec p = b.grid.vertex(i0, i1);
                    if (!seq.limit.domain().contains(p, 1e-9)) continue;
                    sup = std::max(sup, std::abs(b.values[static_cast<size_t>(
                                                     b.grid.vertex_index(i0, i1))] -
                                                 seq.limit.eval_unchecked(p)));
                }
            if (sup > prev + 1e-9)
                throw NotCauchyError("check_limit_behavior: sup-distance to the limit grew");
            prev = sup;
        }
    }

    LimitReport rep;
    for (int n = 1; n <= n_max; n += params.n_stride) {
        ScalarField fn = seq.generator(n);
        if (!fn.has_grad())
            throw PreconditionError("check_limit_behavior: sequence member lacks a gradient");
        double best = std::numeric_limits<double>::infinity();
        int m = params.ball_res;
        for (int j = 0; j < (d == 2 ? m : 1); ++j)
            for (int i = 0; i < m; ++i) {
                Vec p = x;
                p[0] += params.rho * (2.0 * i / (m - 1) - 1.0);
                if (d == 2) p[1] += params.rho * (2.0 * j / (m - 1) - 1.0);
                if (dist(p, x, d) > params.rho) continue;
                if (!fn.domain().contains(p, 0.0)) continue;
                if (fn.singular_locus(p)) continue;
                best = std::min(best, dist(fn.grad(p), xi, d));
            }
        rep.indices.push_back(n);
        rep.dist_per_n.push_back(best);
    }
    // tail margins
    double tail = std::numeric_limits<double>::infinity();
    for (size_t i = rep.dist_per_n.size(); i-- > 0;) {
        tail = std::min(tail, rep.dist_per_n[i]);
        if (tail > rep.margin) {
            rep.margin = tail;
            rep.k = rep.indices[i];
        }
    }
    rep.excluded = rep.margin > 0.0;
    for (size_t i = 0; i < rep.dist_per_n.size(); ++i) {
        bool ok = true;
        for (size_t j = i; j < rep.dist_per_n.size(); ++j)
            if (rep.dist_per_n[j] > params.cover_tol) {
                ok = false;
                break;
            }
        if (ok) {
            rep.covered = true;
            break;
        }
    }
    return rep;
}

// Classical convex subdifferential by supporting-line scan: xi accepted iff
// f(y) >= f(x) + <xi, y-x> at every grid vertex.
inline CovectorSet convex_subdiff_oracle(const ScalarField& f, const Vec& x,
                                         const GridSpec& grid, const GridSpec& xi_grid) {
    const int d = f.dim();
    BaseGrid b{grid, eval_grid(f, grid)};
    double fx = f.eval(x);
    CovectorSet out;
    out.dim = d;
    out.x = x;
    out.pitch = xi_grid.max_spacing();
    out.provenance = Provenance::homological;
    const int n0 = xi_grid.res[0];
    const int n1 = d == 2 ? xi_grid.res[1] : 1;
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i) {
            Vec xi = xi_grid.vertex(i, j);
            bool ok = true;
            for (int v1 = 0; ok && v1 < (d == 2 ? grid.res[1] : 1); ++v1)
                for (int v0 = 0; ok && v0 < grid.res[0]; ++v0) {
                    Vec y = grid.vertex(v0, v1);
                    double lhs = b.values[static_cast<size_t>(grid.vertex_index(v0, v1))];
                    if (lhs < fx + dot(xi, sub(y, x), d) - 1e-9) ok = false;
                }
            if (ok) out.points.push_back(xi);
        }
    return out;
}

}  // namespace nonsmooth
