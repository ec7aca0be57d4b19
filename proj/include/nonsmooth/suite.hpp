#pragma once

// Canonical check suites shared by the CLI and the acceptance runner: the
// documented calculus pairs and per-field presets for the 1-D
// rotation/inversion checks.

#include <functional>
#include <string>
#include <vector>

#include "nonsmooth/calculus.hpp"
#include "nonsmooth/field.hpp"
#include "nonsmooth/geometry.hpp"
#include "nonsmooth/legendre.hpp"
#include "nonsmooth/registry.hpp"

namespace nonsmooth {

struct SuiteCase {
    std::string check;   // sum | leibniz | negation | chain | affine
    std::string fields;  // human-readable operand description
    Vec x{0, 0};
    int dim = 1;
    std::function<InclusionReport(const CalcParams&)> run;
};

inline ScalarField constant_field(int dim, const Box& dom, double c) {
    return ScalarField(
        dim, dom, [c](const Vec&) { return c; },
        [](const Vec&) { return Vec{0, 0}; }, nullptr, 0.0);
}

inline SmoothMap identity_map(int dim, const Box& dom) {
    SmoothMap L;
    L.dim = dim;
    L.domain = dom;
    L.map = [](const Vec& x) { return x; };
    Mat I;
    I.dim = dim;
    L.jacobian = [I](const Vec&) { return I; };
    L.jac_norm_bound = 1.0;
    return L;
}

inline std::vector<SuiteCase> default_calculus_suite() {
    std::vector<SuiteCase> cases;
    auto push = [&](std::string check, std::string fields, Vec x, int dim,
                    std::function<InclusionReport(const CalcParams&)> run) {
        cases.push_back({std::move(check), std::move(fields), x, dim, std::move(run)});
    };

    ScalarField abs = registry_get("abs1d");
    ScalarField lin07 = registry_get("linear", {0.7});
    ScalarField lin1 = registry_get("linear", {1.0});
    ScalarField lin2d = registry_get("linear", {0.7, -0.3});
    ScalarField p2d = registry_get("paper2d");
    ScalarField c2 = constant_field(1, box1(-2, 2), 2.0);

    // ---- sum rule: d(f+g) subset df + dg
    push("sum", "abs1d + (-abs1d)", vec1(0), 1, [abs](const CalcParams& p) {
        return check_sum_rule(abs, field_negate(abs), vec1(0), p);
    });
    push("sum", "linear(0.7) + linear(0.7)", vec1(0.1), 1, [lin07](const CalcParams& p) {
        return check_sum_rule(lin07, lin07, vec1(0.1), p);
    });
    push("sum", "abs1d + abs1d", vec1(0), 1, [abs](const CalcParams& p) {
        return check_sum_rule(abs, abs, vec1(0), p);
    });

    // ---- Leibniz: d(f.h) subset h(x).df + f(x).dh
    push("leibniz", "abs1d * abs1d", vec1(0), 1, [abs](const CalcParams& p) {
        return check_leibniz(abs, abs, vec1(0), p);
    });
    push("leibniz", "linear(1) * linear(1)", vec1(1), 1, [lin1](const CalcParams& p) {
        return check_leibniz(lin1, lin1, vec1(1), p);
    });
    push("leibniz", "abs1d * const(2)", vec1(0), 1, [abs, c2](const CalcParams& p) {
        return check_leibniz(abs, c2, vec1(0), p);
    });

    // ---- negation: d(-f) = -df
    push("negation", "linear(0.7)", vec1(0.3), 1, [lin07](const CalcParams& p) {
        return check_negation(lin07, vec1(0.3), p);
    });
    push("negation", "abs1d", vec1(0), 1, [abs](const CalcParams& p) {
        return check_negation(abs, vec1(0), p);
    });
    push("negation", "paper2d", vec2(0, 0), 2, [p2d](const CalcParams& p) {
        // the locus spikes of f and -f are resolved to matching extents only
        // at the full probe radius; the quarter-pitch radius used for the
        // smooth-product cases truncates them asymmetrically
        CalcParams q = p;
        q.scan.delta = 0.05;
        return check_negation(p2d, vec2(0, 0), q);
    });

    // ---- chain rule: d(f o L) subset df o dL
    push("chain", "abs1d o id", vec1(0), 1, [abs](const CalcParams& p) {
        return check_chain_rule(abs, identity_map(1, box1(-2, 2)), vec1(0), p);
    });
    push("chain", "abs1d o (2x)", vec1(0), 1, [abs](const CalcParams& p) {
        SmoothMap L;
        L.dim = 1;
        L.domain = box1(-1, 1);
        L.map = [](const Vec& x) { return vec1(2.0 * x[0]); };
        Mat J;
        J.dim = 1;
        J.a = {2, 0, 0, 1};
        L.jacobian = [J](const Vec&) { return J; };
        L.jac_norm_bound = 2.0;
        return check_chain_rule(abs, L, vec1(0), p);
    });
    push("chain", "linear(0.7,-0.3) o rotation", vec2(0.2, -0.1), 2,
         [lin2d](const CalcParams& p) {
             SmoothMap L;
             L.dim = 2;
             L.domain = box2(-2, -2, 2, 2);
             Mat A;
             A.dim = 2;
             A.a = {0, 1, -1, 0};
             L.map = [A](const Vec& x) { return A.apply(x); };
             L.jacobian = [A](const Vec&) { return A; };
             L.jac_norm_bound = A.op_norm();
             return check_chain_rule(lin2d, L, vec2(0.2, -0.1), p);
         });

    // ---- affine calculability: d(lambda.f(Ax+b) + <l,x> + alpha)
    Mat I1;
    I1.dim = 1;
    push("affine", "1 * abs1d + 5", vec1(0), 1, [abs, I1](const CalcParams& p) {
        return check_affine_calculability(abs, 1.0, I1, vec1(0), vec1(0), 5.0,
                                          vec1(0), box1(-2, 2), p);
    });
    push("affine", "-1 * abs1d", vec1(0), 1, [abs, I1](const CalcParams& p) {
        return check_affine_calculability(abs, -1.0, I1, vec1(0), vec1(0), 0.0,
                                          vec1(0), box1(-2, 2), p);
    });
    push("affine", "2 * abs1d", vec1(0), 1, [abs, I1](const CalcParams& p) {
        return check_affine_calculability(abs, 2.0, I1, vec1(0), vec1(0), 0.0,
                                          vec1(0), box1(-2, 2), p);
    });

    return cases;
}

// Presets for check_rotation_1d / check_inversion_1d. Grids are chosen so
// that (a) the table's t range excludes the level where the sublevel set
// fills the whole truncation box (that jump is a box artifact the flags
// cannot see), and (b) for "linear" the covector v = 0.7 falls exactly on a
// y-grid vertex, since the front of a linear field is a single column.
inline RotationParams rotation_params_for(const std::string& name) {
    RotationParams rp;
    rp.pitch = 0.1;
    rp.calc.pitch = 0.05;
    // half-pitch probe radius: guarantees that for a C^1 field every base
    // point accepts the covector grid vertex nearest to its gradient, so the
    // rotated subdifferential graph has no sampling gaps
    rp.calc.scan.delta = 0.025;
    if (name == "linear") {  // v = 0.7
        rp.p_x_grid = grid1(-1.9, 1.9, 77);
        rp.germ_x_grid = grid1(-2, 2, 513);
        rp.y_grid = grid1(0.7 - 1.5, 0.7 + 1.5, 61);
        rp.t_grid = grid1(-1, 1, 41);
        rp.germ_box = box1(-1.9, 1.9);
        return rp;
    }
    if (name == "sqnorm") {  // x^2/2 on [-4,4]
        rp.p_x_grid = grid1(-3.9, 3.9, 157);
        rp.germ_x_grid = grid1(-4, 4, 513);
        rp.y_grid = grid1(-3.5, 3.5, 141);
        rp.t_grid = grid1(-6.7, 1.0, 155);
        rp.germ_box = box1(-3.9, 3.9);
        return rp;
    }
    if (name == "quartic1d") {  // -x^4 + 2x on [-1.25,1.25]
        // base points match the truncation box: covectors attained only on
        // (1.2,1.25] merge outside the box, where the table has no event
        rp.p_x_grid = grid1(-1.2, 1.2, 481);
        rp.germ_x_grid = grid1(-1.25, 1.25, 513);
        // y stays inside the gradient range attained on the box, [-4.9, 8.9],
        // with a margin: beyond it the scanned graph overhangs a front that
        // the box has already truncated
        rp.y_grid = grid1(-4.7, 8.7, 269);
        rp.t_grid = grid1(-1.0, 8.2, 185);
        rp.germ_box = box1(-1.2, 1.2);
        return rp;
    }
    if (name == "abs1d") {
        rp.p_x_grid = grid1(-1.9, 1.9, 77);
        rp.germ_x_grid = grid1(-2, 2, 513);
        rp.y_grid = grid1(-0.95, 0.95, 39);
        rp.t_grid = grid1(-0.5, 1.0, 61);
        rp.germ_box = box1(-1.9, 1.9);
        return rp;
    }
    throw RegistryError("rotation_params_for: no preset for '" + name + "'");
}

}  // namespace nonsmooth
