#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonsmooth/field.hpp"
#include "nonsmooth/geometry.hpp"

namespace nonsmooth {

struct RegistryError : std::runtime_error {
    explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};
struct ParamError : std::runtime_error {
    explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }
inline constexpr double kPi = 3.14159265358979323846;
}  // namespace detail

// f_n(x,y) = |x|^{1+1/n} + |y|^{1+1/n} - (x^2+y^2)^{1/2+1/n}; C^1 everywhere,
// converging uniformly on the unit box to |x|+|y|-sqrt(x^2+y^2).
inline ScalarField smoothing_sequence(int n) {
    if (n < 1) throw ParamError("smoothing_sequence: n must be >= 1");
    const double p = 1.0 + 1.0 / n;
    const double q = 0.5 + 1.0 / n;
    Box dom = box2(-1, -1, 1, 1);
    auto eval = [p, q](const Vec& v) {
        double r2 = v[0] * v[0] + v[1] * v[1];
        return std::pow(std::abs(v[0]), p) + std::pow(std::abs(v[1]), p) -
               std::pow(r2, q);
    };
    auto grad = [p, q](const Vec& v) {
        Vec g{0, 0};
        for (int k = 0; k < 2; ++k)
            if (v[k] != 0.0)
                g[k] = p * std::pow(std::abs(v[k]), p - 1.0) * detail::sgn(v[k]);
        double r2 = v[0] * v[0] + v[1] * v[1];
        if (r2 > 0.0) {
            double c = 2.0 * q * std::pow(r2, q - 1.0);
            g[0] -= c * v[0];
            g[1] -= c * v[1];
        }
        return g;
    };
    double K = p * std::sqrt(2.0) + 2.0 * q * std::pow(2.0, 1.0 / n);
    return ScalarField(2, dom, eval, grad, nullptr, K);
}

inline FieldSequence smoothing_field_sequence() {
    FieldSequence s;
    s.generator = [](int n) { return smoothing_sequence(n); };
    // limit is paper2d on the same box
    Box dom = box2(-1, -1, 1, 1);
    auto eval = [](const Vec& v) {
        return std::abs(v[0]) + std::abs(v[1]) -
               std::sqrt(v[0] * v[0] + v[1] * v[1]);
    };
    auto grad = [](const Vec& v) {
        double r = std::sqrt(v[0] * v[0] + v[1] * v[1]);
        return Vec{detail::sgn(v[0]) - v[0] / r, detail::sgn(v[1]) - v[1] / r};
    };
    auto locus = [](const Vec& v) { return std::min(std::abs(v[0]), std::abs(v[1])); };
    s.limit = ScalarField(2, dom, eval, grad, locus, 2.0);
    return s;
}

struct RegistryEntry {
    std::string name;
    int dim;
    int arity;
    std::string params_desc;
    std::optional<double> lipschitz;  // for the canonical parameters
    std::string locus_desc;
};

inline const std::vector<RegistryEntry>& registry_manifest() {
    static const std::vector<RegistryEntry> entries = {
        {"paper2d", 2, 0, "", 2.0, "coordinate axes (includes 0)"},
        {"quartic1d", 1, 0, "", 9.8125, "none"},
        {"abs1d", 1, 0, "", 1.0, "{0}"},
        {"abs_sq", 1, 0, "", 4.0, "none"},
        {"linear", -1, -1, "v_1[,v_2] (dim = arity)", std::nullopt, "none"},
        {"crenel_gen", 1, 1, "n >= 1", 1.0, "none"},
        {"crenel", 1, 0, "", 1.0, "{-pi/2, +pi/2}"},
        {"smoothing", 2, 1, "n >= 1", std::nullopt, "none"},
        {"sqnorm", 1, 0, "", 4.0, "none"},
        {"sqnorm2", 2, 0, "", std::nullopt, "none"},
    };
    return entries;
}

inline ScalarField registry_get(const std::string& name,
                                const std::vector<double>& params = {}) {
    auto need = [&](size_t n) {
        if (params.size() != n)
            throw ParamError("registry_get: '" + name + "' expects " +
                             std::to_string(n) + " parameter(s)");
    };
    if (name == "paper2d") {
        need(0);
        return smoothing_field_sequence().limit;
    }
    if (name == "quartic1d") {
        need(0);
        Box dom = box1(-1.25, 1.25);
        return ScalarField(
            1, dom,
            [](const Vec& v) { return -std::pow(v[0], 4) + 2.0 * v[0]; },
            [](const Vec& v) { return vec1(-4.0 * std::pow(v[0], 3) + 2.0); },
            nullptr, 2.0 + 4.0 * std::pow(1.25, 3));
    }
    if (name == "abs1d") {
        need(0);
        return ScalarField(
            1, box1(-2, 2), [](const Vec& v) { return std::abs(v[0]); },
            [](const Vec& v) { return vec1(detail::sgn(v[0])); },
            [](const Vec& v) { return std::abs(v[0]); }, 1.0);
    }
    if (name == "abs_sq") {
        need(0);
        return ScalarField(
            1, box1(-2, 2), [](const Vec& v) { return v[0] * v[0]; },
            [](const Vec& v) { return vec1(2.0 * v[0]); }, nullptr, 4.0);
    }
    if (name == "linear") {
        if (params.size() != 1 && params.size() != 2)
            throw ParamError("registry_get: 'linear' expects 1 or 2 parameters");
        int d = static_cast<int>(params.size());
        Vec v{params[0], d == 2 ? params[1] : 0.0};
        Box dom = d == 1 ? box1(-2, 2) : box2(-2, -2, 2, 2);
        return ScalarField(
            d, dom, [v, d](const Vec& x) { return dot(v, x, d); },
            [v](const Vec&) { return v; }, nullptr, norm(v, d));
    }
    if (name == "crenel_gen") {
        need(1);
        int n = static_cast<int>(params[0]);
        if (n < 1) throw ParamError("crenel_gen: n must be >= 1");
        double c = (n - 1.0) / n;
        return ScalarField(
            1, box1(-detail::kPi, detail::kPi),
            [c](const Vec& v) { return std::asin(c * std::sin(v[0])); },
            [c](const Vec& v) {
                double s = c * std::sin(v[0]);
                return vec1(c * std::cos(v[0]) / std::sqrt(1.0 - s * s));
            },
            nullptr, std::max(c, 1e-12));
    }
    if (name == "crenel") {
        need(0);
        return ScalarField(
            1, box1(-detail::kPi, detail::kPi),
            [](const Vec& v) { return std::asin(std::sin(v[0])); },
            [](const Vec& v) { return vec1(detail::sgn(std::cos(v[0]))); },
            [](const Vec& v) {
                return std::min(std::abs(v[0] - detail::kPi / 2),
                                std::abs(v[0] + detail::kPi / 2));
            },
            1.0);
    }
    if (name == "smoothing") {
        need(1);
        return smoothing_sequence(static_cast<int>(params[0]));
    }
    if (name == "sqnorm") {
        need(0);
        return ScalarField(
            1, box1(-4, 4), [](const Vec& v) { return 0.5 * v[0] * v[0]; },
            [](const Vec& v) { return vec1(v[0]); }, nullptr, 4.0);
    }
    if (name == "sqnorm2") {
        need(0);
        return ScalarField(
            2, box2(-1, -1, 1, 1),
            [](const Vec& v) { return 0.5 * (v[0] * v[0] + v[1] * v[1]); },
            [](const Vec& v) { return v; }, nullptr, std::sqrt(2.0));
    }
    throw RegistryError("registry_get: unknown field '" + name + "'");
}

// Vertex values in row-major order (axis 0 fastest).
inline std::vector<double> eval_grid(const ScalarField& field, const GridSpec& grid) {
    grid.validate();
    if (!field.domain().contains_box(grid.box, 1e-9))
        throw DomainError("eval_grid: grid box outside field domain");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(grid.vertex_count()));
    int n1 = grid.dim() == 2 ? grid.res[1] : 1;
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i0 = 0; i0 < grid.res[0]; ++i0)
            out.push_back(field.eval_unchecked(grid.vertex(i0, i1)));
    return out;
}

}  // namespace nonsmooth
