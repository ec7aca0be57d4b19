#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nonsmooth/geometry.hpp"

namespace nonsmooth {

struct LocusError : std::runtime_error {
    explicit LocusError(const std::string& what) : std::runtime_error(what) {}
};

// A continuous function on a closed box, with an analytic gradient defined
// off a declared measure-zero locus. Immutable after construction; eval and
// grad are pure and safe to call concurrently.
class ScalarField {
public:
    using EvalFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using LocusDistFn = std::function<double(const Vec&)>;

    ScalarField() = default;
    ScalarField(int dim, Box domain, EvalFn eval, GradFn grad = nullptr,
                LocusDistFn locus_dist = nullptr,
                std::optional<double> lipschitz = std::nullopt)
        : dim_(dim),
          domain_(domain),
          eval_(std::move(eval)),
          grad_(std::move(grad)),
          locus_dist_(std::move(locus_dist)),
          lipschitz_(lipschitz) {}

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    std::optional<double> lipschitz_const() const { return lipschitz_; }
    bool has_grad() const { return static_cast<bool>(grad_); }

    double eval(const Vec& x) const {
        if (!domain_.contains(x, 1e-9))
            throw DomainError("ScalarField::eval: point outside domain box");
        return eval_(x);
    }
    // Unchecked evaluation, for hot loops over grid vertices already known
    // to lie in the domain.
    double eval_unchecked(const Vec& x) const { return eval_(x); }

    // Distance to the singular locus; +inf when the field has none.
    double locus_distance(const Vec& x) const {
        if (!locus_dist_) return std::numeric_limits<double>::infinity();
        return locus_dist_(x);
    }
    // Measure-zero set where grad is undefined. Points within `tube` of the
    // declared locus are treated as on it.
    bool singular_locus(const Vec& x, double tube = 1e-6) const {
        return locus_distance(x) <= tube;
    }

    Vec grad(const Vec& x) const {
        if (!grad_) throw LocusError("ScalarField::grad: field has no gradient");
        if (!domain_.contains(x, 1e-9))
            throw DomainError("ScalarField::grad: point outside domain box");
        if (singular_locus(x))
            throw LocusError("ScalarField::grad: gradient undefined at singular locus");
        return grad_(x);
    }

private:
    int dim_ = 1;
    Box domain_;
    EvalFn eval_;
    GradFn grad_;
    LocusDistFn locus_dist_;
    std::optional<double> lipschitz_;
};

// ---- analytic combinators --------------------------------------------------
// Values and gradients are composed in closed form, never by interpolation.

inline ScalarField field_sum(const ScalarField& f, const ScalarField& g) {
    Box dom = f.domain().intersect(g.domain());
    auto grad = (f.has_grad() && g.has_grad())
                    ? ScalarField::GradFn([f, g](const Vec& x) {
                          return add(f.grad(x), g.grad(x));
                      })
                    : ScalarField::GradFn(nullptr);
    ScalarField::LocusDistFn ld = [f, g](const Vec& x) {
        return std::min(f.locus_distance(x), g.locus_distance(x));
    };
    std::optional<double> K;
    if (f.lipschitz_const() && g.lipschitz_const())
        K = *f.lipschitz_const() + *g.lipschitz_const();
    return ScalarField(
        f.dim(), dom,
        [f, g](const Vec& x) { return f.eval_unchecked(x) + g.eval_unchecked(x); },
        grad, ld, K);
}

inline ScalarField field_product(const ScalarField& f, const ScalarField& g) {
    Box dom = f.domain().intersect(g.domain());
    auto grad = (f.has_grad() && g.has_grad())
                    ? ScalarField::GradFn([f, g](const Vec& x) {
                          double fv = f.eval_unchecked(x), gv = g.eval_unchecked(x);
                          return add(scale(f.grad(x), gv), scale(g.grad(x), fv));
                      })
                    : ScalarField::GradFn(nullptr);
    ScalarField::LocusDistFn ld = [f, g](const Vec& x) {
        return std::min(f.locus_distance(x), g.locus_distance(x));
    };
    return ScalarField(
        f.dim(), dom,
        [f, g](const Vec& x) { return f.eval_unchecked(x) * g.eval_unchecked(x); },
        grad, ld, std::nullopt);
}

inline ScalarField field_scale(const ScalarField& f, double lambda) {
    auto grad = f.has_grad() ? ScalarField::GradFn([f, lambda](const Vec& x) {
        return scale(f.grad(x), lambda);
    })
                             : ScalarField::GradFn(nullptr);
    std::optional<double> K;
    if (f.lipschitz_const()) K = std::abs(lambda) * *f.lipschitz_const();
    return ScalarField(
        f.dim(), f.domain(),
        [f, lambda](const Vec& x) { return lambda * f.eval_unchecked(x); }, grad,
        [f](const Vec& x) { return f.locus_distance(x); }, K);
}

inline ScalarField field_negate(const ScalarField& f) { return field_scale(f, -1.0); }

// f(x) - <xi, x>
inline ScalarField field_tilt(const ScalarField& f, const Vec& xi) {
    int d = f.dim();
    auto grad = f.has_grad() ? ScalarField::GradFn([f, xi](const Vec& x) {
        return sub(f.grad(x), xi);
    })
                             : ScalarField::GradFn(nullptr);
    std::optional<double> K;
    if (f.lipschitz_const()) K = *f.lipschitz_const() + norm(xi, d);
    return ScalarField(
        d, f.domain(),
        [f, xi, d](const Vec& x) { return f.eval_unchecked(x) - dot(xi, x, d); },
        grad, [f](const Vec& x) { return f.locus_distance(x); }, K);
}

// f(x) + <l, x> + alpha
inline ScalarField field_affine_offset(const ScalarField& f, const Vec& l, double alpha) {
    int d = f.dim();
    auto grad = f.has_grad() ? ScalarField::GradFn([f, l](const Vec& x) {
        return add(f.grad(x), l);
    })
                             : ScalarField::GradFn(nullptr);
    return ScalarField(
        d, f.domain(),
        [f, l, alpha, d](const Vec& x) {
            return f.eval_unchecked(x) + dot(l, x, d) + alpha;
        },
        grad, [f](const Vec& x) { return f.locus_distance(x); }, std::nullopt);
}

// dim x dim matrix, row-major.
struct Mat {
    int dim = 1;
    std::array<double, 4> a{1, 0, 0, 1};
    Vec apply(const Vec& x) const {
        if (dim == 1) return {a[0] * x[0], 0.0};
        return {a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]};
    }
    Vec apply_transpose(const Vec& x) const {
        if (dim == 1) return {a[0] * x[0], 0.0};
        return {a[0] * x[0] + a[2] * x[1], a[1] * x[0] + a[3] * x[1]};
    }
    double op_norm() const {
        // Frobenius upper bound is fine for pitch bookkeeping.
        double s = 0;
        int n = dim * dim;
        for (int i = 0; i < n; ++i) s += a[i] * a[i];
        return std::sqrt(s);
    }
};

// x -> f(Ax + b), with `target_domain` the new domain (its image under the
// affine map must lie in f's domain; checked at evaluation time).
inline ScalarField field_affine_precompose(const ScalarField& f, const Mat& A,
                                           const Vec& b, const Box& target_domain) {
    int d = f.dim();
    auto map = [A, b](const Vec& x) { return add(A.apply(x), b); };
    auto grad = f.has_grad() ? ScalarField::GradFn([f, A, map](const Vec& x) {
        return A.apply_transpose(f.grad(map(x)));
    })
                             : ScalarField::GradFn(nullptr);
    return ScalarField(
        d, target_domain,
        [f, map](const Vec& x) { return f.eval(map(x)); }, grad,
        [f, map, A](const Vec& x) {
            double on = A.op_norm();
            if (on <= 0) return std::numeric_limits<double>::infinity();
            return f.locus_distance(map(x)) / on;
        },
        std::nullopt);
}

// A C^0-converging sequence of fields with a declared limit.
struct FieldSequence {
    std::function<ScalarField(int)> generator;
    ScalarField limit;
    int monotone_from = 1;  // sup-distance nonincreasing beyond this index
};

}  // namespace nonsmooth
