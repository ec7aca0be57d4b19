// Cubical sublevel complexes and their homology: Betti numbers of standard
// shapes (oracle: closed-form topology of discs, annuli, slabs, trees),
// induced-inclusion ranks, compact-support (relative) homology, and the
// transversality guard.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nonsmooth/cubical.hpp"
#include "nonsmooth/geometry.hpp"

using namespace nonsmooth;

namespace {

std::vector<double> sample2(const GridSpec& g, double (*f)(const Vec&)) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(g.vertex_count()));
    for (int j = 0; j < g.res[1]; ++j)
        for (int i = 0; i < g.res[0]; ++i) v.push_back(f(g.vertex(i, j)));
    return v;
}

double disc_f(const Vec& p) { return p[0] * p[0] + p[1] * p[1] - 0.25; }
double annulus_f(const Vec& p) {
    return std::abs(std::hypot(p[0], p[1]) - 0.5) - 0.2;
}
double slab_f(const Vec& p) { return std::abs(p[1]) - 0.2; }
double two_discs_f(const Vec& p) {
    return std::min(std::hypot(p[0] - 0.5, p[1]), std::hypot(p[0] + 0.5, p[1])) -
           0.2;
}
double tripod_f(const Vec& p) {
    double best = 1e9;
    for (double ang : {90.0, 210.0, 330.0}) {
        double a = ang * 3.14159265358979323846 / 180.0;
        double ux = std::cos(a), uy = std::sin(a);
        double s = p[0] * ux + p[1] * uy;
        double d = s <= 0 ? std::hypot(p[0], p[1]) : std::abs(-p[0] * uy + p[1] * ux);
        best = std::min(best, d);
    }
    return best - 0.06;
}
double double_well_f(const Vec& p) {
    double q = p[0] * p[0] - 0.25;
    return q * q + p[1] * p[1];
}

}  // namespace

TEST_CASE("sublevel homology of standard shapes") {
    GridSpec g = grid2(box2(-1, -1, 1, 1), 65, 65);
    Box full = box2(-1, -1, 1, 1);

    auto disc = build_sublevel_complex(sample2(g, disc_f), g, 0.0, full);
    REQUIRE(homology_ranks(disc) == std::vector<int>{1, 0, 0});
    REQUIRE(disc.euler_characteristic() == 1);

    auto ann = build_sublevel_complex(sample2(g, annulus_f), g, 0.0, full);
    REQUIRE(homology_ranks(ann) == std::vector<int>{1, 1, 0});
    REQUIRE(ann.euler_characteristic() == 0);

    auto two = build_sublevel_complex(sample2(g, two_discs_f), g, 0.0, full);
    REQUIRE(homology_ranks(two) == std::vector<int>{2, 0, 0});
    REQUIRE(two.euler_characteristic() == 2);
}

TEST_CASE("1-D sublevel complexes") {
    GridSpec g = grid1(-1, 1, 129);
    std::vector<double> v;
    for (int i = 0; i < 129; ++i) {
        double x = g.vertex(i)[0];
        // two intervals: |x| in (0.2, 0.6)
        v.push_back(std::abs(std::abs(x) - 0.4) - 0.2);
    }
    auto cx = build_sublevel_complex(v, g, 0.0, box1(-1, 1));
    REQUIRE(homology_ranks(cx) == std::vector<int>{2, 0});
    REQUIRE(cx.euler_characteristic() == 2);
}

TEST_CASE("sublevel sets are nested and strictness matters") {
    GridSpec g = grid1(-1, 1, 65);
    std::vector<double> v;
    for (int i = 0; i < 65; ++i) v.push_back(std::abs(g.vertex(i)[0]));
    auto lo = build_sublevel_complex(v, g, 0.25, box1(-1, 1));
    auto hi = build_sublevel_complex(v, g, 0.75, box1(-1, 1));
    REQUIRE(is_subcomplex(lo, hi));
    REQUIRE_FALSE(is_subcomplex(hi, lo));
    // strict: the vertex at |x| = threshold is excluded
    auto strict = build_sublevel_complex(v, g, 0.5, box1(-1, 1), true);
    auto closed = build_sublevel_complex(v, g, 0.5, box1(-1, 1), false);
    REQUIRE(is_subcomplex(strict, closed));
    REQUIRE(strict.total_cells() < closed.total_cells());
}

TEST_CASE("inclusion-induced ranks detect a merge") {
    GridSpec g = grid2(box2(-1, -1, 1, 1), 65, 65);
    auto v = sample2(g, double_well_f);
    // below the saddle: two wells; above: one component
    auto ir = inclusion_induced_ranks(v, g, box2(-1, -1, 1, 1), 0.02, 0.08);
    REQUIRE(ir.betti_X[0] == 2);
    REQUIRE(ir.betti_Y[0] == 1);
    REQUIRE(ir.induced_rank[0] == 1);
    REQUIRE(ir.induced_rank[1] == 0);
    // rank bound: induced rank never exceeds either side
    for (int k = 0; k < 2; ++k) {
        REQUIRE(ir.induced_rank[k] <= ir.betti_X[k]);
        REQUIRE(ir.induced_rank[k] <= ir.betti_Y[k]);
    }
}

TEST_CASE("compact-support homology of standard shapes") {
    GridSpec g = grid2(box2(-1, -1, 1, 1), 65, 65);
    Box inner = box2(-0.9, -0.9, 0.9, 0.9);
    REQUIRE(compact_support_betti(sample2(g, disc_f), g, 0.0, inner) ==
            std::vector<int>{1, 0, 0});
    REQUIRE(compact_support_betti(sample2(g, annulus_f), g, 0.0, inner) ==
            std::vector<int>{1, 1, 0});
    // slab crossing the box: one relative 1-cycle, components all touch
    REQUIRE(compact_support_betti(sample2(g, slab_f), g, 0.0, inner) ==
            std::vector<int>{0, 1, 0});
    // whole box: only the relative fundamental class
    std::vector<double> allv(65 * 65, -1.0);
    REQUIRE(compact_support_betti(allv, g, 0.0, inner) ==
            std::vector<int>{0, 0, 1});
    // tree with three boundary-reaching branches: rank 2 in degree 1
    REQUIRE(compact_support_betti(sample2(g, tripod_f), g, 0.0, inner) ==
            std::vector<int>{0, 2, 0});
}

TEST_CASE("compact-support homology is stable under grid refinement") {
    for (int res : {65, 129, 257}) {
        GridSpec g = grid2(box2(-1, -1, 1, 1), res, res);
        Box inner = box2(-0.9, -0.9, 0.9, 0.9);
        INFO("res = " << res);
        REQUIRE(compact_support_betti(sample2(g, disc_f), g, 0.0, inner) ==
                std::vector<int>{1, 0, 0});
        REQUIRE(compact_support_betti(sample2(g, tripod_f), g, 0.0, inner) ==
                std::vector<int>{0, 2, 0});
    }
}

TEST_CASE("compact-support homology in one dimension") {
    GridSpec g = grid1(-1, 1, 129);
    Box inner = box1(-0.9, 0.9);
    std::vector<double> interval, full, halfline;
    for (int i = 0; i < 129; ++i) {
        double x = g.vertex(i)[0];
        interval.push_back(std::abs(x) - 0.3);
        full.push_back(-1.0);
        halfline.push_back(x + 0.2);  // sublevel reaches the left box edge
    }
    REQUIRE(compact_support_betti(interval, g, 0.0, inner) ==
            std::vector<int>{1, 0});
    REQUIRE(compact_support_betti(full, g, 0.0, inner) == std::vector<int>{0, 1});
    // a component attached to the boundary is quotiented away
    REQUIRE(compact_support_betti(halfline, g, 0.0, inner) ==
            std::vector<int>{0, 0});
}

TEST_CASE("flat boundary layer raises TransversalityError") {
    GridSpec g = grid1(-1, 1, 65);
    std::vector<double> v(65, 0.0);  // the level set {v = 0} contains the edge layer
    REQUIRE_THROWS_AS(compact_support_betti(v, g, 0.0, box1(-0.9, 0.9)),
                      TransversalityError);
}

TEST_CASE("euler characteristic equals the alternating Betti sum") {
    GridSpec g = grid2(box2(-1, -1, 1, 1), 65, 65);
    Box full = box2(-1, -1, 1, 1);
    for (auto* f : {disc_f, annulus_f, two_discs_f, slab_f}) {
        auto cx = build_sublevel_complex(sample2(g, f), g, 0.0, full);
        auto b = homology_ranks(cx);
        REQUIRE(cx.euler_characteristic() == b[0] - b[1] + b[2]);
    }
}
