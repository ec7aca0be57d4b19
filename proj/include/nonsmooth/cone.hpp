#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nonsmooth/geometry.hpp"
#include "nonsmooth/rng.hpp"

namespace nonsmooth {

// Sampled Whitney-cone approximation at x: unit directions (p - q)/|p - q|
// with p outside the set and q inside, both drawn from balls of shrinking
// radius around x.
struct ConeEstimate {
    std::vector<Vec> directions;
    std::vector<double> scale_schedule;
    bool empty() const { return directions.empty(); }
};

// `inside`: membership predicate of the closed set S; directions estimate the
// cone C(complement(S), S) at x. Per-scale quota of candidate pairs; scales
// must decrease. An empty estimate means no admissible pair existed at the
// smallest scale (x is isolated from one of the two sets).
inline ConeEstimate whitney_cone_estimate(const std::function<bool(const Vec&)>& inside,
                                          const Vec& x, const std::vector<double>& scales,
                                          int samples = 2000, int dim = 2,
                                          std::uint64_t seed = 0) {
    ConeEstimate est;
    est.scale_schedule = scales;
    for (size_t si = 0; si < scales.size(); ++si) {
        double r = scales[si];
        HaltonBall ball(x, r, dim, seed + si);
        std::vector<Vec> ins, outs;
        int pairs = 0;
        size_t next_in = 0, next_out = 0;
        for (int draw = 0; draw < 8 * samples && pairs < samples; ++draw) {
            Vec p = ball.next();
            (inside(p) ? ins : outs).push_back(p);
            while (next_in < ins.size() && next_out < outs.size() && pairs < samples) {
                Vec d = sub(outs[next_out], ins[next_in]);
                ++next_in;
                ++next_out;
                double n = norm(d, dim);
                if (n < 1e-12) continue;
                ++pairs;
                if (si + 1 == scales.size())  // keep only the finest scale's directions
                    est.directions.push_back(scale(d, 1.0 / n));
            }
        }
        if (si + 1 == scales.size() && pairs == 0) est.directions.clear();
    }
    return est;
}

}  // namespace nonsmooth
