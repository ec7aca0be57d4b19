#pragma once

#include <cstdint>

#include "nonsmooth/geometry.hpp"

namespace nonsmooth {

// Van der Corput radical inverse; halton(i, 2), halton(i, 3) give a 2-D
// low-discrepancy sequence. Fully deterministic.
inline double halton(std::uint64_t i, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

// Deterministic quasi-random points in a closed ball. dim 1 sweeps the
// interval directly; dim 2 uses rejection from the bounding square.
struct HaltonBall {
    Vec center{0, 0};
    double radius = 1.0;
    int dim = 2;
    std::uint64_t index = 1;

    HaltonBall(const Vec& c, double r, int d, std::uint64_t seed = 0)
        : center(c), radius(r), dim(d), index(1 + seed * 7919) {}

    Vec next() {
        for (;;) {
            Vec p{0, 0};
            p[0] = (2.0 * halton(index, 2) - 1.0) * radius;
            if (dim == 2) p[1] = (2.0 * halton(index, 3) - 1.0) * radius;
            ++index;
            if (dim == 1 || p[0] * p[0] + p[1] * p[1] <= radius * radius)
                return add(center, p);
        }
    }
};

}  // namespace nonsmooth
