#pragma once

#include <cstdint>

#include "conjlab/linalg.hpp"

namespace conjlab {

/// splitmix64 stream; identical output on every platform, cheap to fork per
/// sample index so parallel sweeps stay deterministic.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    Vec unit_vector(int dim) {
        // normalized Gaussian via Box-Muller
        Vec v(dim);
        for (int i = 0; i < dim; ++i) {
            double u1 = next_double(), u2 = next_double();
            if (u1 <= 0.0) u1 = 0x1.0p-53;
            v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        }
        const double n = v.norm();
        return n > 0.0 ? Vec(v / n) : unit_vector(dim);
    }

    Vec in_ball(int dim, double radius) {
        for (;;) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
            if (v.norm() <= 1.0) return radius * v;
        }
    }

    /// independent stream for sample #index of this generator's stream
    static Rng fork(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
};

}  // namespace conjlab
