#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "agdkit/vec.hpp"

namespace agdkit {

// Deterministic pseudo-random stream (xoshiro256++ seeded from a splitmix64
// expansion of (seed, label)).  Identical (seed, label) pairs yield identical
// draw sequences on every platform; distinct labels yield independent streams,
// so parallel seed sweeps never share generator state.  Distributions are
// generated from the raw 64-bit output directly instead of <random> adaptors,
// which are not bit-reproducible across standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();
    double uniform_in(double lo, double hi);

    // Standard normal via the Marsaglia polar method.
    double gaussian();
    Vector gaussian_vector(std::size_t dim);

    // Uniform on the unit sphere in R^dim (dim = 1 gives +-1).
    Vector on_unit_sphere(std::size_t dim);

    // Uniform over the axis-aligned box [-radius, radius]^dim.
    Vector uniform_in_box(std::size_t dim, double radius);

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

RandomStream make_stream(std::uint64_t seed, std::string_view label);

}  // namespace agdkit
