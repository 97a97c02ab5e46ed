#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace agdkit {

// Horizon, probability margin, seed and dimension shared by a single run.
struct RunConfig {
    std::size_t horizon = 1;  // T >= 1
    double delta = 0.1;       // probability margin, in (0, 1)
    std::uint64_t seed = 0;
    std::size_t dim = 1;

    void validate() const {
        if (horizon < 1) throw std::invalid_argument("RunConfig: horizon must be >= 1");
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("RunConfig: delta must lie in (0, 1)");
        if (dim < 1) throw std::invalid_argument("RunConfig: dim must be >= 1");
    }
};

}  // namespace agdkit
