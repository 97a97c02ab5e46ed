#include "agdkit/random.hpp"

#include <cmath>

namespace agdkit {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view label) {
    std::uint64_t mix = seed ^ fnv1a64(label);
    for (auto& word : s_) word = splitmix64(mix);
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_in(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RandomStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = uniform_in(-1.0, 1.0);
        v = uniform_in(-1.0, 1.0);
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

Vector RandomStream::gaussian_vector(std::size_t dim) {
    Vector out(dim);
    for (double& v : out) v = gaussian();
    return out;
}

Vector RandomStream::on_unit_sphere(std::size_t dim) {
    if (dim == 1) return Vector{uniform() < 0.5 ? -1.0 : 1.0};
    Vector out;
    double n = 0.0;
    do {
        out = gaussian_vector(dim);
        n = norm(out);
    } while (n == 0.0);
    scale_in_place(out, 1.0 / n);
    return out;
}

Vector RandomStream::uniform_in_box(std::size_t dim, double radius) {
    Vector out(dim);
    for (double& v : out) v = uniform_in(-radius, radius);
    return out;
}

RandomStream make_stream(std::uint64_t seed, std::string_view label) {
    return RandomStream(seed, label);
}

}  // namespace agdkit
