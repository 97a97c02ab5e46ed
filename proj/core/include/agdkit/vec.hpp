#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace agdkit {

// Dense real vector.  All library operations keep components finite; a
// non-finite value crossing a module boundary is reported as DivergedRun.
using Vector = std::vector<double>;

inline Vector constant_vector(std::size_t dim, double value) {
    return Vector(dim, value);
}

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const Vector& a) { return dot(a, a); }

inline double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

inline void scale_in_place(Vector& a, double s) {
    for (double& v : a) v *= s;
}

inline Vector scaled(const Vector& a, double s) {
    Vector out = a;
    scale_in_place(out, s);
    return out;
}

// y <- y + a*x
inline void axpy_in_place(double a, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vector add(const Vector& a, const Vector& b) {
    Vector out = a;
    axpy_in_place(1.0, b, out);
    return out;
}

inline Vector sub(const Vector& a, const Vector& b) {
    Vector out = a;
    axpy_in_place(-1.0, b, out);
    return out;
}

// a*x + b*y
inline Vector combine(double a, const Vector& x, double b, const Vector& y) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

inline double dist_sq(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline bool all_finite(const Vector& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

// Raised when a non-finite value appears at a module boundary (oracle output,
// iterate update, objective evaluation).  Carries the iteration index.
class DivergedRun : public std::runtime_error {
public:
    DivergedRun(std::size_t t, const std::string& where)
        : std::runtime_error("diverged run at t=" + std::to_string(t) + " (" + where + ")"),
          t_(t) {}
    std::size_t iteration() const { return t_; }

private:
    std::size_t t_;
};

inline void require_finite(double v, std::size_t t, const char* where) {
    if (!std::isfinite(v)) throw DivergedRun(t, where);
}

inline void require_finite(const Vector& v, std::size_t t, const char* where) {
    if (!all_finite(v)) throw DivergedRun(t, where);
}

}  // namespace agdkit
