#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mtem {

using Vec = std::vector<double>;

/// Dense row-major matrix, just large enough for diffusion coefficients.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

/// Frobenius norm; for a single column this is the Euclidean norm.
inline double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline Vec scaled(const Vec& x, double c) {
    Vec r(x);
    for (double& v : r) v *= c;
    return r;
}

inline Mat scaled(const Mat& m, double c) {
    Mat r(m);
    for (double& v : r.a) v *= c;
    return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("sub: size mismatch");
    Vec r(x);
    for (std::size_t i = 0; i < y.size(); ++i) r[i] -= y[i];
    return r;
}

inline Mat sub(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("sub: shape mismatch");
    Mat r(x);
    for (std::size_t i = 0; i < y.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

/// y += M * w
inline void matvec_accumulate(const Mat& m, const Vec& w, Vec& y) {
    if (static_cast<std::size_t>(m.cols) != w.size() || static_cast<std::size_t>(m.rows) != y.size())
        throw std::invalid_argument("matvec_accumulate: shape mismatch");
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * w[j];
        y[static_cast<std::size_t>(i)] += s;
    }
}

} // namespace mtem
