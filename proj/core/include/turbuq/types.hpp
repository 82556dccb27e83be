#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace turbuq {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row-major. Small value type used for tensor algebra.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }

    static Mat3 identity() {
        Mat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double trace() const { return m[0] + m[4] + m[8]; }

    double max_abs() const {
        double v = 0.0;
        for (double x : m) v = std::max(v, std::abs(x));
        return v;
    }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

inline Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
}

inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[static_cast<std::size_t>(i)] += a(i, j) * v[static_cast<std::size_t>(j)];
    return r;
}

inline double norm(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

/// Symmetric 3x3 tensor stored as its 6 independent components.
/// Holds Reynolds stresses, anisotropies and strain rates; the storage order
/// xx, yy, zz, xy, xz, yz matches the CSV column order.
struct SymmetricTensor3 {
    double xx = 0.0, yy = 0.0, zz = 0.0;
    double xy = 0.0, xz = 0.0, yz = 0.0;

    static SymmetricTensor3 diagonal(double a, double b, double c) {
        return SymmetricTensor3{a, b, c, 0.0, 0.0, 0.0};
    }

    /// Builds from a dense matrix; off-diagonal asymmetry is averaged away.
    static SymmetricTensor3 from_matrix(const Mat3& a) {
        SymmetricTensor3 t;
        t.xx = a(0, 0);
        t.yy = a(1, 1);
        t.zz = a(2, 2);
        t.xy = 0.5 * (a(0, 1) + a(1, 0));
        t.xz = 0.5 * (a(0, 2) + a(2, 0));
        t.yz = 0.5 * (a(1, 2) + a(2, 1));
        return t;
    }

    Mat3 to_matrix() const {
        Mat3 a;
        a(0, 0) = xx;
        a(1, 1) = yy;
        a(2, 2) = zz;
        a(0, 1) = a(1, 0) = xy;
        a(0, 2) = a(2, 0) = xz;
        a(1, 2) = a(2, 1) = yz;
        return a;
    }

    double operator()(int i, int j) const { return to_matrix()(i, j); }

    double trace() const { return xx + yy + zz; }

    double frobenius_norm() const {
        return std::sqrt(xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz));
    }

    double max_abs() const {
        double v = std::abs(xx);
        v = std::max(v, std::abs(yy));
        v = std::max(v, std::abs(zz));
        v = std::max(v, std::abs(xy));
        v = std::max(v, std::abs(xz));
        v = std::max(v, std::abs(yz));
        return v;
    }
};

inline double max_abs_difference(const SymmetricTensor3& a, const SymmetricTensor3& b) {
    double v = std::abs(a.xx - b.xx);
    v = std::max(v, std::abs(a.yy - b.yy));
    v = std::max(v, std::abs(a.zz - b.zz));
    v = std::max(v, std::abs(a.xy - b.xy));
    v = std::max(v, std::abs(a.xz - b.xz));
    v = std::max(v, std::abs(a.yz - b.yz));
    return v;
}

/// Row-major numeric matrix (n rows x d columns).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace turbuq
