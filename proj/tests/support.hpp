#pragma once

// Test-only helpers: random instances and independent oracles that avoid the
// library code paths they check.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "cholcov/linalg.hpp"

namespace testsupport {

using cholcov::Index;
using cholcov::Matrix;
using cholcov::Vector;

inline Matrix random_spd(Index p, std::mt19937_64& rng, double ridge = 0.1) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) a(i, j) = normal(rng);
    }
    Matrix s = a * a.transpose() / static_cast<double>(p) + ridge * Matrix::Identity(p, p);
    return 0.5 * (s + s.transpose());
}

/// Lower-triangular with diagonal in [0.5, 1.5] and N(0, 0.5^2) below.
inline Matrix random_lower(Index p, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 0.5);
    std::uniform_real_distribution<double> diag(0.5, 1.5);
    Matrix t = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < i; ++j) t(i, j) = normal(rng);
        t(i, i) = diag(rng);
    }
    return t;
}

inline Matrix gaussian_rows(Index n, const Matrix& factor, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(n, factor.rows());
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < factor.rows(); ++c) z(r, c) = normal(rng);
    }
    return z * factor.transpose();
}

/// Dense NLL through an explicit inverse and determinant.
inline double dense_nll(const Matrix& t, const Matrix& s) {
    const Matrix sigma = t * t.transpose();
    return std::log(sigma.determinant()) + (sigma.inverse() * s).trace();
}

/// Naive triple loop for TT^t, then a double-loop sum of squares.
inline double naive_fr(const Matrix& t, const Matrix& s) {
    const Index p = t.rows();
    double acc = 0.0;
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            double sij = 0.0;
            for (Index k = 0; k < p; ++k) sij += t(i, k) * t(j, k);
            acc += (sij - s(i, j)) * (sij - s(i, j));
        }
    }
    return acc;
}

/// Central finite-difference gradient over the lower triangle.
template <class Fn>
Matrix fd_gradient(const Matrix& t, Fn&& f, double h = 1e-6) {
    const Index p = t.rows();
    Matrix g = Matrix::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = j; i < p; ++i) {
            Matrix up = t;
            Matrix down = t;
            up(i, j) += h;
            down(i, j) -= h;
            g(i, j) = (f(up) - f(down)) / (2.0 * h);
        }
    }
    return g;
}

/// max |a - b| / max(1, |b|) entrywise.
inline double max_rel_error(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
        }
    }
    return worst;
}

}  // namespace testsupport
