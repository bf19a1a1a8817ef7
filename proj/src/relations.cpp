#include "cholcov/relations.hpp"

#include <algorithm>
#include <cmath>

namespace cholcov {

Vector regression_coefficients(const Matrix& sigma, Index i, const std::vector<Index>& conditioning) {
    require_symmetric(sigma);
    const Index p = sigma.rows();
    if (i < 0 || i >= p) throw Error(ErrorCode::InvalidArgument, "response index out of range");
    const auto m = static_cast<Index>(conditioning.size());
    if (m == 0) return Vector(0);

    Matrix sjj(m, m);
    Vector sji(m);
    for (Index a = 0; a < m; ++a) {
        const Index ja = conditioning[static_cast<std::size_t>(a)];
        if (ja < 0 || ja >= p) throw Error(ErrorCode::InvalidArgument, "conditioning index out of range");
        if (ja == i) throw Error(ErrorCode::InvalidArgument, "response index is in the conditioning set");
        sji(a) = sigma(ja, i);
        for (Index b = 0; b < m; ++b) sjj(a, b) = sigma(ja, conditioning[static_cast<std::size_t>(b)]);
    }
    const LowerTriangularFactor chol = cholesky_decompose(sjj);
    return chol.solve_transposed(chol.solve(sji));
}

Vector prefix_regression_coefficients(const Matrix& sigma, Index i, Index len) {
    std::vector<Index> prefix(static_cast<std::size_t>(len));
    for (Index k = 0; k < len; ++k) prefix[static_cast<std::size_t>(k)] = k;
    return regression_coefficients(sigma, i, prefix);
}

namespace {

void track(DeviationReport& report, double deviation, Index i, Index j) {
    if (deviation > report.max_deviation) report = {deviation, i, j};
}

}  // namespace

DeviationReport verify_factor_as_regressions(const Matrix& sigma) {
    const Matrix l = cholesky_decompose(sigma).unit_lower();
    DeviationReport report;
    const Index p = sigma.rows();
    for (Index i = 1; i < p; ++i) {
        for (Index j = 0; j < i; ++j) {
            const Vector beta = prefix_regression_coefficients(sigma, i, j + 1);
            track(report, std::abs(l(i, j) - beta(j)), i, j);
        }
    }
    return report;
}

UpperFactor u_from_sigma(const Matrix& sigma) {
    require_symmetric(sigma);
    const Index p = sigma.rows();
    UpperFactor out{Matrix::Identity(p, p), Vector(p)};
    out.d(0) = sigma(0, 0);
    if (!(out.d(0) > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "non-positive variance at index 0");
    for (Index i = 1; i < p; ++i) {
        const Vector beta = prefix_regression_coefficients(sigma, i, i);
        for (Index j = 0; j < i; ++j) out.u(j, i) = -beta(j);
        out.d(i) = sigma(i, i) - sigma.row(i).head(i).dot(beta);
        if (!(out.d(i) > 0.0)) {
            throw Error(ErrorCode::NotPositiveDefinite, "non-positive residual variance at index " + std::to_string(i));
        }
    }
    return out;
}

DeviationReport verify_coefficient_recursion(const Matrix& sigma) {
    const Index p = sigma.rows();
    // full[i] = beta_{i|0..i-1}; prefix_coef(k, j) = beta_{kj|0..j}.
    std::vector<Vector> full(static_cast<std::size_t>(p));
    for (Index i = 1; i < p; ++i) full[static_cast<std::size_t>(i)] = prefix_regression_coefficients(sigma, i, i);
    const auto prefix_coef = [&](Index k, Index j) { return prefix_regression_coefficients(sigma, k, j + 1)(j); };

    DeviationReport report;
    for (Index i = 1; i < p; ++i) {
        const Vector& bi = full[static_cast<std::size_t>(i)];
        for (Index j = 0; j < i; ++j) {
            double rhs = bi(j);
            for (Index k = j + 1; k < i; ++k) rhs += bi(k) * prefix_coef(k, j);
            track(report, std::abs(prefix_coef(i, j) - rhs), i, j);
        }
    }
    return report;
}

}  // namespace cholcov
