#include <doctest.h>

#include <random>

#include "cholcov/losses.hpp"
#include "support.hpp"

using namespace cholcov;

TEST_CASE("loss values on small cases") {
    for (Index p : {1, 3, 7}) {
        CHECK(nll_value(LowerTriangularFactor::identity(p), Matrix::Identity(p, p)) == doctest::Approx(p));
    }
    const Matrix two = 2.0 * Matrix::Identity(2, 2);
    CHECK(nll_value(LowerTriangularFactor::identity(2), two) == doctest::Approx(4.0));
    CHECK(fr_value(LowerTriangularFactor::identity(2), two) == doctest::Approx(2.0));

    std::mt19937_64 rng(2);
    const Matrix s = testsupport::random_spd(5, rng);
    CHECK(fr_value(cholesky_decompose(s), s) <= 1e-24);
    CHECK_THROWS_AS((void)fr_value(LowerTriangularFactor::identity(3), two), Error);
}

TEST_CASE("NLL matches the dense formula and FR the naive sum") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix t = testsupport::random_lower(6, rng);
        const Matrix s = testsupport::random_spd(6, rng);
        CHECK(nll_value(LowerTriangularFactor(t), s) == doctest::Approx(testsupport::dense_nll(t, s)).epsilon(1e-9));
        CHECK(fr_value(LowerTriangularFactor(t), s) == doctest::Approx(testsupport::naive_fr(t, s)).epsilon(1e-13));
    }
}

TEST_CASE("loss rejects an asymmetric reference") {
    Matrix s = Matrix::Identity(2, 2);
    s(0, 1) = 0.3;
    try {
        Loss loss(LossKind::Frobenius, s);
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSymmetric);
    }
}

TEST_CASE("gradients vanish at stationary points") {
    const Loss fr(LossKind::Frobenius, Matrix::Identity(4, 4));
    CHECK(fr.gradient(LowerTriangularFactor::identity(4)).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(8);
    const Matrix s = testsupport::random_spd(6, rng);
    const Loss nll(LossKind::NegativeLogLikelihood, s);
    CHECK(nll.gradient(cholesky_decompose(s)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("gradients match central finite differences and are lower triangular") {
    std::mt19937_64 rng(23);
    for (LossKind kind : {LossKind::NegativeLogLikelihood, LossKind::Frobenius}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix t = testsupport::random_lower(8, rng);
            const Loss loss(kind, testsupport::random_spd(8, rng));
            const Matrix g = loss.gradient(LowerTriangularFactor(t));
            const Matrix fd = testsupport::fd_gradient(t, [&](const Matrix& m) {
                return loss.value(LowerTriangularFactor(m));
            });
            CHECK(testsupport::max_rel_error(g, fd) <= 1e-5);
            CHECK(Matrix(g.triangularView<Eigen::StrictlyUpper>()).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("directional derivative consistency") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> normal;
    for (LossKind kind : {LossKind::NegativeLogLikelihood, LossKind::Frobenius}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Matrix t = testsupport::random_lower(5, rng);
            const Loss loss(kind, testsupport::random_spd(5, rng));
            Matrix h = Matrix::Zero(5, 5);
            for (Index j = 0; j < 5; ++j) {
                for (Index i = j + 1; i < 5; ++i) h(i, j) = normal(rng);
            }
            const double step = 1e-6;
            const double fd = (loss.value(LowerTriangularFactor(Matrix(t + step * h))) -
                               loss.value(LowerTriangularFactor(Matrix(t - step * h)))) /
                              (2 * step);
            const double analytic = loss.gradient(LowerTriangularFactor(t)).cwiseProduct(h).sum();
            CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
        }
    }
}

TEST_CASE("the Cholesky factor of the reference minimizes the NLL") {
    std::mt19937_64 rng(31);
    const Matrix s = testsupport::random_spd(5, rng);
    const double best = nll_value(cholesky_decompose(s), s);
    for (int rep = 0; rep < 50; ++rep) {
        CHECK(nll_value(LowerTriangularFactor(testsupport::random_lower(5, rng)), s) >= best);
    }
}

TEST_CASE("FR along segments of factors (logged, not asserted)") {
    // Convexity holds in Sigma, not in T; only count violations.
    std::mt19937_64 rng(37);
    int violations = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix a = testsupport::random_lower(4, rng);
        const Matrix b = testsupport::random_lower(4, rng);
        const Matrix s = testsupport::random_spd(4, rng);
        for (double alpha : {0.25, 0.5, 0.75}) {
            const double mid = fr_value(LowerTriangularFactor(Matrix(alpha * a + (1 - alpha) * b)), s);
            const double chord = alpha * fr_value(LowerTriangularFactor(a), s) +
                                 (1 - alpha) * fr_value(LowerTriangularFactor(b), s);
            if (mid > chord + 1e-9) ++violations;
        }
    }
    MESSAGE("FR segment convexity violations: " << violations << " of 150");
}
