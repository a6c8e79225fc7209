#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "locc/gram.hpp"
#include "locc/harness.hpp"
#include "locc/objective.hpp"

using namespace locc;

namespace {

// Gram matrix computed from the frame amplitudes by plain index loops,
// bypassing decompose/build_gram entirely.
Matrix brute_force_gram(const Subspace& v, const Unitary& m) {
    // phi(i,a)[b] = sum_x conj(m(x,a)) * theta_i[x*dB + b]
    const int dB = v.dB;
    std::vector<std::vector<Vector>> phi(3, std::vector<Vector>(3, Vector::Zero(dB)));
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < dB; ++b) {
                Complex s = 0.0;
                for (int x = 0; x < 3; ++x)
                    s += std::conj(m.entries(x, a)) * v.frame[i].amplitudes[x * dB + b];
                phi[i][a][b] = s;
            }
    Matrix g(9, 9);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b)
                for (int j = 0; j < 3; ++j) {
                    Complex s = 0.0;
                    for (int x = 0; x < dB; ++x) s += std::conj(phi[i][a][x]) * phi[j][b][x];
                    g(3 * a + i, 3 * b + j) = s;
                }
    return g;
}

Subspace product_frame(const Unitary& m, int dB) {
    Matrix f = Matrix::Zero(static_cast<Eigen::Index>(3) * dB, 3);
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a) f(static_cast<Eigen::Index>(a) * dB + i, i) += m.entries(a, i);
    return Subspace(3, dB, f);
}

}  // namespace

TEST_CASE("build_gram matches the plain-loop oracle") {
    for (int t = 0; t < 10; ++t) {
        const Subspace v = haar_random_subspace(3, 4 + (t % 3), 3, mix_seed(100, t));
        RandomStream rng(mix_seed(101, t));
        const Unitary m = haar_random_unitary(3, rng);
        const BlockGram g = build_gram(v, m);
        CHECK((g.entries - brute_force_gram(v, m)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("build_gram on a product frame is diagonal with unit entries") {
    RandomStream rng(7);
    const Unitary m = haar_random_unitary(3, rng);
    const BlockGram g = build_gram(product_frame(m, 3), m);
    // phi(i,a) = delta_ia e_i, so the only nonzero entries are (3a+a, 3a+a) = 1.
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b)
                for (int j = 0; j < 3; ++j) {
                    const Complex e = g.entries(3 * a + i, 3 * b + j);
                    const double expected = (i == a && j == b && a == b) ? 1.0 : 0.0;
                    CHECK(std::abs(e - Complex(expected, 0.0)) < 1e-12);
                }
}

TEST_CASE("build_gram invariants on Haar inputs: Hermitian, PSD, unit partial trace") {
    for (int t = 0; t < 50; ++t) {
        const Subspace v = haar_random_subspace(3, 3 + (t % 7), 3, mix_seed(200, t));
        RandomStream rng(mix_seed(201, t));
        const BlockGram g = build_gram(v, haar_random_unitary(3, rng));
        CHECK((g.entries - g.entries.adjoint()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        const Matrix tr = g.block(0, 0) + g.block(1, 1) + g.block(2, 2);
        CHECK((tr - Matrix::Identity(3, 3)).norm() < 1e-12);
    }
}

TEST_CASE("build_gram accepts the embedded counterexample frame") {
    const Subspace v = appendix_b_subspace();
    const BlockGram g = build_gram(v, Unitary::identity(3));
    CHECK(g.entries.trace().real() == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("BlockGram constructor rejects invalid matrices") {
    Matrix bad = Matrix::Identity(9, 9) / 3.0;
    bad(0, 1) = Complex(0.0, 0.5);  // breaks Hermiticity
    CHECK_THROWS_AS((BlockGram(bad)), InvariantError);
    Matrix not_psd = Matrix::Identity(9, 9) / 3.0;
    not_psd(0, 0) = -0.1;
    not_psd(3, 3) = 2.0 / 3.0 + 0.1;  // keeps the partial trace but not PSD
    CHECK_THROWS_AS((BlockGram(not_psd)), InvariantError);
    CHECK_THROWS_AS(BlockGram(Matrix::Identity(9, 9)), InvariantError);  // trace sum is 3I
    CHECK_THROWS_AS(BlockGram(Matrix::Identity(4, 4)), DimensionError);
}

TEST_CASE("conjugate_gram") {
    const Subspace v = haar_random_subspace(3, 5, 3, 301);
    RandomStream rng(302);
    const Unitary m = haar_random_unitary(3, rng);
    const Unitary w = haar_random_unitary(3, rng);
    const Unitary u = haar_random_unitary(3, rng);
    const BlockGram g = build_gram(v, m);

    SUBCASE("preserves the spectrum and remains a valid BlockGram") {
        const BlockGram gc = conjugate_gram(g, w, u);
        Eigen::SelfAdjointEigenSolver<Matrix> ea(g.entries, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Matrix> eb(gc.entries, Eigen::EigenvaluesOnly);
        CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("identity conjugation is the identity") {
        const BlockGram gc = conjugate_gram(g, Unitary::identity(3), Unitary::identity(3));
        CHECK((gc.entries - g.entries).norm() < 1e-14);
    }
    SUBCASE("basis change of the frame acts on the inner index") {
        // psi_i = sum_j w_ij theta_j gives phi'(i,a) = sum_j w_ij phi(j,a),
        // i.e. conjugation by conj(W) on the basis index.
        const BlockGram direct = build_gram(apply_basis_change(v, w), m);
        const Unitary w_conj(Matrix(w.entries.conjugate()));
        const BlockGram rotated = conjugate_gram(g, w_conj, Unitary::identity(3));
        CHECK((direct.entries - rotated.entries).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("diagonal_block_commutator_norm") {
    SUBCASE("block-diagonal commuting construction gives zero") {
        Matrix m9 = Matrix::Zero(9, 9);
        const double w[3][3] = {{0.5, 0.3, 0.2}, {0.1, 0.6, 0.3}, {0.4, 0.1, 0.5}};
        for (int a = 0; a < 3; ++a)
            for (int t = 0; t < 3; ++t) m9(3 * a + t, 3 * a + t) = w[a][t];
        // columns of w sum to 1, so the partial trace is the identity
        const BlockGram g(m9);
        CHECK(diagonal_block_commutator_norm(g) < 1e-28);
    }
    SUBCASE("known non-commuting example matches the hand value") {
        // Diagonal blocks: B1 = diag(p) rotated vs B2 = diag(q) in the
        // standard basis; commutator computed independently below.
        Matrix h = Matrix::Zero(3, 3);
        h(0, 1) = 0.2;
        h(1, 0) = 0.2;
        Matrix b0 = Matrix::Zero(3, 3), b1 = Matrix::Zero(3, 3), b2 = Matrix::Zero(3, 3);
        b0.diagonal() << 0.5, 0.2, 0.1;
        b1.diagonal() << 0.3, 0.5, 0.4;
        b2.diagonal() << 0.2, 0.3, 0.5;
        b0 += h;
        b1 -= h;  // keeps b0 + b1 + b2 = I
        Matrix m9 = Matrix::Zero(9, 9);
        m9.block(0, 0, 3, 3) = b0;
        m9.block(3, 3, 3, 3) = b1;
        m9.block(6, 6, 3, 3) = b2;
        const BlockGram g(m9, 1e-6);
        const double expected = (b0 * b1 - b1 * b0).squaredNorm() +
                                (b0 * b2 - b2 * b0).squaredNorm() +
                                (b1 * b2 - b2 * b1).squaredNorm();
        CHECK(expected > 1e-6);  // genuinely non-commuting
        CHECK(diagonal_block_commutator_norm(g) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("generic Haar instance is non-commuting") {
        const Subspace v = haar_random_subspace(3, 5, 3, 411);
        RandomStream rng(412);
        const BlockGram g = build_gram(v, haar_random_unitary(3, rng));
        CHECK(diagonal_block_commutator_norm(g) > 1e-6);
    }
}

TEST_CASE("simultaneous_diagonalizer") {
    SUBCASE("commuting Hermitian triples share the returned eigenbasis") {
        for (int t = 0; t < 20; ++t) {
            RandomStream rng(mix_seed(500, t));
            const Unitary q = haar_random_unitary(3, rng);
            std::array<Matrix, 3> blocks;
            for (int a = 0; a < 3; ++a) {
                RealVector lam(3);
                for (int j = 0; j < 3; ++j) lam[j] = rng.uniform();
                blocks[a] = q.entries * lam.cast<Complex>().asDiagonal() * q.entries.adjoint();
                blocks[a] = 0.5 * (blocks[a] + Matrix(blocks[a].adjoint()));
            }
            const Unitary w = simultaneous_diagonalizer(blocks);
            for (int a = 0; a < 3; ++a) {
                Matrix d = w.entries.adjoint() * blocks[a] * w.entries;
                d.diagonal().setZero();
                CHECK(d.cwiseAbs().maxCoeff() < 1e-8);
            }
        }
    }
    SUBCASE("fully degenerate input (identities) is accepted") {
        const std::array<Matrix, 3> blocks = {Matrix::Identity(3, 3) / 3.0,
                                              Matrix::Identity(3, 3) / 3.0,
                                              Matrix::Identity(3, 3) / 3.0};
        const Unitary w = simultaneous_diagonalizer(blocks);
        CHECK((w.entries * w.entries.adjoint() - Matrix::Identity(3, 3)).norm() < 1e-12);
    }
    SUBCASE("non-commuting input is rejected") {
        Matrix x = Matrix::Zero(3, 3), z = Matrix::Zero(3, 3);
        x(0, 1) = 1.0;
        x(1, 0) = 1.0;
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        CHECK_THROWS_AS(simultaneous_diagonalizer({x, z, Matrix::Identity(3, 3)}),
                        InvariantError);
    }
}

TEST_CASE("gram_to_subspace round trip reproduces the Gram matrix") {
    for (int t = 0; t < 10; ++t) {
        const Subspace v = haar_random_subspace(3, 4 + t, 3, mix_seed(600, t));
        RandomStream rng(mix_seed(601, t));
        const BlockGram g = build_gram(v, haar_random_unitary(3, rng));
        const Subspace canon = gram_to_subspace(g);
        CHECK(canon.dA == 3);
        CHECK(canon.dB == 9);
        CHECK(canon.gram_deviation() < 1e-10);
        const BlockGram back = build_gram(canon, Unitary::identity(3));
        CHECK((back.entries - g.entries).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("reduce_environment") {
    SUBCASE("preserves residual Gram data for n = 20") {
        for (int t = 0; t < 5; ++t) {
            const Subspace v = haar_random_subspace(3, 20, 3, mix_seed(700, t));
            const Subspace r = reduce_environment(v);
            CHECK(r.dB == 9);
            CHECK(r.gram_deviation() < 1e-10);
            // The reduction is an isometry on the unmeasured factor, so every
            // first-factor Gram matrix is unchanged.
            RandomStream rng(mix_seed(701, t));
            const Unitary m = haar_random_unitary(3, rng);
            CHECK((build_gram(v, m).entries - build_gram(r, m).entries).cwiseAbs().maxCoeff() <
                  1e-10);
        }
    }
    SUBCASE("preserves the objective value") {
        const Subspace v = haar_random_subspace(3, 20, 3, 711);
        const Subspace r = reduce_environment(v);
        RandomStream rng(712);
        const Unitary w = haar_random_unitary(3, rng);
        const Unitary m = haar_random_unitary(3, rng);
        CHECK(objective_h(v, w, m, Side::FirstFactor) ==
              doctest::Approx(objective_h(r, w, m, Side::FirstFactor)).epsilon(1e-12));
    }
    SUBCASE("small environments keep their dimension") {
        const Subspace v = haar_random_subspace(3, 5, 3, 721);
        const Subspace r = reduce_environment(v);
        CHECK(r.dB == 5);
        RandomStream rng(722);
        const Unitary m = haar_random_unitary(3, rng);
        CHECK((build_gram(v, m).entries - build_gram(r, m).entries).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("product frame reduces without distortion") {
        RandomStream rng(731);
        const Unitary m = haar_random_unitary(3, rng);
        const Subspace v = product_frame(m, 12);
        const Subspace r = reduce_environment(v);
        CHECK(r.dB == 9);
        CHECK(objective_h(r, Unitary::identity(3), m, Side::FirstFactor) < 1e-20);
    }
}
