#include "locc/gram.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace locc {

BlockGram::BlockGram(Matrix m, double tol) : entries(std::move(m)) {
    if (entries.rows() != 9 || entries.cols() != 9)
        throw DimensionError("BlockGram: matrix must be 9x9");
    if ((entries - entries.adjoint()).norm() > 1e-12)
        throw InvariantError("BlockGram: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw InvariantError("BlockGram: matrix is not positive semidefinite");
    const Matrix trace_sum = block(0, 0) + block(1, 1) + block(2, 2);
    if ((trace_sum - Matrix::Identity(3, 3)).norm() > tol)
        throw InvariantError("BlockGram: partial trace is not the identity");
}

BlockGram build_gram(const Subspace& v, const Unitary& m) {
    if (v.dA != 3 || v.k != 3) throw DimensionError("build_gram: requires dA=3, k=3");
    if (m.d != 3) throw DimensionError("build_gram: measurement must be 3x3");
    const ResidualTable t = decompose(v, m, Side::FirstFactor);
    Matrix g(9, 9);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b)
                for (int j = 0; j < 3; ++j)
                    g(3 * a + i, 3 * b + j) = t.at(i, a).dot(t.at(j, b));
    // Symmetrize away round-off before the constructor checks invariants.
    g = 0.5 * (g + Matrix(g.adjoint()));
    return BlockGram(std::move(g));
}

BlockGram conjugate_gram(const BlockGram& g, const Unitary& w, const Unitary& u) {
    if (w.d != 3 || u.d != 3) throw DimensionError("conjugate_gram: unitaries must be 3x3");
    const Matrix k = Eigen::kroneckerProduct(u.entries, w.entries);
    Matrix out = k * g.entries * k.adjoint();
    out = 0.5 * (out + Matrix(out.adjoint()));
    return BlockGram(std::move(out));
}

double diagonal_block_commutator_norm(const BlockGram& g) {
    const auto blocks = g.diagonal_blocks();
    double sum = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            sum += (blocks[a] * blocks[b] - blocks[b] * blocks[a]).squaredNorm();
    return sum;
}

Unitary simultaneous_diagonalizer(const std::array<Matrix, 3>& blocks) {
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            if ((blocks[a] * blocks[b] - blocks[b] * blocks[a]).norm() > 1e-8)
                throw InvariantError("simultaneous_diagonalizer: blocks do not commute");
    // A generic linear combination separates the joint eigenspaces; the fixed
    // seed keeps degenerate-spectrum tie-breaking deterministic.
    RandomStream rng(0x5d1a9f3b2c4e6d70ULL);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix combo = Matrix::Zero(3, 3);
        for (int a = 0; a < 3; ++a) combo += rng.gaussian() * blocks[a];
        combo = 0.5 * (combo + Matrix(combo.adjoint()));
        Eigen::SelfAdjointEigenSolver<Matrix> es(combo);
        const Matrix w = es.eigenvectors();
        double offdiag = 0.0;
        for (int a = 0; a < 3; ++a) {
            Matrix d = w.adjoint() * blocks[a] * w;
            d.diagonal().setZero();
            offdiag = std::max(offdiag, d.cwiseAbs().maxCoeff());
        }
        if (offdiag < 1e-8) return Unitary(w);
    }
    throw InvariantError("simultaneous_diagonalizer: no generic combination separated the blocks");
}

Subspace gram_to_subspace(const BlockGram& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries);
    RealVector lam = es.eigenvalues();
    for (int j = 0; j < 9; ++j) {
        if (lam[j] < -1e-10)
            throw InvariantError("gram_to_subspace: matrix violates PSD beyond tolerance");
        lam[j] = std::sqrt(std::max(lam[j], 0.0));
    }
    const Matrix root =
        es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    // Column (b, j) of M^{1/2} is phi(j, b) in C^9; theta_i = sum_a e_a (x) phi(i, a).
    Matrix frame(27, 3);
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            frame.col(i).segment(9 * a, 9) = root.col(3 * a + i);
    return Subspace(3, 9, std::move(frame));
}

Subspace reduce_environment(const Subspace& v) {
    if (v.dA != 3 || v.k != 3) throw DimensionError("reduce_environment: requires dA=3, k=3");
    const int n = v.dB;
    // Residuals under the standard first-factor basis are the rows of the
    // reshaped frame vectors.
    Matrix residuals(n, 9);
    for (int i = 0; i < 3; ++i) {
        const auto c = v.frame[i].as_matrix();
        for (int a = 0; a < 3; ++a) residuals.col(3 * a + i) = c.row(a).transpose();
    }
    Eigen::JacobiSVD<Matrix> svd(residuals, Eigen::ComputeThinU);
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int rank = 0;
    for (int j = 0; j < svd.singularValues().size(); ++j)
        if (svd.singularValues()[j] > 1e-12 * std::max(smax, 1.0)) ++rank;
    const Matrix q = svd.matrixU().leftCols(rank);  // isometry onto the residual span
    const int db_out = std::min(n, 9);
    Matrix frame = Matrix::Zero(static_cast<Eigen::Index>(3) * db_out, 3);
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            frame.col(i).segment(static_cast<Eigen::Index>(a) * db_out, rank) =
                q.adjoint() * residuals.col(3 * a + i);
    return Subspace(3, db_out, std::move(frame));
}

}  // namespace locc
