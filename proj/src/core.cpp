#include "locc/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace locc {

BipartiteVector::BipartiteVector(int da, int db, Vector amp)
    : dA(da), dB(db), amplitudes(std::move(amp)) {
    if (dA <= 0 || dB <= 0) throw DimensionError("BipartiteVector: dimensions must be positive");
    if (amplitudes.size() != static_cast<Eigen::Index>(dA) * dB)
        throw DimensionError("BipartiteVector: amplitude length must be dA*dB");
}

Subspace::Subspace(int da, int db, Matrix frame_columns, double tol, bool raw)
    : dA(da), dB(db), k(static_cast<int>(frame_columns.cols())) {
    if (dA <= 0 || dB <= 0) throw DimensionError("Subspace: dimensions must be positive");
    if (frame_columns.rows() != static_cast<Eigen::Index>(dA) * dB)
        throw DimensionError("Subspace: frame vectors must have length dA*dB");
    if (k > dA * dB) throw DimensionError("Subspace: frame size exceeds dA*dB");
    frame.reserve(k);
    for (int j = 0; j < k; ++j) frame.emplace_back(dA, dB, frame_columns.col(j));
    if (!raw) {
        const double dev = gram_deviation();
        if (dev > tol) throw InvariantError("Subspace: frame is not orthonormal (deviation " +
                                            std::to_string(dev) + ")");
    }
}

Matrix Subspace::frame_matrix() const {
    Matrix f(static_cast<Eigen::Index>(dA) * dB, k);
    for (int j = 0; j < k; ++j) f.col(j) = frame[j].amplitudes;
    return f;
}

double Subspace::gram_deviation() const {
    const Matrix f = frame_matrix();
    return (f.adjoint() * f - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
}

Unitary::Unitary(Matrix m, double tol) : d(static_cast<int>(m.rows())), entries(std::move(m)) {
    if (entries.rows() != entries.cols()) throw DimensionError("Unitary: matrix must be square");
    const double dev = (entries * entries.adjoint() - Matrix::Identity(d, d)).norm();
    if (dev > tol) throw InvariantError("Unitary: UU^dag deviates from I by " + std::to_string(dev));
}

Unitary Unitary::identity(int d) { return Unitary(Matrix::Identity(d, d)); }

UnitaryParams::UnitaryParams(int dim, RealVector p) : d(dim), params(std::move(p)) {
    if (d <= 0) throw DimensionError("UnitaryParams: dimension must be positive");
    if (params.size() != static_cast<Eigen::Index>(d) * d)
        throw DimensionError("UnitaryParams: parameter vector must have length d^2");
}

Matrix skew_generator(const UnitaryParams& p) {
    const int d = p.d;
    Matrix a = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) a(j, j) = Complex(0.0, p.params[j]);
    int idx = d;
    for (int j = 0; j < d; ++j) {
        for (int l = j + 1; l < d; ++l) {
            const double x = p.params[idx++];
            const double y = p.params[idx++];
            a(j, l) = Complex(x, y);
            a(l, j) = Complex(-x, y);
        }
    }
    return a;
}

UnitaryParams params_from_generator(const Matrix& skew) {
    const int d = static_cast<int>(skew.rows());
    // Discard any stray Hermitian part from round-off.
    const Matrix a = 0.5 * (skew - skew.adjoint());
    RealVector p(d * d);
    for (int j = 0; j < d; ++j) p[j] = a(j, j).imag();
    int idx = d;
    for (int j = 0; j < d; ++j) {
        for (int l = j + 1; l < d; ++l) {
            p[idx++] = a(j, l).real();
            p[idx++] = a(j, l).imag();
        }
    }
    return {d, std::move(p)};
}

Unitary unitary_from_params(const UnitaryParams& p) {
    const Matrix a = skew_generator(p);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(Complex(0, -1) * a));
    const Vector phases =
        (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return Unitary(std::move(u));
}

UnitaryParams params_from_unitary(const Unitary& u) {
    Eigen::ComplexSchur<Matrix> schur(u.entries);
    const int d = u.d;
    Vector logphases(d);
    for (int j = 0; j < d; ++j)
        logphases[j] = Complex(0.0, std::arg(schur.matrixT()(j, j)));
    const Matrix a = schur.matrixU() * logphases.asDiagonal() * schur.matrixU().adjoint();
    return params_from_generator(a);
}

namespace {

Matrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
    Matrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complex_gaussian();
    return g;
}

// QR orthonormalization with the phase convention that the R diagonal is
// real positive, which makes the thin Q a deterministic function of the input
// and Haar-distributed for Gaussian input.
Matrix haar_frame(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
    const Matrix g = complex_gaussian_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix r = qr.matrixQR().topRows(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) q.col(j) *= rjj / mag;
    }
    return q;
}

}  // namespace

Unitary haar_random_unitary(int d, RandomStream& rng) {
    return Unitary(haar_frame(d, d, rng));
}

Subspace haar_random_subspace(int dA, int dB, int k, std::uint64_t seed) {
    if (dA <= 0 || dB <= 0 || k <= 0) throw DimensionError("haar_random_subspace: bad dimensions");
    if (k > dA * dB) throw DimensionError("haar_random_subspace: k exceeds dA*dB");
    RandomStream rng(seed);
    return Subspace(dA, dB, haar_frame(static_cast<Eigen::Index>(dA) * dB, k, rng));
}

Subspace apply_basis_change(const Subspace& v, const Unitary& w) {
    if (w.d != v.k) throw DimensionError("apply_basis_change: W dimension must equal frame size");
    // |psi_i> = sum_j w_ij |theta_j>  <=>  columns of F * W^T.
    return Subspace(v.dA, v.dB, v.frame_matrix() * w.entries.transpose());
}

ResidualTable decompose(const Subspace& v, const Unitary& m, Side side) {
    const int expect = side == Side::FirstFactor ? v.dA : v.dB;
    if (m.d != expect) throw DimensionError("decompose: measurement dimension mismatch");
    ResidualTable t;
    t.k = v.k;
    t.m = m.d;
    t.dim = side == Side::FirstFactor ? v.dB : v.dA;
    t.residuals.assign(t.k, std::vector<Vector>(t.m));
    for (int i = 0; i < v.k; ++i) {
        const auto c = v.frame[i].as_matrix();
        for (int a = 0; a < t.m; ++a) {
            const Vector va = m.entries.col(a).conjugate();
            t.residuals[i][a] =
                side == Side::FirstFactor ? Vector(c.transpose() * va) : Vector(c * va);
        }
    }
    return t;
}

Matrix reconstruct(const ResidualTable& t, const Unitary& m, Side side) {
    const Eigen::Index rows = side == Side::FirstFactor
                                  ? static_cast<Eigen::Index>(t.m) * t.dim
                                  : static_cast<Eigen::Index>(t.dim) * t.m;
    Matrix f = Matrix::Zero(rows, t.k);
    for (int i = 0; i < t.k; ++i) {
        for (int a = 0; a < t.m; ++a) {
            const Vector& phi = t.at(i, a);
            const Vector va = m.entries.col(a);
            if (side == Side::FirstFactor) {
                for (int x = 0; x < t.m; ++x)
                    f.col(i).segment(static_cast<Eigen::Index>(x) * t.dim, t.dim) += va[x] * phi;
            } else {
                for (int x = 0; x < t.dim; ++x)
                    f.col(i).segment(static_cast<Eigen::Index>(x) * t.m, t.m) += phi[x] * va;
            }
        }
    }
    return f;
}

Matrix polar_orthonormalize(const Matrix& frame_columns) {
    Eigen::JacobiSVD<Matrix> svd(frame_columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace locc
