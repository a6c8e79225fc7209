#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "locc/rng.hpp"

namespace locc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Which tensor factor the first (partial) measurement acts on.
enum class Side { FirstFactor, SecondFactor };

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unit vector in C^dA (x) C^dB. Amplitude layout: entry (a, b) sits at
/// index a*dB + b. All serialization uses this layout.
struct BipartiteVector {
    int dA = 0;
    int dB = 0;
    Vector amplitudes;

    BipartiteVector() = default;
    BipartiteVector(int da, int db, Vector amp);

    /// The amplitudes reshaped as a dA x dB matrix C with C(a,b) the
    /// coefficient of |a>|b>.
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
    as_matrix() const {
        return {amplitudes.data(), dA, dB};
    }
};

/// Ordered orthonormal frame of k bipartite vectors spanning a subspace.
struct Subspace {
    int dA = 0;
    int dB = 0;
    int k = 0;
    std::vector<BipartiteVector> frame;

    Subspace() = default;
    /// Columns of `frame_columns` are the frame vectors; orthonormality is
    /// checked to `tol` unless `raw`.
    Subspace(int da, int db, Matrix frame_columns, double tol = 1e-10, bool raw = false);

    Matrix frame_matrix() const;
    /// Max |<theta_i|theta_j> - delta_ij|.
    double gram_deviation() const;
};

/// Dense d x d unitary.
struct Unitary {
    int d = 0;
    Matrix entries;

    Unitary() = default;
    explicit Unitary(Matrix m, double tol = 1e-10);
    static Unitary identity(int d);
};

/// Real d^2-parameter chart of U(d): the first d entries are the imaginary
/// diagonal of a skew-Hermitian generator A, the remaining d(d-1)/2 pairs are
/// (Re, Im) of the strictly upper entries; the unitary is exp(A).
struct UnitaryParams {
    int d = 0;
    RealVector params;

    UnitaryParams() = default;
    UnitaryParams(int dim, RealVector p);
    static UnitaryParams zero(int d) { return {d, RealVector::Zero(d * d)}; }
};

/// Residuals phi(i,a): for basis state i and first-stage outcome a, the
/// unnormalized leftover vector on the unmeasured factor.
struct ResidualTable {
    int dim = 0;  // dimension of the unmeasured factor
    int k = 0;    // number of basis states
    int m = 0;    // number of measurement outcomes
    std::vector<std::vector<Vector>> residuals;  // [i][a]

    const Vector& at(int i, int a) const { return residuals[i][a]; }
};

/// Skew-Hermitian generator of the exp chart.
Matrix skew_generator(const UnitaryParams& p);
/// Inverse of skew_generator (principal branch is handled by params_from_unitary).
UnitaryParams params_from_generator(const Matrix& skew);

Unitary unitary_from_params(const UnitaryParams& p);
/// Principal matrix logarithm of a unitary, returned in chart coordinates;
/// unitary_from_params(params_from_unitary(U)) reproduces U.
UnitaryParams params_from_unitary(const Unitary& u);

/// Haar-distributed d x d unitary drawn from the stream (Gaussian + QR with
/// the positive-diagonal-R phase convention).
Unitary haar_random_unitary(int d, RandomStream& rng);

/// Orthonormal k-frame in C^dA (x) C^dB distributed by Haar measure,
/// fully determined by the seed.
Subspace haar_random_subspace(int dA, int dB, int k, std::uint64_t seed);

/// New frame |psi_i> = sum_j w_ij |theta_j>; spans the same subspace.
Subspace apply_basis_change(const Subspace& v, const Unitary& w);

/// Partial-measurement decomposition: columns of M are the measurement
/// vectors |v_a>; phi(i,a) = (<v_a| (x) I)|theta_i> on the first-factor side,
/// (I (x) <v_a|)|theta_i> on the second.
ResidualTable decompose(const Subspace& v, const Unitary& m, Side side);

/// Rebuilds |theta_i> = sum_a |v_a> (x) |phi(i,a)> (or the mirrored form);
/// inverse of decompose.
Matrix reconstruct(const ResidualTable& t, const Unitary& m, Side side);

/// Closest orthonormal frame (polar factor) to the given columns.
Matrix polar_orthonormalize(const Matrix& frame_columns);

}  // namespace locc
