#pragma once

#include <array>

#include "locc/core.hpp"

namespace locc {

/// 9x9 positive semidefinite Gram matrix of residual inner products, viewed
/// as 3x3 blocks M_ab with (M_ab)_ij = <phi(i,a)|phi(j,b)>. Composite index:
/// (a, i) -> 3a + i. The block trace sum M_11 + M_22 + M_33 equals I.
struct BlockGram {
    Matrix entries;

    BlockGram() : entries(Matrix::Zero(9, 9)) {}
    explicit BlockGram(Matrix m, double tol = 1e-10);

    Matrix block(int a, int b) const { return entries.block(3 * a, 3 * b, 3, 3); }
    std::array<Matrix, 3> diagonal_blocks() const { return {block(0, 0), block(1, 1), block(2, 2)}; }
};

/// Gram matrix of the residuals of a 3-frame in C^3 (x) C^n under the
/// first-factor measurement M.
BlockGram build_gram(const Subspace& v, const Unitary& m);

/// (W (x) U) M (W (x) U)^dag with W acting on the basis index i and U on the
/// measurement index a.
BlockGram conjugate_gram(const BlockGram& g, const Unitary& w, const Unitary& u);

/// sum_{a<b} ||[M_aa, M_bb]||_F^2; zero iff the diagonal blocks pairwise
/// commute.
double diagonal_block_commutator_norm(const BlockGram& g);

/// Common eigenbasis W of three pairwise-commuting Hermitian 3x3 matrices:
/// W^dag B_a W is diagonal for each a. Rejects non-commuting input.
Unitary simultaneous_diagonalizer(const std::array<Matrix, 3>& blocks);

/// Canonical 3-frame in C^3 (x) C^9 whose residual Gram matrix under the
/// standard first-factor basis reproduces M (columns of the principal square
/// root).
Subspace gram_to_subspace(const BlockGram& g);

/// Re-expresses a 3-frame in C^3 (x) C^n on the span of its nine residuals,
/// giving an H-equivalent subspace with second factor min(n, 9).
Subspace reduce_environment(const Subspace& v);

}  // namespace locc
