#pragma once

#include <vector>

#include "locc/core.hpp"

namespace locc {

/// Explicit two-stage one-way LOCC measurement: a basis on the first-measured
/// factor, then a per-outcome basis on the other factor. Combined outcome
/// (a, b) is assigned to a basis state index, or to -1 (reject: an outcome
/// that occurs with probability zero for every basis state).
struct TwoStageProtocol {
    Side side = Side::FirstFactor;
    Unitary first_stage;
    std::vector<Matrix> second_stage;          // [a]: full orthonormal basis, columns
    std::vector<std::vector<int>> assignment;  // [a][b] -> state index or -1
};

/// Turns a converged search point (H < 1e-8) into an explicit protocol by
/// normalizing the per-outcome residuals and completing them to orthonormal
/// bases.
TwoStageProtocol extract_protocol(const Subspace& v, const Unitary& w, const Unitary& m,
                                  Side side);

/// Exactly computed maximum (over basis states) probability of an outcome
/// outside the state's assigned set. `trials` is reserved for an optional
/// Monte Carlo cross-check and does not affect the returned value.
double verify_protocol(const Subspace& v, const Unitary& w, const TwoStageProtocol& p,
                       long trials = 0, std::uint64_t seed = 0);

}  // namespace locc
