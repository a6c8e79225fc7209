#pragma once

#include <vector>

#include "locc/core.hpp"
#include "locc/objective.hpp"

namespace locc {

/// Measurement order between the channel output (system) and the dilation
/// environment. EnvToSys measures the environment first.
enum class Direction { EnvToSys, SysToEnv };

/// Trace-preserving channel given by Kraus operators K_k (d_out x d_in).
struct KrausChannel {
    int d_in = 0;
    int d_out = 0;
    std::vector<Matrix> kraus;

    KrausChannel() = default;
    KrausChannel(int din, int dout, std::vector<Matrix> ops, double tp_tol = 1e-10);

    /// Unnormalized Choi matrix sum_ij |i><j| (x) Phi(|i><j|), size
    /// (d_in*d_out)^2, composite index i*d_out + a.
    Matrix choi() const;
};

/// Rank of the Choi matrix: the minimal environment dimension / minimal
/// Kraus count.
int channel_rank(const KrausChannel& c);

/// Equivalent channel with exactly channel_rank(c) Kraus operators, from the
/// Choi eigendecomposition.
KrausChannel rank_reduce(const KrausChannel& c);

/// The d_in-frame {sum_k K_k|i> (x) |k>} in C^d_out (x) C^rank spanning the
/// Stinespring subspace; the first factor is the system output, the second
/// the environment.
Subspace stinespring_subspace(const KrausChannel& c);

/// Which factor of the Stinespring subspace is measured first for a given
/// direction.
inline Side measurement_side(Direction dir) {
    return dir == Direction::EnvToSys ? Side::SecondFactor : Side::FirstFactor;
}

struct NEstimate {
    int n = 1;  // certified lower bound on the distinguishable count
    std::vector<SearchResult> evidence;  // results for m = d_in, d_in-1, ..., witness last
};

/// Largest m <= d_in for which a converged search certifies m reliably
/// distinguishable orthonormal inputs for the given measurement direction.
NEstimate estimate_n(const KrausChannel& c, Direction dir, const SearchConfig& cfg);

}  // namespace locc
