#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "locc/core.hpp"

namespace locc {

struct SearchConfig {
    int restarts = 20;
    int max_iterations = 400;
    double success_threshold = 1e-6;
    double gradient_tolerance = 1e-12;
    std::uint64_t seed = 0;
    Side side = Side::FirstFactor;
    bool record_trace = false;

    void validate() const {
        if (restarts < 1) throw DimensionError("SearchConfig: restarts must be >= 1");
        if (max_iterations < 1) throw DimensionError("SearchConfig: max_iterations must be >= 1");
        if (success_threshold <= 0) throw DimensionError("SearchConfig: threshold must be > 0");
        if (gradient_tolerance < 0) throw DimensionError("SearchConfig: gradient tolerance < 0");
    }
};

struct SearchResult {
    double h_min = 0.0;
    Unitary basis_selector;  // W, acting on the frame
    Unitary measurement;     // first-stage measurement basis
    bool converged = false;
    int restarts_used = 0;
    long total_iterations = 0;
    std::vector<double> trace;  // best-so-far H per iteration of the best restart
};

/// H(B, M) = sum_a sum_{i != j} |<phi(i,a)|phi(j,a)>|^2 over the residuals of
/// the W-rotated frame under measurement M. Zero iff the rotated basis is
/// reliably distinguished by measuring M first.
double objective_h(const Subspace& v, const Unitary& w, const Unitary& m, Side side);

/// H evaluated through the exp chart at (pW, pM).
double objective_value(const Subspace& v, const UnitaryParams& pw, const UnitaryParams& pm,
                       Side side);

/// Gradient of H with respect to the concatenated real parameters (pW, pM).
RealVector objective_gradient(const Subspace& v, const UnitaryParams& pw, const UnitaryParams& pm,
                              Side side);

/// Multistart local minimization of H over (W, M); deterministic in cfg.seed.
SearchResult minimize_h(const Subspace& v, const SearchConfig& cfg);

/// Same search but only the first m rotated basis vectors must be
/// distinguished (isometric slice of W).
SearchResult minimize_h_partial(const Subspace& v, int m, const SearchConfig& cfg);

}  // namespace locc
