#include "locc/protocol.hpp"

#include <cmath>

#include "locc/objective.hpp"

namespace locc {

namespace {
constexpr double kZeroResidual = 1e-8;
}

TwoStageProtocol extract_protocol(const Subspace& v, const Unitary& w, const Unitary& m,
                                  Side side) {
    const double h = objective_h(v, w, m, side);
    if (h >= 1e-8)
        throw InvariantError("extract_protocol: H = " + std::to_string(h) +
                             " is above tolerance, protocol would be unreliable");
    const ResidualTable t = decompose(apply_basis_change(v, w), m, side);
    TwoStageProtocol p;
    p.side = side;
    p.first_stage = m;
    p.second_stage.resize(t.m);
    p.assignment.resize(t.m);
    for (int a = 0; a < t.m; ++a) {
        Matrix basis(t.dim, t.dim);
        std::vector<int>& assign = p.assignment[a];
        int col = 0;
        // Residual directions first (nearly orthogonal already; Gram-Schmidt
        // removes the O(sqrt(H)) overlaps), then a standard-basis completion
        // mapped to reject.
        for (int i = 0; i < t.k; ++i) {
            Vector u = t.at(i, a);
            if (u.norm() < kZeroResidual) continue;
            for (int c = 0; c < col; ++c) u -= basis.col(c).dot(u) * basis.col(c);
            basis.col(col) = u / u.norm();
            assign.push_back(i);
            ++col;
        }
        for (int e = 0; e < t.dim && col < t.dim; ++e) {
            Vector u = Vector::Zero(t.dim);
            u[e] = 1.0;
            for (int c = 0; c < col; ++c) u -= basis.col(c).dot(u) * basis.col(c);
            if (u.norm() < 1e-6) continue;  // dependent candidate
            basis.col(col) = u / u.norm();
            assign.push_back(-1);
            ++col;
        }
        if (col != t.dim)
            throw InvariantError("extract_protocol: basis completion failed");
        p.second_stage[a] = std::move(basis);
    }
    return p;
}

double verify_protocol(const Subspace& v, const Unitary& w, const TwoStageProtocol& p,
                       long /*trials*/, std::uint64_t /*seed*/) {
    const ResidualTable t = decompose(apply_basis_change(v, w), p.first_stage, p.side);
    double worst = 0.0;
    for (int i = 0; i < t.k; ++i) {
        double excluded = 0.0;
        for (int a = 0; a < t.m; ++a) {
            const Matrix& basis = p.second_stage[a];
            for (int b = 0; b < basis.cols(); ++b) {
                if (p.assignment[a][b] == i) continue;
                excluded += std::norm(basis.col(b).dot(t.at(i, a)));
            }
        }
        worst = std::max(worst, excluded);
    }
    return worst;
}

}  // namespace locc
