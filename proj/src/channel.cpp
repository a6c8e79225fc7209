#include "locc/channel.hpp"

#include <Eigen/Eigenvalues>

namespace locc {

KrausChannel::KrausChannel(int din, int dout, std::vector<Matrix> ops, double tp_tol)
    : d_in(din), d_out(dout), kraus(std::move(ops)) {
    if (d_in <= 0 || d_out <= 0) throw DimensionError("KrausChannel: dimensions must be positive");
    if (kraus.empty()) throw DimensionError("KrausChannel: at least one Kraus operator required");
    Matrix sum = Matrix::Zero(d_in, d_in);
    for (const Matrix& k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in)
            throw DimensionError("KrausChannel: Kraus operators must be d_out x d_in");
        sum += k.adjoint() * k;
    }
    if ((sum - Matrix::Identity(d_in, d_in)).norm() > tp_tol)
        throw InvariantError("KrausChannel: channel is not trace preserving");
}

Matrix KrausChannel::choi() const {
    const Eigen::Index dim = static_cast<Eigen::Index>(d_in) * d_out;
    Matrix choi = Matrix::Zero(dim, dim);
    for (const Matrix& k : kraus) {
        Vector v(dim);
        for (int i = 0; i < d_in; ++i)
            for (int a = 0; a < d_out; ++a) v[static_cast<Eigen::Index>(i) * d_out + a] = k(a, i);
        choi += v * v.adjoint();
    }
    return choi;
}

namespace {

struct ChoiSpectrum {
    RealVector evals;
    Matrix evecs;
    int rank;
};

ChoiSpectrum choi_spectrum(const KrausChannel& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.choi());
    const double lmax = es.eigenvalues().maxCoeff();
    int rank = 0;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
        if (es.eigenvalues()[j] > 1e-10 * lmax) ++rank;
    return {es.eigenvalues(), es.eigenvectors(), rank};
}

}  // namespace

int channel_rank(const KrausChannel& c) { return choi_spectrum(c).rank; }

KrausChannel rank_reduce(const KrausChannel& c) {
    const ChoiSpectrum spec = choi_spectrum(c);
    std::vector<Matrix> ops;
    ops.reserve(spec.rank);
    const Eigen::Index total = spec.evals.size();
    // Eigenvalues come sorted ascending; keep the top `rank` in descending order.
    for (Eigen::Index j = total - 1; j >= total - spec.rank; --j) {
        const Vector v = std::sqrt(spec.evals[j]) * spec.evecs.col(j);
        Matrix k(c.d_out, c.d_in);
        for (int i = 0; i < c.d_in; ++i)
            for (int a = 0; a < c.d_out; ++a) k(a, i) = v[static_cast<Eigen::Index>(i) * c.d_out + a];
        ops.push_back(std::move(k));
    }
    return KrausChannel(c.d_in, c.d_out, std::move(ops), 1e-8);
}

Subspace stinespring_subspace(const KrausChannel& c) {
    const KrausChannel minimal = rank_reduce(c);
    const int r = static_cast<int>(minimal.kraus.size());
    Matrix frame(static_cast<Eigen::Index>(c.d_out) * r, c.d_in);
    for (int i = 0; i < c.d_in; ++i)
        for (int a = 0; a < c.d_out; ++a)
            for (int k = 0; k < r; ++k)
                frame(static_cast<Eigen::Index>(a) * r + k, i) = minimal.kraus[k](a, i);
    // Trace preservation makes the frame orthonormal up to round-off.
    return Subspace(c.d_out, r, polar_orthonormalize(frame));
}

NEstimate estimate_n(const KrausChannel& c, Direction dir, const SearchConfig& cfg) {
    const Subspace v = stinespring_subspace(c);
    SearchConfig run_cfg = cfg;
    run_cfg.side = measurement_side(dir);
    NEstimate est;
    est.n = 1;  // a single state is always identified
    for (int m = c.d_in; m >= 2; --m) {
        SearchResult res = m == v.k ? minimize_h(v, run_cfg) : minimize_h_partial(v, m, run_cfg);
        const bool ok = res.converged;
        est.evidence.push_back(std::move(res));
        if (ok) {
            est.n = m;
            break;
        }
    }
    return est;
}

}  // namespace locc
