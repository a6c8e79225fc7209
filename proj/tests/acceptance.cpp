// Acceptance suite: one criterion per invocation (argv[1] in 1..8), or all
// when invoked without arguments. Each criterion prints a single [PASS] or
// [FAIL] line with the measured quantities; the exit code is nonzero if any
// requested criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "locc/gram.hpp"
#include "locc/harness.hpp"
#include "locc/objective.hpp"
#include "locc/protocol.hpp"

using namespace locc;

namespace {

bool criterion1() {
    // For each n in 3..9, 100 Haar subspaces searched first-factor-first with
    // at most 20 restarts must all reach H < 1e-6, with the converged mean
    // itself below 1e-6.
    ExperimentSpec spec;
    spec.dims = {3, 4, 5, 6, 7, 8, 9};
    spec.samples = 100;
    spec.search.seed = 1;
    const auto rows = run_table1(spec);
    bool ok = true;
    double worst_mean = 0.0;
    long total_failed = 0;
    for (const Table1Row& r : rows) {
        total_failed += r.total - r.converged;
        worst_mean = std::max(worst_mean, r.average_h_converged);
        if (r.converged != r.total || r.average_h_converged >= 1e-6) ok = false;
        std::printf("  n=%d: %ld/%ld converged, mean converged H = %.3e (%.1fs)\n", r.n,
                    r.converged, r.total, r.average_h_converged, r.seconds);
    }
    std::printf("[%s] criterion 1: desk-scale scan, %ld/700 unconverged, worst mean H = %.3e\n",
                ok ? "PASS" : "FAIL", total_failed, worst_mean);
    return ok;
}

bool criterion2() {
    // The embedded C^3 (x) C^5 frame must converge measuring the C^3 factor
    // first and fail to converge measuring the C^5 factor first across 200
    // restarts, with a positive floor stable within a factor of 2 across two
    // disjoint seed streams.
    SearchConfig cfg;
    cfg.restarts = 200;
    cfg.seed = 11;
    const AppendixBReport a = run_appendix_b(cfg);
    cfg.seed = 22;
    const AppendixBReport b = run_appendix_b(cfg);
    const double floor_a = a.reverse.h_min;
    const double floor_b = b.reverse.h_min;
    const double ratio =
        std::max(floor_a, floor_b) / std::max(std::min(floor_a, floor_b), 1e-300);
    const bool ok = a.forward.converged && !a.reverse.converged && !b.reverse.converged &&
                    floor_a > 0.0 && floor_b > 0.0 && ratio <= 2.0;
    std::printf("  forward: H = %.3e (converged=%d)\n", a.forward.h_min,
                static_cast<int>(a.forward.converged));
    std::printf("  reverse stream A: H = %.3e (converged=%d, restarts=%d)\n", floor_a,
                static_cast<int>(a.reverse.converged), a.reverse.restarts_used);
    std::printf("  reverse stream B: H = %.3e (converged=%d, restarts=%d)\n", floor_b,
                static_cast<int>(b.reverse.converged), b.reverse.restarts_used);
    if (a.reverse.converged || b.reverse.converged)
        std::printf(
            "  NOTE: the reverse-direction search converges on the embedded frame; an exact\n"
            "  two-stage protocol measuring the larger factor first exists for this data\n"
            "  (verified independently). The expected positive floor does not materialize.\n");
    std::printf("[%s] criterion 2: embedded-example asymmetry\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion3() {
    // Among 200 Haar subspaces of C^3 (x) C^5 searched second-factor-first at
    // least one must fail to converge; among 200 of C^3 (x) C^4, none may.
    SearchConfig cfg;
    cfg.seed = 3;
    cfg.side = Side::SecondFactor;
    const ReverseScanSummary s5 = run_reverse_scan(3, 5, 200, cfg);
    const ReverseScanSummary s4 = run_reverse_scan(3, 4, 200, cfg);
    std::printf("  dB=5: %ld/%ld failed (min failing floor %.3e)\n", s5.failed, s5.samples,
                s5.min_failed_floor);
    std::printf("  dB=4: %ld/%ld failed\n", s4.failed, s4.samples);
    const bool ok = s5.failed >= 1 && s4.failed == 0;
    if (s5.failed == 0)
        std::printf(
            "  NOTE: zero reverse-direction failures at dB=5. Every sampled subspace admits a\n"
            "  basis distinguishable measuring the C^5 factor first at this search depth.\n");
    std::printf("[%s] criterion 3: reverse-scan asymmetry\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion4() {
    SearchConfig cfg;
    cfg.seed = 4;
    // The commutator check needs every instance converged; rare hard
    // instances take a deeper search than the scan defaults.
    cfg.restarts = 100;
    cfg.max_iterations = 2000;
    const GramCheckSummary s = run_gram_check(100, cfg);
    const bool ok = s.converged == 100 && s.max_commutator_norm < 1e-5 && s.max_backward_h < 1e-8;
    std::printf("  %ld/100 converged, max commutator norm %.3e, max backward H %.3e\n",
                s.converged, s.max_commutator_norm, s.max_backward_h);
    std::printf("[%s] criterion 4: Gram equivalence suite\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion5() {
    // Environment reduction from n = 20 to n = 9 must leave h_min unchanged
    // to 1e-5 on 20 Haar subspaces.
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Subspace v = haar_random_subspace(3, 20, 3, mix_seed(5, i));
        SearchConfig cfg;
        cfg.seed = mix_seed(50, i);
        const SearchResult full = minimize_h(v, cfg);
        const SearchResult reduced = minimize_h(reduce_environment(v), cfg);
        const double diff = std::abs(full.h_min - reduced.h_min);
        worst = std::max(worst, diff);
        if (diff >= 1e-5 || !full.converged || !reduced.converged) ok = false;
    }
    std::printf("  worst |h_min(n=20) - h_min(n=9)| = %.3e over 20 subspaces\n", worst);
    std::printf("[%s] criterion 5: environment reduction\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion6() {
    bool ok = true;
    // Analytic gradient vs central finite differences on 100 random points.
    double worst_rel = 0.0;
    for (int t = 0; t < 100; ++t) {
        RandomStream rng(mix_seed(6, t));
        const int dB = 3 + (t % 4);
        const Subspace v = haar_random_subspace(3, dB, 3, mix_seed(60, t));
        const Side side = t % 2 ? Side::SecondFactor : Side::FirstFactor;
        const int dM = side == Side::FirstFactor ? 3 : dB;
        RealVector pw(9), pm(dM * dM);
        for (int j = 0; j < pw.size(); ++j) pw[j] = 0.5 * rng.gaussian();
        for (int j = 0; j < pm.size(); ++j) pm[j] = 0.5 * rng.gaussian();
        const RealVector g =
            objective_gradient(v, UnitaryParams(3, pw), UnitaryParams(dM, pm), side);
        RealVector fd(g.size());
        const double h = 1e-5;
        for (int j = 0; j < g.size(); ++j) {
            RealVector wp = pw, wm = pm, wp2 = pw, wm2 = pm;
            if (j < 9) {
                wp[j] += h;
                wp2[j] -= h;
            } else {
                wm[j - 9] += h;
                wm2[j - 9] -= h;
            }
            fd[j] = (objective_value(v, UnitaryParams(3, wp), UnitaryParams(dM, wm), side) -
                     objective_value(v, UnitaryParams(3, wp2), UnitaryParams(dM, wm2), side)) /
                    (2 * h);
        }
        const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-12);
        worst_rel = std::max(worst_rel, rel);
    }
    if (worst_rel >= 1e-5) ok = false;
    std::printf("  gradient vs central differences: worst relative error %.3e\n", worst_rel);

    // Gram construction invariants on 1000 random inputs.
    double worst_trace = 0.0, worst_psd = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Subspace v = haar_random_subspace(3, 3 + (t % 7), 3, mix_seed(61, t));
        RandomStream rng(mix_seed(62, t));
        const BlockGram g = build_gram(v, haar_random_unitary(3, rng));
        const Matrix tr = g.block(0, 0) + g.block(1, 1) + g.block(2, 2);
        worst_trace = std::max(worst_trace, (tr - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Matrix> es(g.entries, Eigen::EigenvaluesOnly);
        worst_psd = std::max(worst_psd, -es.eigenvalues().minCoeff());
    }
    if (worst_trace >= 1e-12 || worst_psd >= 1e-12) ok = false;
    std::printf("  block trace deviation %.3e, PSD violation %.3e over 1000 inputs\n",
                worst_trace, worst_psd);

    // Canonical-form round trip.
    double worst_rt = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Subspace v = haar_random_subspace(3, 4 + (t % 6), 3, mix_seed(63, t));
        RandomStream rng(mix_seed(64, t));
        const BlockGram g = build_gram(v, haar_random_unitary(3, rng));
        const BlockGram back = build_gram(gram_to_subspace(g), Unitary::identity(3));
        worst_rt = std::max(worst_rt, (back.entries - g.entries).cwiseAbs().maxCoeff());
    }
    if (worst_rt >= 1e-10) ok = false;
    std::printf("  canonical-form round trip deviation %.3e over 100 inputs\n", worst_rt);
    std::printf("[%s] criterion 6: numerical hygiene\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion7() {
    // Every converged search must yield a protocol whose exactly computed
    // maximum misidentification probability is below 1e-5.
    bool ok = true;
    long converged = 0;
    double worst = 0.0;
    auto check_point = [&](const Subspace& v, const SearchResult& res) {
        if (!res.converged) return;
        ++converged;
        try {
            const TwoStageProtocol p =
                extract_protocol(v, res.basis_selector, res.measurement, Side::FirstFactor);
            const double mis = verify_protocol(v, res.basis_selector, p);
            worst = std::max(worst, mis);
            if (mis >= 1e-5) ok = false;
        } catch (const std::exception& e) {
            std::printf("  extraction failed at H = %.3e: %s\n", res.h_min, e.what());
            ok = false;
        }
    };
    for (int n = 3; n <= 9; ++n)
        for (int i = 0; i < 10; ++i) {
            const Subspace v = haar_random_subspace(3, n, 3, mix_seed(700 + n, i));
            SearchConfig cfg;
            cfg.seed = mix_seed(70, mix_seed(n, i));
            check_point(v, minimize_h(v, cfg));
        }
    {
        SearchConfig cfg;
        cfg.seed = 7;
        const Subspace v = appendix_b_subspace();
        check_point(v, minimize_h(v, cfg));
    }
    std::printf("  %ld converged searches, worst exact misidentification %.3e\n", converged,
                worst);
    if (converged < 71) ok = false;
    std::printf("[%s] criterion 7: protocol chain\n", ok ? "PASS" : "FAIL");
    return ok;
}

bool criterion8() {
    // Identical seeds must reproduce every experiment bit for bit.
    bool ok = true;
    ExperimentSpec spec;
    spec.dims = {3, 5};
    spec.samples = 5;
    spec.search.seed = 8;
    const auto t1 = run_table1(spec);
    const auto t2 = run_table1(spec);
    for (size_t i = 0; i < t1.size(); ++i)
        if (t1[i].average_h_converged != t2[i].average_h_converged ||
            t1[i].average_h_all != t2[i].average_h_all || t1[i].converged != t2[i].converged)
            ok = false;

    SearchConfig cfg;
    cfg.seed = 80;
    const AppendixBReport a1 = run_appendix_b(cfg);
    const AppendixBReport a2 = run_appendix_b(cfg);
    if (a1.forward.h_min != a2.forward.h_min || a1.reverse.h_min != a2.reverse.h_min ||
        a1.reverse_pair.h_min != a2.reverse_pair.h_min)
        ok = false;

    cfg.side = Side::SecondFactor;
    const ReverseScanSummary r1 = run_reverse_scan(3, 5, 10, cfg);
    const ReverseScanSummary r2 = run_reverse_scan(3, 5, 10, cfg);
    if (r1.failed != r2.failed || r1.min_failed_floor != r2.min_failed_floor) ok = false;

    SearchConfig gc;
    gc.seed = 81;
    const GramCheckSummary g1 = run_gram_check(5, gc);
    const GramCheckSummary g2 = run_gram_check(5, gc);
    if (g1.max_commutator_norm != g2.max_commutator_norm ||
        g1.max_backward_h != g2.max_backward_h)
        ok = false;

    std::printf("[%s] criterion 8: determinism under identical seeds\n", ok ? "PASS" : "FAIL");
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                            criterion5, criterion6, criterion7, criterion8};
    bool all_ok = true;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 8) {
            std::fprintf(stderr, "usage: acceptance [1..8]\n");
            return 2;
        }
        all_ok = criteria[k - 1]();
    } else {
        for (auto* c : criteria) all_ok = c() && all_ok;
    }
    return all_ok ? 0 : 1;
}
