#include "locc/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "locc/gram.hpp"

namespace locc {

void ExperimentSpec::validate() const {
    if (samples < 1) throw DimensionError("ExperimentSpec: samples must be >= 1");
    if (kind == Kind::Table1)
        for (int n : dims)
            if (n < 3 || n > 9)
                throw DimensionError("ExperimentSpec: table1 dims must lie in 3..9");
    search.validate();
}

void parallel_for(long count, const std::function<void(long)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("LOCC_WORKERS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1) workers = static_cast<unsigned>(requested);
    }
    if (workers <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

// Appendix data: three vectors in C^3 (x) C^5 at four-decimal precision,
// stored as interleaved (re, im) pairs in the a*5 + b amplitude layout.
constexpr double kCounterexampleData[3][30] = {
    {-0.2450, -0.0054, -0.1694, 0.0815, 0.1071, -0.3191, 0.0655, -0.3190, -0.1911, -0.1862,
     0.1185, 0.3259, -0.2530, 0.0480, 0.1194, -0.1987, 0.1948, -0.2106, 0.0595, 0.2934,
     0.1286, -0.1427, -0.1420, 0.1308, -0.2367, 0.1399, 0.1384, -0.0264, 0.0867, 0.1573},
    {0.1438, 0.2108, -0.3214, 0.1308, 0.1229, 0.0319, 0.1775, -0.1070, 0.2091, -0.1811,
     -0.0937, 0.1880, 0.1609, 0.0272, 0.1705, 0.0996, -0.0630, 0.0729, 0.3389, -0.1242,
     0.0201, -0.2668, 0.1127, -0.3331, 0.2338, 0.3325, -0.1798, -0.0796, -0.1097, 0.1360},
    {0.0390, -0.0484, 0.0405, -0.2603, 0.2206, 0.2432, -0.2843, -0.0751, -0.2416, -0.1380,
     0.0510, 0.3270, 0.1691, 0.0829, -0.3761, -0.1033, 0.0988, 0.1388, 0.3138, 0.2228,
     0.0553, 0.2272, 0.0468, -0.0164, 0.1966, -0.1044, -0.0147, 0.1239, -0.2313, 0.0715}};

constexpr std::uint64_t kCounterexampleChecksum = 0xcb51d40a020e7ac6ULL;

std::uint64_t fnv1a_doubles(const double* data, std::size_t count) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(double));
        std::memcpy(&bits, &data[i], sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xffULL;
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

}  // namespace

Subspace appendix_b_subspace(double* deviation_out) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 3; ++i) {
        const std::uint64_t h = fnv1a_doubles(kCounterexampleData[i], 30);
        hash ^= h;
        hash *= 0x100000001b3ULL;
    }
    if (hash != kCounterexampleChecksum)
        throw ChecksumError("appendix_b_subspace: embedded data failed its checksum");
    Matrix raw(15, 3);
    for (int i = 0; i < 3; ++i)
        for (int x = 0; x < 15; ++x)
            raw(x, i) = Complex(kCounterexampleData[i][2 * x], kCounterexampleData[i][2 * x + 1]);
    // The printed data is orthonormal only to its four printed decimals; use
    // the closest orthonormal frame and report the distance.
    const Matrix frame = polar_orthonormalize(raw);
    if (deviation_out) *deviation_out = (frame - raw).norm();
    return Subspace(3, 5, frame);
}

std::vector<Table1Row> run_table1(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Table1Row> rows;
    rows.reserve(spec.dims.size());
    for (int n : spec.dims) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<SearchResult> results(spec.samples);
        parallel_for(spec.samples, [&](long i) {
            const std::uint64_t sample_seed =
                mix_seed(mix_seed(spec.search.seed, static_cast<std::uint64_t>(n)),
                         static_cast<std::uint64_t>(i));
            const Subspace v = haar_random_subspace(3, n, 3, sample_seed);
            SearchConfig cfg = spec.search;
            cfg.seed = mix_seed(sample_seed, 0x7ab1e1ULL);
            results[i] = minimize_h(v, cfg);
        });
        Table1Row row;
        row.n = n;
        row.total = spec.samples;
        double sum_conv = 0.0, sum_all = 0.0;
        for (const SearchResult& r : results) {
            sum_all += r.h_min;
            if (r.converged) {
                ++row.converged;
                sum_conv += r.h_min;
            }
        }
        row.average_h_converged = row.converged ? sum_conv / row.converged : 0.0;
        row.average_h_all = spec.samples ? sum_all / spec.samples : 0.0;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(row);
    }
    return rows;
}

AppendixBReport run_appendix_b(const SearchConfig& cfg) {
    AppendixBReport report;
    const Subspace v = appendix_b_subspace(&report.orthonormality_deviation);
    SearchConfig forward = cfg;
    forward.side = Side::FirstFactor;
    report.forward = minimize_h(v, forward);
    SearchConfig reverse = cfg;
    reverse.side = Side::SecondFactor;
    report.reverse = minimize_h(v, reverse);
    report.reverse_pair = minimize_h_partial(v, 2, reverse);
    return report;
}

ReverseScanSummary run_reverse_scan(int dA, int dB, long samples, const SearchConfig& cfg,
                                    const std::string& artifact_dir) {
    cfg.validate();
    ReverseScanSummary s;
    s.dA = dA;
    s.dB = dB;
    s.samples = samples;
    std::vector<SearchResult> results(samples);
    std::vector<std::uint64_t> seeds(samples);
    parallel_for(samples, [&](long i) {
        seeds[i] = mix_seed(cfg.seed, static_cast<std::uint64_t>(i));
        const Subspace v = haar_random_subspace(dA, dB, 3, seeds[i]);
        SearchConfig run = cfg;
        run.seed = mix_seed(seeds[i], 0x5ca41ULL);
        results[i] = minimize_h(v, run);
    });
    double floor = std::numeric_limits<double>::infinity();
    for (long i = 0; i < samples; ++i) {
        if (results[i].converged) continue;
        ++s.failed;
        floor = std::min(floor, results[i].h_min);
        if (!artifact_dir.empty()) {
            std::filesystem::create_directories(artifact_dir);
            const Subspace v = haar_random_subspace(dA, dB, 3, seeds[i]);
            SearchConfig run = cfg;
            run.seed = mix_seed(seeds[i], 0x5ca41ULL);
            Json artifact{{"subspace", subspace_to_json(v)},
                          {"sample_seed", seeds[i]},
                          {"result", search_result_to_json(results[i], run)}};
            std::ostringstream name;
            name << artifact_dir << "/fail_" << dA << "x" << dB << "_" << i << ".json";
            write_json_file(name.str(), artifact);
            s.artifact_paths.push_back(name.str());
        }
    }
    s.failing_fraction = samples ? static_cast<double>(s.failed) / samples : 0.0;
    s.min_failed_floor = s.failed ? floor : 0.0;
    return s;
}

GramCheckSummary run_gram_check(long samples, const SearchConfig& cfg) {
    cfg.validate();
    GramCheckSummary s;
    s.samples = samples;
    std::vector<double> commutators(samples, 0.0), backward(samples, 0.0);
    std::vector<char> converged(samples, 0);
    parallel_for(samples, [&](long i) {
        const std::uint64_t sample_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i));
        // Forward: minimize, then check the commutator criterion at the optimum.
        const Subspace v = haar_random_subspace(3, 3, 3, sample_seed);
        SearchConfig run = cfg;
        run.side = Side::FirstFactor;
        run.seed = mix_seed(sample_seed, 0x9a3fULL);
        const SearchResult res = minimize_h(v, run);
        if (res.converged) {
            converged[i] = 1;
            const BlockGram g = build_gram(apply_basis_change(v, res.basis_selector), res.measurement);
            commutators[i] = diagonal_block_commutator_norm(g);
        }
        // Backward: plant a Gram matrix with commuting diagonal blocks and
        // recover H ~ 0 via the simultaneous diagonalizer.
        RandomStream rng(mix_seed(sample_seed, 0xb0c4ULL));
        const Unitary q = haar_random_unitary(3, rng);
        Matrix m9 = Matrix::Zero(9, 9);
        for (int t = 0; t < 3; ++t) {
            // Random simplex weights: eigenvalues of the three blocks per slot.
            double w[3];
            double total = 0.0;
            for (double& x : w) total += (x = -std::log(1.0 - rng.uniform()));
            for (int a = 0; a < 3; ++a) {
                const Matrix ba = (w[a] / total) * q.entries.col(t) * q.entries.col(t).adjoint();
                m9.block(3 * a, 3 * a, 3, 3) += ba;
            }
        }
        const BlockGram planted(0.5 * (m9 + Matrix(m9.adjoint())));
        const Subspace sub = gram_to_subspace(planted);
        const Unitary wd = simultaneous_diagonalizer(planted.diagonal_blocks());
        const Unitary wb(Matrix(wd.entries.transpose()));
        backward[i] = objective_h(sub, wb, Unitary::identity(3), Side::FirstFactor);
    });
    for (long i = 0; i < samples; ++i) {
        s.converged += converged[i];
        s.max_commutator_norm = std::max(s.max_commutator_norm, commutators[i]);
        s.max_backward_h = std::max(s.max_backward_h, backward[i]);
    }
    return s;
}

Json table1_to_json(const std::vector<Table1Row>& rows, const ExperimentSpec& spec) {
    Json arr = Json::array();
    for (const Table1Row& r : rows)
        arr.push_back(Json{{"n", r.n},
                           {"average_h_converged", r.average_h_converged},
                           {"average_h_all", r.average_h_all},
                           {"converged", r.converged},
                           {"total", r.total},
                           {"seconds", r.seconds}});
    return Json{{"kind", "table1"},
                {"samples", spec.samples},
                {"config", search_config_to_json(spec.search)},
                {"rows", std::move(arr)}};
}

std::string table1_to_csv(const std::vector<Table1Row>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "n,average_h_converged,average_h_all,converged,total,seconds\n";
    for (const Table1Row& r : rows)
        out << r.n << ',' << r.average_h_converged << ',' << r.average_h_all << ','
            << r.converged << ',' << r.total << ',' << r.seconds << '\n';
    return out.str();
}

Json appendix_b_to_json(const AppendixBReport& report, const SearchConfig& cfg) {
    return Json{{"kind", "appendix-b"},
                {"orthonormality_deviation", report.orthonormality_deviation},
                {"forward", search_result_to_json(report.forward, cfg)},
                {"reverse", search_result_to_json(report.reverse, cfg)},
                {"reverse_pair_m2", search_result_to_json(report.reverse_pair, cfg)}};
}

Json reverse_scan_to_json(const ReverseScanSummary& s, const SearchConfig& cfg) {
    return Json{{"kind", "reverse-scan"},
                {"dA", s.dA},
                {"dB", s.dB},
                {"samples", s.samples},
                {"failed", s.failed},
                {"failing_fraction", s.failing_fraction},
                {"min_failed_floor", s.min_failed_floor},
                {"artifacts", s.artifact_paths},
                {"config", search_config_to_json(cfg)}};
}

std::string reverse_scan_to_csv(const ReverseScanSummary& s) {
    std::ostringstream out;
    out.precision(17);
    out << "dA,dB,samples,failed,failing_fraction,min_failed_floor\n";
    out << s.dA << ',' << s.dB << ',' << s.samples << ',' << s.failed << ','
        << s.failing_fraction << ',' << s.min_failed_floor << '\n';
    return out.str();
}

Json gram_check_to_json(const GramCheckSummary& s, const SearchConfig& cfg) {
    return Json{{"kind", "gram-check"},
                {"samples", s.samples},
                {"converged", s.converged},
                {"max_commutator_norm", s.max_commutator_norm},
                {"max_backward_h", s.max_backward_h},
                {"config", search_config_to_json(cfg)}};
}

}  // namespace locc
