#pragma once

#include <functional>
#include <string>
#include <vector>

#include "locc/objective.hpp"
#include "locc/serialize.hpp"

namespace locc {

struct ChecksumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    enum class Kind { Table1, AppendixB, Minimize, Channel, GramCheck, ReverseScan };
    enum class Format { Json, Csv };

    Kind kind = Kind::Table1;
    std::vector<int> dims = {3, 4, 5, 6, 7, 8, 9};
    int samples = 100;
    SearchConfig search;
    std::string out_path;
    Format format = Format::Json;

    void validate() const;
};

struct Table1Row {
    int n = 0;
    double average_h_converged = 0.0;  // mean H over converged samples
    double average_h_all = 0.0;        // mean best H over every sample
    long converged = 0;
    long total = 0;
    double seconds = 0.0;
};

struct AppendixBReport {
    double orthonormality_deviation = 0.0;  // frame distance of the printed data
    SearchResult forward;       // measure C^3 first
    SearchResult reverse;       // measure C^5 first
    SearchResult reverse_pair;  // m = 2 slice, measure C^5 first
};

struct ReverseScanSummary {
    int dA = 0;
    int dB = 0;
    long samples = 0;
    long failed = 0;
    double failing_fraction = 0.0;
    double min_failed_floor = 0.0;  // smallest h_min among failing samples
    std::vector<std::string> artifact_paths;
};

struct GramCheckSummary {
    long samples = 0;
    long converged = 0;                // forward searches that reached the threshold
    double max_commutator_norm = 0.0;  // forward path, at converged optima
    double max_backward_h = 0.0;       // planted commuting Gram -> diagonalizer -> H
};

/// The Appendix B frame in C^3 (x) C^5: the printed four-decimal vectors,
/// checksum-verified and replaced by the closest orthonormal frame (polar
/// decomposition); the distance is reported through `deviation_out`.
Subspace appendix_b_subspace(double* deviation_out = nullptr);

std::vector<Table1Row> run_table1(const ExperimentSpec& spec);
AppendixBReport run_appendix_b(const SearchConfig& cfg);
/// Persists every failing subspace under `artifact_dir` when non-empty.
ReverseScanSummary run_reverse_scan(int dA, int dB, long samples, const SearchConfig& cfg,
                                    const std::string& artifact_dir = "");
GramCheckSummary run_gram_check(long samples, const SearchConfig& cfg);

Json table1_to_json(const std::vector<Table1Row>& rows, const ExperimentSpec& spec);
std::string table1_to_csv(const std::vector<Table1Row>& rows);
Json appendix_b_to_json(const AppendixBReport& report, const SearchConfig& cfg);
Json reverse_scan_to_json(const ReverseScanSummary& s, const SearchConfig& cfg);
std::string reverse_scan_to_csv(const ReverseScanSummary& s);
Json gram_check_to_json(const GramCheckSummary& s, const SearchConfig& cfg);

/// Runs fn(i) for i in [0, count) on a bounded worker pool (LOCC_WORKERS caps
/// the size); results must be written to per-index slots so the outcome is
/// independent of scheduling.
void parallel_for(long count, const std::function<void(long)>& fn);

}  // namespace locc
