// Command-line front end: batch searches for one-way LOCC distinguishable
// bases of bipartite subspaces, channel analyses, and the block-Gram
// criterion checks. Exit codes: 0 success, 2 invalid input, 3 embedded-data
// checksum failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "locc/channel.hpp"
#include "locc/gram.hpp"
#include "locc/harness.hpp"
#include "locc/protocol.hpp"
#include "locc/serialize.hpp"

namespace {

struct CommonOptions {
    int da = 3;
    int db = 3;
    int samples = 100;
    double threshold = 1e-6;
    int restarts = 20;
    int max_iters = 400;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    std::string side = "first";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--da", opt.da, "first-factor dimension");
    cmd->add_option("--db", opt.db, "second-factor dimension");
    cmd->add_option("--samples", opt.samples, "number of sampled subspaces");
    cmd->add_option("--threshold", opt.threshold, "success threshold on H (default 1e-6)");
    cmd->add_option("--restarts", opt.restarts, "multistart restarts per search");
    cmd->add_option("--max-iters", opt.max_iters, "iteration cap per restart");
    cmd->add_option("--seed", opt.seed, "64-bit master seed");
    cmd->add_option("--out", opt.out_path, "output file path (default: stdout)");
    cmd->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--side", opt.side, "which factor is measured first: first|second")
        ->check(CLI::IsMember({"first", "second"}));
}

locc::SearchConfig to_config(const CommonOptions& opt) {
    locc::SearchConfig cfg;
    cfg.restarts = opt.restarts;
    cfg.max_iterations = opt.max_iters;
    cfg.success_threshold = opt.threshold;
    cfg.seed = opt.seed;
    cfg.side = opt.side == "first" ? locc::Side::FirstFactor : locc::Side::SecondFactor;
    cfg.validate();
    return cfg;
}

void emit(const CommonOptions& opt, const locc::Json& json, const std::string& csv) {
    const std::string text = opt.format == "csv" && !csv.empty() ? csv : json.dump(2) + "\n";
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out_path);
        if (!out) throw std::invalid_argument("cannot write " + opt.out_path);
        out << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical search for one-way LOCC distinguishable subspace bases"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::vector<int> dims = {3, 4, 5, 6, 7, 8, 9};
    std::string input_path;
    std::string direction = "env-sys";
    std::string protocol_path;
    std::string artifact_dir;
    bool raw_load = false;

    CLI::App* table1 = app.add_subcommand("table1", "Haar-subspace sweep over n = 3..9");
    add_common(table1, opt);
    table1->add_option("--dims", dims, "n values to sweep")->delimiter(',');

    CLI::App* appendix_b = app.add_subcommand(
        "appendix-b", "search the embedded C^3 (x) C^5 subspace in both directions");
    add_common(appendix_b, opt);

    CLI::App* reverse = app.add_subcommand(
        "reverse-scan", "sample subspaces and search with the second factor measured first");
    add_common(reverse, opt);
    reverse->add_option("--artifacts", artifact_dir, "directory for failing-subspace JSON dumps");

    CLI::App* minimize = app.add_subcommand("minimize", "minimize H for one subspace file");
    minimize->add_option("subspace", input_path, "subspace JSON file")->required();
    add_common(minimize, opt);
    minimize->add_flag("--raw", raw_load, "skip the orthonormality check when loading");
    minimize->add_option("--emit-protocol", protocol_path,
                         "write the extracted two-stage protocol JSON here (converged runs)");

    CLI::App* channel = app.add_subcommand("channel", "estimate N for a Kraus channel file");
    channel->add_option("channel", input_path, "channel JSON file")->required();
    add_common(channel, opt);
    channel->add_option("--direction", direction, "env-sys|sys-env")
        ->check(CLI::IsMember({"env-sys", "sys-env"}));

    CLI::App* gram = app.add_subcommand("gram-check", "commuting-diagonal-blocks criterion sweep");
    add_common(gram, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        const locc::SearchConfig cfg = to_config(opt);
        if (table1->parsed()) {
            locc::ExperimentSpec spec;
            spec.kind = locc::ExperimentSpec::Kind::Table1;
            spec.dims = dims;
            spec.samples = opt.samples;
            spec.search = cfg;
            const auto rows = locc::run_table1(spec);
            emit(opt, locc::table1_to_json(rows, spec), locc::table1_to_csv(rows));
        } else if (appendix_b->parsed()) {
            const auto report = locc::run_appendix_b(cfg);
            emit(opt, locc::appendix_b_to_json(report, cfg), "");
        } else if (reverse->parsed()) {
            locc::SearchConfig scan = cfg;
            if (opt.side == "first") scan.side = locc::Side::SecondFactor;
            const auto summary =
                locc::run_reverse_scan(opt.da, opt.db, opt.samples, scan, artifact_dir);
            emit(opt, locc::reverse_scan_to_json(summary, scan), locc::reverse_scan_to_csv(summary));
        } else if (minimize->parsed()) {
            const locc::Subspace v =
                locc::subspace_from_json(locc::load_json_file(input_path), raw_load);
            const locc::SearchResult res = locc::minimize_h(v, cfg);
            emit(opt, locc::search_result_to_json(res, cfg), "");
            if (!protocol_path.empty()) {
                if (!res.converged)
                    throw std::invalid_argument("search did not converge; no protocol to emit");
                const auto protocol = locc::extract_protocol(v, res.basis_selector,
                                                             res.measurement, cfg.side);
                locc::write_json_file(protocol_path, locc::protocol_to_json(protocol));
            }
        } else if (channel->parsed()) {
            const locc::KrausChannel ch =
                locc::channel_from_json(locc::load_json_file(input_path));
            const locc::Direction dir = direction == "env-sys" ? locc::Direction::EnvToSys
                                                               : locc::Direction::SysToEnv;
            const locc::NEstimate est = locc::estimate_n(ch, dir, cfg);
            locc::SearchConfig evidence_cfg = cfg;  // the estimator fixes the measured side
            evidence_cfg.side = locc::measurement_side(dir);
            locc::Json evidence = locc::Json::array();
            for (const auto& r : est.evidence)
                evidence.push_back(locc::search_result_to_json(r, evidence_cfg));
            emit(opt,
                 locc::Json{{"kind", "channel"},
                            {"direction", direction},
                            {"rank", locc::channel_rank(ch)},
                            {"n", est.n},
                            {"evidence", std::move(evidence)}},
                 "");
        } else if (gram->parsed()) {
            const auto summary = locc::run_gram_check(opt.samples, cfg);
            emit(opt, locc::gram_check_to_json(summary, cfg), "");
        }
    } catch (const locc::ChecksumError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
