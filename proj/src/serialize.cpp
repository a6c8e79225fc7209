#include "locc/serialize.hpp"

#include <fstream>

namespace locc {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex entries must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nested array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols)
            throw std::invalid_argument("matrix rows have inconsistent length");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

Json subspace_to_json(const Subspace& v) {
    Json frame = Json::array();
    for (const BipartiteVector& vec : v.frame) {
        Json amps = Json::array();
        for (Eigen::Index x = 0; x < vec.amplitudes.size(); ++x)
            amps.push_back(complex_to_json(vec.amplitudes[x]));
        frame.push_back(std::move(amps));
    }
    return Json{{"dA", v.dA}, {"dB", v.dB}, {"frame", std::move(frame)}};
}

Subspace subspace_from_json(const Json& j, bool raw) {
    const int da = j.at("dA").get<int>();
    const int db = j.at("dB").get<int>();
    const Json& frame = j.at("frame");
    const int k = static_cast<int>(frame.size());
    Matrix f(static_cast<Eigen::Index>(da) * db, k);
    for (int c = 0; c < k; ++c) {
        if (static_cast<Eigen::Index>(frame[c].size()) != f.rows())
            throw std::invalid_argument("subspace frame vector has wrong length");
        for (Eigen::Index x = 0; x < f.rows(); ++x) f(x, c) = complex_from_json(frame[c][x]);
    }
    return Subspace(da, db, std::move(f), 1e-8, raw);
}

Json unitary_to_json(const Unitary& u) { return matrix_to_json(u.entries); }

Unitary unitary_from_json(const Json& j) { return Unitary(matrix_from_json(j)); }

Json search_config_to_json(const SearchConfig& cfg) {
    return Json{{"restarts", cfg.restarts},
                {"max_iterations", cfg.max_iterations},
                {"success_threshold", cfg.success_threshold},
                {"gradient_tolerance", cfg.gradient_tolerance},
                {"seed", cfg.seed},
                {"side", cfg.side == Side::FirstFactor ? "first" : "second"}};
}

SearchConfig search_config_from_json(const Json& j) {
    SearchConfig cfg;
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
    cfg.success_threshold = j.value("success_threshold", cfg.success_threshold);
    cfg.gradient_tolerance = j.value("gradient_tolerance", cfg.gradient_tolerance);
    cfg.seed = j.value("seed", cfg.seed);
    const std::string side = j.value("side", "first");
    if (side != "first" && side != "second")
        throw std::invalid_argument("side must be 'first' or 'second'");
    cfg.side = side == "first" ? Side::FirstFactor : Side::SecondFactor;
    cfg.validate();
    return cfg;
}

Json search_result_to_json(const SearchResult& r, const SearchConfig& cfg) {
    Json j{{"h_min", r.h_min},
           {"converged", r.converged},
           {"basis_selector", unitary_to_json(r.basis_selector)},
           {"measurement", unitary_to_json(r.measurement)},
           {"restarts_used", r.restarts_used},
           {"total_iterations", r.total_iterations},
           {"config", search_config_to_json(cfg)}};
    if (!r.trace.empty()) j["trace"] = r.trace;
    return j;
}

Json channel_to_json(const KrausChannel& c) {
    Json ops = Json::array();
    for (const Matrix& k : c.kraus) ops.push_back(matrix_to_json(k));
    return Json{{"d_in", c.d_in}, {"d_out", c.d_out}, {"kraus", std::move(ops)}};
}

KrausChannel channel_from_json(const Json& j) {
    std::vector<Matrix> ops;
    for (const Json& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
    return KrausChannel(j.at("d_in").get<int>(), j.at("d_out").get<int>(), std::move(ops), 1e-8);
}

Json block_gram_to_json(const BlockGram& g) { return matrix_to_json(g.entries); }

BlockGram block_gram_from_json(const Json& j) { return BlockGram(matrix_from_json(j)); }

Json protocol_to_json(const TwoStageProtocol& p) {
    Json stages = Json::array();
    for (size_t a = 0; a < p.second_stage.size(); ++a)
        stages.push_back(Json{{"outcome", a},
                              {"basis", matrix_to_json(p.second_stage[a])},
                              {"assignment", p.assignment[a]}});
    return Json{{"side", p.side == Side::FirstFactor ? "first" : "second"},
                {"first_stage", unitary_to_json(p.first_stage)},
                {"second_stage", std::move(stages)}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace locc
