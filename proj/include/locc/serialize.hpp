#pragma once

#include <string>

#include <json.hpp>

#include "locc/channel.hpp"
#include "locc/core.hpp"
#include "locc/gram.hpp"
#include "locc/objective.hpp"
#include "locc/protocol.hpp"

namespace locc {

using Json = nlohmann::json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json subspace_to_json(const Subspace& v);
/// Rejects frames violating orthonormality beyond 1e-8 unless `raw`.
Subspace subspace_from_json(const Json& j, bool raw = false);

Json unitary_to_json(const Unitary& u);
Unitary unitary_from_json(const Json& j);

Json search_config_to_json(const SearchConfig& cfg);
SearchConfig search_config_from_json(const Json& j);

Json search_result_to_json(const SearchResult& r, const SearchConfig& cfg);

Json channel_to_json(const KrausChannel& c);
/// Validates trace preservation within 1e-8.
KrausChannel channel_from_json(const Json& j);

Json block_gram_to_json(const BlockGram& g);
BlockGram block_gram_from_json(const Json& j);

Json protocol_to_json(const TwoStageProtocol& p);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace locc
