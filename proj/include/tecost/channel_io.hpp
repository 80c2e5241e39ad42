#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tecost/channel.hpp"

namespace tecost {

// Thrown for malformed files: bad JSON, wrong shape, unknown fields, or a
// Kraus list that is not a channel.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols, const std::string& what);

nlohmann::json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const nlohmann::json& j);
nlohmann::json unitary_to_json(const Matrix& u);
Matrix unitary_from_json(const nlohmann::json& j);

// Text forms use 17 significant digits.
std::string channel_to_string(const KrausChannel& ch);
KrausChannel channel_from_string(const std::string& text);

KrausChannel read_channel_file(const std::string& path);
void write_channel_file(const std::string& path, const KrausChannel& ch);
void write_unitary_file(const std::string& path, const Matrix& u);
Matrix read_unitary_file(const std::string& path);

}  // namespace tecost
