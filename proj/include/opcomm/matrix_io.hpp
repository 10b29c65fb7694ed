#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "opcomm/matrix.hpp"

namespace opcomm {

// Matrix files: JSON {"rows": n, "cols": m, "data": [row-major]} or a plain
// CSV grid. Writers always emit JSON.

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// One row per line, comma separated, C-locale decimals (scientific notation ok).
Matrix parse_csv(std::string_view text);

/// Sniffs JSON vs CSV from the first non-blank character.
Matrix parse_matrix(std::string_view text);

Matrix read_matrix(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

} // namespace opcomm
