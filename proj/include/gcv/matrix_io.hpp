#pragma once

// Reading and writing matrices for the command-line tool.
//
// JSON: {"matrix": [[...], ...], "displacement": [...], "split": "1:1" | [1, 1],
//        "convention": "gamma" | "capital"}; only "matrix" is required.
// CSV:  one matrix row per line, comma separated; lines starting with '#' are
//       ignored.

#include "gcv/covariance.hpp"
#include "gcv/entanglement.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace gcv {

enum class MatrixFormat { json, csv };

struct MatrixFile {
  MatrixFormat format = MatrixFormat::json;
  Mat matrix;
  std::optional<Vec> displacement;
  std::optional<ModeSplit> split;
  Convention convention = Convention::gamma;
};

/// Throws Errc::parse for malformed text (ragged rows, non-numbers, missing
/// fields). Shape problems beyond raggedness are left to the caller.
MatrixFile parse_matrix_text(const std::string& text, MatrixFormat format);

/// Format from the extension (.csv) or the first non-blank character.
MatrixFormat detect_format(const std::string& path, const std::string& text);

/// Reads a file ("-" for stdin). Throws Errc::parse when unreadable.
std::string read_text(const std::string& path);

nlohmann::json matrix_to_json(const Mat& m);
nlohmann::json vector_to_json(const Vec& v);
nlohmann::json matrix_file_to_json(const MatrixFile& f);

std::string_view to_string(Convention c) noexcept;
/// Throws Errc::parse.
Convention parse_convention(const std::string& text);

/// 64-bit FNV-1a of the raw input, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace gcv
