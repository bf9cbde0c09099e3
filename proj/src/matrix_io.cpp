#include "gcv/matrix_io.hpp"

#include "gcv/error.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <vector>

namespace gcv {

namespace {

Mat rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw Error(Errc::parse, "matrix has no rows");
  const std::size_t cols = rows.front().size();
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw Error(Errc::parse, "row " + std::to_string(i) + " has " +
                                   std::to_string(rows[i].size()) + " entries, expected " +
                                   std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

double json_number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw Error(Errc::parse, std::string(what) + " entries must be numbers");
  return v.get<double>();
}

MatrixFile parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse, std::string("invalid JSON: ") + e.what());
  }
  // A bare array of rows is accepted as well.
  const nlohmann::json* mat = &doc;
  if (doc.is_object()) {
    if (!doc.contains("matrix")) throw Error(Errc::parse, "JSON object has no \"matrix\" field");
    mat = &doc["matrix"];
  }
  if (!mat->is_array()) throw Error(Errc::parse, "\"matrix\" must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : *mat) {
    if (!row.is_array()) throw Error(Errc::parse, "\"matrix\" rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(json_number(v, "matrix"));
    rows.push_back(std::move(r));
  }
  MatrixFile out;
  out.format = MatrixFormat::json;
  out.matrix = rows_to_matrix(rows);
  if (!doc.is_object()) return out;

  if (doc.contains("displacement") && !doc["displacement"].is_null()) {
    const auto& d = doc["displacement"];
    if (!d.is_array()) throw Error(Errc::parse, "\"displacement\" must be an array");
    Vec v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = json_number(d[i], "displacement");
    out.displacement = std::move(v);
  }
  if (doc.contains("split") && !doc["split"].is_null()) {
    const auto& s = doc["split"];
    if (s.is_string()) {
      out.split = ModeSplit::parse(s.get<std::string>());
    } else if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer()) {
      out.split = ModeSplit{s[0].get<int>(), s[1].get<int>()};
    } else {
      throw Error(Errc::parse, "\"split\" must be \"A:B\" or [A, B]");
    }
  }
  if (doc.contains("convention") && !doc["convention"].is_null()) {
    if (!doc["convention"].is_string()) throw Error(Errc::parse, "\"convention\" must be a string");
    out.convention = parse_convention(doc["convention"].get<std::string>());
  }
  return out;
}

MatrixFile parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(Errc::parse, "CSV cell '" + cell + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  MatrixFile out;
  out.format = MatrixFormat::csv;
  out.matrix = rows_to_matrix(rows);
  return out;
}

}  // namespace

MatrixFile parse_matrix_text(const std::string& text, MatrixFormat format) {
  return format == MatrixFormat::json ? parse_json(text) : parse_csv(text);
}

MatrixFormat detect_format(const std::string& path, const std::string& text) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return MatrixFormat::csv;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return MatrixFormat::json;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' || c == '[' ? MatrixFormat::json : MatrixFormat::csv;
  }
  return MatrixFormat::json;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const Vec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json matrix_file_to_json(const MatrixFile& f) {
  nlohmann::json out;
  out["matrix"] = matrix_to_json(f.matrix);
  if (f.displacement) out["displacement"] = vector_to_json(*f.displacement);
  if (f.split) out["split"] = f.split->to_string();
  out["convention"] = std::string(to_string(f.convention));
  return out;
}

std::string_view to_string(Convention c) noexcept {
  return c == Convention::gamma ? "gamma" : "capital";
}

Convention parse_convention(const std::string& text) {
  if (text == "gamma") return Convention::gamma;
  if (text == "capital") return Convention::capital;
  throw Error(Errc::parse, "convention must be gamma or capital, got '" + text + "'");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gcv
