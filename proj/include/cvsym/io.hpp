#pragma once

// JSON and CSV documents.
//
//   covariance matrix   {"n_modes": N, "entries": [[...2N reals...], ...]}   (x1,p1,...,xN,pN)
//   block parameters    {"b": b, "e1": e1, "e2": e2, "n": N}
//                       or {"beta": [[2x2]], "epsilon": [[2x2]], "n": N}
//   1xN state           {"alpha": [[2x2]], "gamma": [[2x2]], "block": <block parameters>}
//   negativity          {"k": K, "E_N": E, "n_tilde_minus": n, "entangled": bool}
//
// Infinite values are written as the string "inf".

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvsym/ghz.hpp"

namespace cvsym {

using json = nlohmann::json;

/// Malformed document.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace io {

/// Shortest decimal text that round-trips to the same double; "inf" for +infinity.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_number(const json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw ParseError(std::string("field '") + field + "' must be a number");
}

inline const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  return j.at(field);
}

inline std::size_t read_count(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(std::string("field '") + field + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

inline Matrix read_matrix(const json& j, const char* field, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw ParseError(std::string("field '") + field + "' must have " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(std::string("field '") + field + "' row " + std::to_string(r) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_number(row[static_cast<std::size_t>(c)], field);
  }
  return m;
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// -- covariance matrices ---------------------------------------------------

inline json to_json(const CovarianceMatrix& cm) {
  return {{"n_modes", cm.n_modes()}, {"entries", matrix_json(cm.matrix())}};
}

inline CovarianceMatrix covariance_from_json(const json& j) {
  const std::size_t n = read_count(j, "n_modes");
  if (n == 0) throw ParseError("n_modes must be positive");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  return CovarianceMatrix::from_matrix(read_matrix(require(j, "entries"), "entries", dim, dim), kSymmetryTol);
}

// -- parameters ------------------------------------------------------------

inline json to_json(const SymmetricBlockParams& p) { return {{"b", p.b}, {"e1", p.e1}, {"e2", p.e2}, {"n", p.n_modes}}; }

inline json to_json(const SymmetricBlock& blk) {
  return {{"beta", matrix_json(blk.beta)}, {"epsilon", matrix_json(blk.epsilon)}, {"n", blk.n_modes}};
}

inline bool is_standard_form(const json& j) { return j.is_object() && j.contains("b"); }

inline SymmetricBlockParams params_from_json(const json& j) {
  SymmetricBlockParams p;
  p.b = read_number(require(j, "b"), "b");
  p.e1 = read_number(require(j, "e1"), "e1");
  p.e2 = read_number(require(j, "e2"), "e2");
  p.n_modes = read_count(j, "n");
  if (p.n_modes == 0) throw ParseError("n must be positive");
  return p;
}

inline SymmetricBlock block_from_json(const json& j) {
  if (is_standard_form(j)) return SymmetricBlock::from_params(params_from_json(j));
  SymmetricBlock blk;
  blk.beta = read_matrix(require(j, "beta"), "beta", 2, 2);
  blk.epsilon = read_matrix(require(j, "epsilon"), "epsilon", 2, 2);
  blk.n_modes = read_count(j, "n");
  if (blk.n_modes == 0) throw ParseError("n must be positive");
  return blk;
}

inline json to_json(const OnePlusNState& s) {
  return {{"alpha", matrix_json(s.alpha)}, {"gamma", matrix_json(s.gamma)}, {"block", to_json(s.block)}};
}

inline bool is_one_plus_n(const json& j) { return j.is_object() && j.contains("alpha"); }

inline OnePlusNState state_from_json(const json& j) {
  OnePlusNState s;
  s.alpha = read_matrix(require(j, "alpha"), "alpha", 2, 2);
  s.gamma = read_matrix(require(j, "gamma"), "gamma", 2, 2);
  s.block = block_from_json(require(j, "block"));
  return s;
}

// -- results ---------------------------------------------------------------

inline json to_json(const SymplecticSpectrum& s) { return {{"n_modes", s.size()}, {"values", s.values}}; }

inline json to_json(const PhysicalityReport& r) {
  return {{"is_physical", r.is_physical}, {"positive_definite", r.positive_definite}, {"min_nu", r.min_nu}};
}

/// Presentation units for negativities. Comparisons always use nats.
enum class LogBase { Nats, Bits };

inline double in_units(double nats, LogBase base) { return base == LogBase::Bits ? nats / std::log(2.0) : nats; }

inline json negativity_json(std::size_t k, const NegativityResult& r, LogBase base = LogBase::Nats) {
  return {{"k", k},
          {"E_N", number_or_inf(in_units(r.value, base))},
          {"n_tilde_minus", r.n_tilde_minus},
          {"entangled", r.entangled}};
}

struct KeyedNegativity {
  std::size_t k = 0;
  NegativityResult result;
};

inline KeyedNegativity negativity_from_json(const json& j) {
  KeyedNegativity out;
  out.k = read_count(j, "k");
  out.result.value = read_number(require(j, "E_N"), "E_N");
  out.result.n_tilde_minus = read_number(require(j, "n_tilde_minus"), "n_tilde_minus");
  const json& ent = require(j, "entangled");
  if (!ent.is_boolean()) throw ParseError("field 'entangled' must be a boolean");
  out.result.entangled = ent.get<bool>();
  return out;
}

// -- hierarchy -------------------------------------------------------------

/// One row of a GHZ hierarchy: the finite-b value and its b -> infinity limit.
struct HierarchyRow {
  std::size_t k = 0;
  double e_n = 0.0;
  double n_tilde_minus = 1.0;
  double limit = 0.0;
};

inline std::vector<HierarchyRow> hierarchy_rows(const GhzSpec& spec) {
  std::vector<HierarchyRow> rows;
  const std::size_t n = spec.total_modes - 1;
  for (const auto& entry : ghz_hierarchy(spec)) {
    rows.push_back({entry.k, entry.negativity.value, entry.negativity.n_tilde_minus, ghz_limit(entry.k, n)});
  }
  return rows;
}

inline constexpr std::string_view kHierarchyCsvHeader = "k,E_N,n_tilde_minus,limit";

inline std::string hierarchy_csv(const std::vector<HierarchyRow>& rows, LogBase base = LogBase::Nats) {
  std::string out(kHierarchyCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + format_double(in_units(r.e_n, base)) + ',' + format_double(r.n_tilde_minus) +
           ',' + format_double(in_units(r.limit, base)) + '\n';
  }
  return out;
}

inline json hierarchy_json(const std::vector<HierarchyRow>& rows, LogBase base = LogBase::Nats) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"k", r.k},
                   {"E_N", number_or_inf(in_units(r.e_n, base))},
                   {"n_tilde_minus", r.n_tilde_minus},
                   {"entangled", r.n_tilde_minus < 1.0},
                   {"limit", number_or_inf(in_units(r.limit, base))}});
  }
  return arr;
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::vector<std::string>> csv_records(std::string_view text, std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ParseError("CSV header must be '" + std::string(header) + "'");
  }
  const std::size_t width = split(header, ',').size();
  std::vector<std::vector<std::string>> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != width) throw ParseError("CSV row has " + std::to_string(fields.size()) + " fields");
    records.push_back(std::move(fields));
  }
  return records;
}

inline std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("not an integer: '" + s + "'");
  return v;
}

}  // namespace detail

inline std::vector<HierarchyRow> read_hierarchy_csv(std::string_view text) {
  std::vector<HierarchyRow> rows;
  for (const auto& f : detail::csv_records(text, kHierarchyCsvHeader)) {
    rows.push_back({detail::parse_count(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3])});
  }
  return rows;
}

inline std::vector<HierarchyRow> read_hierarchy_json(const json& j) {
  if (!j.is_array()) throw ParseError("hierarchy document must be an array");
  std::vector<HierarchyRow> rows;
  for (const auto& item : j) {
    rows.push_back({read_count(item, "k"), read_number(require(item, "E_N"), "E_N"),
                    read_number(require(item, "n_tilde_minus"), "n_tilde_minus"),
                    read_number(require(item, "limit"), "limit")});
  }
  return rows;
}

// -- scaling sweeps ----------------------------------------------------------

inline constexpr std::string_view kSweepCsvHeader = "b,n_total,k,E_N,n_tilde_minus";

/// Long-format sweep record, one per (b, N, K).
struct SweepRecord {
  double b = 1.0;
  std::size_t n_total = 0;
  std::size_t k = 0;
  double e_n = 0.0;
  double n_tilde_minus = 1.0;
};

/// Flattens scaling rows into records for K in {1, N-1, N}, skipping repeated K.
inline std::vector<SweepRecord> sweep_records(double b, const std::vector<ScalingRow>& rows) {
  std::vector<SweepRecord> out;
  for (const auto& row : rows) {
    const std::size_t total = row.one_by_all ? row.n + 1 : row.n;
    auto emit = [&](std::size_t k, const NegativityResult& r) {
      if (!out.empty() && out.back().n_total == total && out.back().k == k) return;
      out.push_back({b, total, k, r.value, r.n_tilde_minus});
    };
    emit(1, row.one_by_one);
    emit(row.n - 1, row.one_by_rest);
    if (row.one_by_all) emit(row.n, *row.one_by_all);
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_double(r.b) + ',' + std::to_string(r.n_total) + ',' + std::to_string(r.k) + ',' +
           format_double(r.e_n) + ',' + format_double(r.n_tilde_minus) + '\n';
  }
  return out;
}

inline std::vector<SweepRecord> read_sweep_csv(std::string_view text) {
  std::vector<SweepRecord> out;
  for (const auto& f : detail::csv_records(text, kSweepCsvHeader)) {
    out.push_back({parse_double(f[0]), detail::parse_count(f[1]), detail::parse_count(f[2]), parse_double(f[3]),
                   parse_double(f[4])});
  }
  return out;
}

struct ScalingValues {
  std::size_t n = 0;
  double e_1x1 = 0.0;
  double e_1xNm1 = 0.0;
  double e_1xN = 0.0;
};

inline json scaling_json(const std::vector<ScalingRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json item = {{"n", r.n}, {"e_1x1", r.e_1x1()}, {"e_1xNm1", r.e_1xNm1()}};
    item["e_1xN"] = r.one_by_all ? json(r.e_1xN()) : json(nullptr);
    arr.push_back(std::move(item));
  }
  return arr;
}

inline std::vector<ScalingValues> read_scaling_json(const json& j) {
  if (!j.is_array()) throw ParseError("scaling document must be an array");
  std::vector<ScalingValues> out;
  for (const auto& item : j) {
    ScalingValues v;
    v.n = read_count(item, "n");
    v.e_1x1 = read_number(require(item, "e_1x1"), "e_1x1");
    v.e_1xNm1 = read_number(require(item, "e_1xNm1"), "e_1xNm1");
    const json& all = require(item, "e_1xN");
    v.e_1xN = all.is_null() ? std::numeric_limits<double>::quiet_NaN() : read_number(all, "e_1xN");
    out.push_back(v);
  }
  return out;
}

}  // namespace io
}  // namespace cvsym
