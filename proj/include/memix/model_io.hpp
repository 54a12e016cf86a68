#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "memix/errors.hpp"
#include "memix/mmeam.hpp"

// JSON model files.  A file holds the component triples, either one list per
// coordinate or a single shared list, plus the sparse mixing weights with
// 1-based component indices.  The writer emits a canonical single-line form
// with per-coordinate pools and 17-significant-digit numerals, so doubles
// survive a write/read cycle bit-exactly and written files are stable under
// re-reading.  Unknown keys are rejected at every object level.
namespace memix::io {

namespace detail {

inline std::string at(const std::string& where) {
  return where.empty() ? std::string() : " in " + where;
}

inline const nlohmann::json& member(const nlohmann::json& obj,
                                    const char* key,
                                    const std::string& where) {
  auto it = obj.find(key);
  require_input(it != obj.end(),
                "model file: missing key \"" + std::string(key) + "\"" +
                    at(where));
  return *it;
}

inline void expect_keys(const nlohmann::json& obj, const std::string& where,
                        std::initializer_list<const char*> keys) {
  require_input(obj.is_object(), "model file: expected an object" + at(where));
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    require_input(known,
                  "model file: unknown key \"" + key + "\"" + at(where));
  }
}

inline double as_number(const nlohmann::json& j, const std::string& where) {
  require_input(j.is_number(), "model file: expected a number" + at(where));
  return j.get<double>();
}

inline int as_index(const nlohmann::json& j, const std::string& where) {
  require_input(j.is_number_integer(),
                "model file: expected an integer" + at(where));
  return j.get<int>();
}

inline Eigen::VectorXd as_vector(const nlohmann::json& j,
                                 const std::string& where) {
  require_input(j.is_array() && !j.empty(),
                "model file: expected a non-empty array" + at(where));
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = as_number(j[i], where);
  return v;
}

inline Eigen::MatrixXd as_matrix(const nlohmann::json& j,
                                 const std::string& where) {
  require_input(j.is_array() && !j.empty(),
                "model file: expected a non-empty array of rows" + at(where));
  const std::size_t rows = j.size();
  require_input(j[0].is_array(),
                "model file: expected an array of rows" + at(where));
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require_input(j[r].is_array() && j[r].size() == cols,
                  "model file: ragged matrix rows" + at(where));
    for (std::size_t c = 0; c < cols; ++c)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_number(j[r][c], where);
  }
  return a;
}

// 17 significant digits: the shortest count that round-trips every double.
inline void put_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void put_vector(std::string& out, const Eigen::VectorXd& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    put_number(out, v(i));
  }
  out += ']';
}

inline void put_triple(std::string& out, const MeTriple& tr) {
  out += "{\"alpha\":";
  put_vector(out, tr.alpha().transpose());
  out += ",\"T\":[";
  for (Eigen::Index r = 0; r < tr.dim(); ++r) {
    if (r) out += ',';
    put_vector(out, tr.T().row(r).transpose());
  }
  out += "],\"t\":";
  put_vector(out, tr.t());
  out += '}';
}

}  // namespace detail

inline MeTriple triple_from_json(const nlohmann::json& j,
                                 const std::string& where,
                                 const NumericContext& ctx = default_context()) {
  detail::expect_keys(j, where, {"alpha", "T", "t"});
  Eigen::VectorXd alpha =
      detail::as_vector(detail::member(j, "alpha", where), where + " alpha");
  Eigen::MatrixXd T =
      detail::as_matrix(detail::member(j, "T", where), where + " T");
  Eigen::VectorXd t =
      detail::as_vector(detail::member(j, "t", where), where + " t");
  return MeTriple(alpha.transpose(), std::move(T), std::move(t), ctx);
}

inline MmeamModel model_from_json(const nlohmann::json& j,
                                  const NumericContext& ctx = default_context()) {
  detail::expect_keys(j, "", {"M", "pools", "weights"});
  const int m = detail::as_index(detail::member(j, "M", ""), "M");
  require_input(m >= 1, "model file: M must be a positive integer");

  const nlohmann::json& pools_node = detail::member(j, "pools", "");
  require_input(pools_node.is_array() && !pools_node.empty(),
                "model file: pools must be a non-empty array");
  std::vector<std::vector<MeTriple>> pools;
  if (pools_node[0].is_object()) {
    // Shared form: one list of triples used by every coordinate.
    std::vector<MeTriple> shared;
    for (std::size_t i = 0; i < pools_node.size(); ++i)
      shared.push_back(triple_from_json(
          pools_node[i], "pools[" + std::to_string(i + 1) + "]", ctx));
    pools.assign(m, shared);
  } else {
    require_input(static_cast<int>(pools_node.size()) == m,
                  "model file: pools must hold one list per coordinate");
    for (std::size_t c = 0; c < pools_node.size(); ++c) {
      const nlohmann::json& list = pools_node[c];
      require_input(list.is_array() && !list.empty(),
                    "model file: pools[" + std::to_string(c + 1) +
                        "] must be a non-empty array of triples");
      std::vector<MeTriple> pool;
      for (std::size_t i = 0; i < list.size(); ++i)
        pool.push_back(triple_from_json(
            list[i], "pools[" + std::to_string(c + 1) + "][" +
                         std::to_string(i + 1) + "]", ctx));
      pools.push_back(std::move(pool));
    }
  }

  std::vector<int> shape;
  for (const auto& pool : pools) shape.push_back(static_cast<int>(pool.size()));

  const nlohmann::json& weights_node = detail::member(j, "weights", "");
  require_input(weights_node.is_array() && !weights_node.empty(),
                "model file: weights must be a non-empty array");
  std::vector<WeightTensor::Entry> entries;
  for (std::size_t k = 0; k < weights_node.size(); ++k) {
    const std::string where = "weights[" + std::to_string(k + 1) + "]";
    const nlohmann::json& entry = weights_node[k];
    detail::expect_keys(entry, where, {"index", "p"});
    const nlohmann::json& idx_node = detail::member(entry, "index", where);
    require_input(idx_node.is_array() &&
                      static_cast<int>(idx_node.size()) == m,
                  "model file: index must list one component per coordinate" +
                      detail::at(where));
    WeightTensor::Index idx(m);
    for (int jx = 0; jx < m; ++jx) {
      const int one_based = detail::as_index(idx_node[jx], where + " index");
      require_input(one_based >= 1 && one_based <= shape[jx],
                    "model file: component index " +
                        std::to_string(one_based) + " out of range" +
                        detail::at(where));
      idx[jx] = one_based - 1;
    }
    entries.emplace_back(std::move(idx),
                         detail::as_number(detail::member(entry, "p", where),
                                           where + " p"));
  }

  return MmeamModel(std::move(pools),
                    WeightTensor(std::move(shape), entries, ctx), ctx);
}

inline std::string model_to_string(const MmeamModel& m) {
  std::string out;
  out += "{\"M\":" + std::to_string(m.dim()) + ",\"pools\":[";
  for (int j = 0; j < m.dim(); ++j) {
    if (j) out += ',';
    out += '[';
    for (std::size_t i = 0; i < m.pool(j).size(); ++i) {
      if (i) out += ',';
      detail::put_triple(out, m.pool(j)[i]);
    }
    out += ']';
  }
  out += "],\"weights\":[";
  bool first = true;
  for (const auto& [idx, p] : m.weights().entries()) {
    if (!first) out += ',';
    first = false;
    out += "{\"index\":[";
    for (std::size_t jx = 0; jx < idx.size(); ++jx) {
      if (jx) out += ',';
      out += std::to_string(idx[jx] + 1);
    }
    out += "],\"p\":";
    detail::put_number(out, p);
    out += '}';
  }
  out += "]}";
  return out;
}

inline std::string triple_to_string(const MeTriple& tr) {
  std::string out;
  detail::put_triple(out, tr);
  return out;
}

inline nlohmann::json parse_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("model file: " + std::string(e.what()));
  }
}

inline MmeamModel model_from_string(const std::string& text,
                                    const NumericContext& ctx = default_context()) {
  return model_from_json(parse_text(text), ctx);
}

inline std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require_input(in.good(), "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline MmeamModel read_model_file(const std::string& path,
                                  const NumericContext& ctx = default_context()) {
  return model_from_string(slurp_file(path), ctx);
}

inline MeTriple read_triple_file(const std::string& path,
                                 const NumericContext& ctx = default_context()) {
  return triple_from_json(parse_text(slurp_file(path)), path, ctx);
}

inline void write_model_file(const std::string& path, const MmeamModel& m) {
  std::ofstream out(path, std::ios::binary);
  require_input(out.good(), "cannot open file for writing: " + path);
  out << model_to_string(m) << '\n';
  require_input(out.good(), "failed to write file: " + path);
}

}  // namespace memix::io
