#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

#include "hcm/algebra.hpp"
#include "hcm/module.hpp"

// JSON fixture formats. Complex numbers are [re, im] pairs; matrices are
// row-major nested arrays. Round-trips preserve values to full double
// precision (nlohmann emits shortest-round-trip decimals).
//
//   element:  { "shape": [d1, ...], "blocks": [ [[ [re,im], ... ], ...], ... ] }
//   vector:   { "k": k, "entries": [element, ...] }
//   map:      { "rows": m, "cols": k, "coeffs": [[element, ...], ...] }
//   clinear:  { "k": k, "out_k": k', "shape": [...], "dense": [[ [re,im], ...], ...] }
//   state:    { "shape": [...], "weights": [...], "densities": [matrix, ...] }

namespace hcm {

using json = nlohmann::json;

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("expected [re, im] pair, got " + j.dump());
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected nonempty array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

inline void to_json(json& j, const AlgebraShape& s) { j = s.block_dims; }
inline void from_json(const json& j, AlgebraShape& s) {
  s = AlgebraShape(j.get<std::vector<int>>());
}

inline void to_json(json& j, const AlgebraElement& a) {
  json blocks = json::array();
  for (const auto& m : a.blocks) blocks.push_back(matrix_to_json(m));
  j = json{{"shape", a.shape}, {"blocks", std::move(blocks)}};
}

inline void from_json(const json& j, AlgebraElement& a) {
  AlgebraShape s = j.at("shape").get<AlgebraShape>();
  const json& jb = j.at("blocks");
  if (static_cast<int>(jb.size()) != s.blocks())
    throw std::invalid_argument("element: blocks / shape mismatch");
  std::vector<Matrix> blocks;
  for (const auto& b : jb) blocks.push_back(matrix_from_json(b));
  a = AlgebraElement(std::move(s), std::move(blocks));
}

inline void to_json(json& j, const ModuleVector& x) {
  j = json{{"k", x.k}, {"entries", x.entries}};
}

inline void from_json(const json& j, ModuleVector& x) {
  auto entries = j.at("entries").get<std::vector<AlgebraElement>>();
  x = ModuleVector(entries.at(0).shape, std::move(entries));
  if (x.k != j.at("k").get<int>())
    throw std::invalid_argument("vector: k does not match entry count");
}

inline void to_json(json& j, const AModuleMap& t) {
  json rows = json::array();
  for (int p = 0; p < t.rows; ++p) {
    json row = json::array();
    for (int i = 0; i < t.cols; ++i) row.push_back(t.at(p, i));
    rows.push_back(std::move(row));
  }
  j = json{{"rows", t.rows}, {"cols", t.cols}, {"coeffs", std::move(rows)}};
}

inline void from_json(const json& j, AModuleMap& t) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  std::vector<AlgebraElement> coeffs;
  for (const auto& row : j.at("coeffs"))
    for (const auto& e : row) coeffs.push_back(e.get<AlgebraElement>());
  if (coeffs.empty()) throw std::invalid_argument("map: empty coefficients");
  t = AModuleMap(coeffs[0].shape, rows, cols, std::move(coeffs));
}

inline void to_json(json& j, const CLinearMap& t) {
  j = json{{"shape", t.shape},
           {"k", t.in_k},
           {"out_k", t.out_k},
           {"dense", matrix_to_json(t.dense)}};
}

inline void from_json(const json& j, CLinearMap& t) {
  t = CLinearMap(j.at("shape").get<AlgebraShape>(), j.at("k").get<int>(),
                 j.at("out_k").get<int>(), matrix_from_json(j.at("dense")));
}

inline void to_json(json& j, const State& s) {
  json dens = json::array();
  for (const auto& d : s.densities) dens.push_back(matrix_to_json(d));
  j = json{{"shape", s.shape}, {"weights", s.weights}, {"densities", std::move(dens)}};
}

inline void from_json(const json& j, State& s) {
  AlgebraShape shape = j.at("shape").get<AlgebraShape>();
  std::vector<Matrix> dens;
  for (const auto& d : j.at("densities")) dens.push_back(matrix_from_json(d));
  s = State(std::move(shape), std::move(dens), j.at("weights").get<std::vector<double>>());
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const json& j, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(indent) << "\n";
}

} // namespace hcm
