/*
 * Copyright 2026 The cpinterp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

#pragma once

// JSON encodings. Matrices are objects
//   {"rows": r, "cols": c, "entries": [[re, im], ...]}   (row-major)
// where a square matrix may give "dim" instead of rows/cols. Doubles are
// written in shortest round-trip form, so every value reloads bit-exactly.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpinterp/classify.hpp"
#include "cpinterp/config.hpp"
#include "cpinterp/construct.hpp"
#include "cpinterp/errors.hpp"
#include "cpinterp/linalg.hpp"
#include "cpinterp/verify.hpp"

namespace cpinterp::io {

using json = nlohmann::json;

inline constexpr const char *kProblemVersion = "cpinterp.problem/1";
inline constexpr const char *kReportVersion = "cpinterp.report/1";

// Malformed or inconsistent documents.
class ParseError : public InputError {
public:
  using InputError::InputError;
};

//============================================================================
// Matrices
//============================================================================

inline json encode_matrix(const ComplexMatrix &m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  json out = {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
  if (m.rows() == m.cols())
    out["dim"] = m.rows();
  return out;
}

inline json encode_matrix(const Eigen::MatrixXd &m) {
  return encode_matrix(ComplexMatrix(m.cast<Complex>()));
}

inline double finite_number(const json &v, const std::string &where) {
  if (!v.is_number())
    throw ParseError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ParseError(where + ": non-finite number");
  return x;
}

// Integers may arrive signed (built in memory) or unsigned (parsed text).
inline bool is_count(const json &v) {
  return v.is_number_unsigned() ||
         (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline ComplexMatrix decode_matrix(const json &j, const std::string &where = "matrix") {
  if (!j.is_object())
    throw ParseError(where + ": expected an object");
  Eigen::Index rows = 0, cols = 0;
  if (j.contains("rows") || j.contains("cols")) {
    if (!j.contains("rows") || !j.contains("cols") || !is_count(j.at("rows")) ||
        !is_count(j.at("cols")))
      throw ParseError(where + ": rows/cols must be nonnegative integers");
    rows = j.at("rows").get<Eigen::Index>();
    cols = j.at("cols").get<Eigen::Index>();
    if (j.contains("dim") &&
        (!is_count(j.at("dim")) || j.at("dim").get<Eigen::Index>() != rows ||
         rows != cols))
      throw ParseError(where + ": dim disagrees with rows/cols");
  } else if (j.contains("dim")) {
    if (!is_count(j.at("dim")))
      throw ParseError(where + ": dim must be a nonnegative integer");
    rows = cols = j.at("dim").get<Eigen::Index>();
  } else {
    throw ParseError(where + ": missing dim or rows/cols");
  }
  if (!j.contains("entries") || !j.at("entries").is_array())
    throw ParseError(where + ": missing entries array");
  const json &e = j.at("entries");
  if (static_cast<Eigen::Index>(e.size()) != rows * cols)
    throw ParseError(where + ": expected " + std::to_string(rows * cols) +
                     " entries, found " + std::to_string(e.size()));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index idx = 0; idx < rows * cols; ++idx) {
    const json &z = e.at(static_cast<size_t>(idx));
    const std::string at = where + ".entries[" + std::to_string(idx) + "]";
    Complex v;
    if (z.is_array()) {
      if (z.size() != 2)
        throw ParseError(at + ": complex entries are [re, im]");
      v = Complex(finite_number(z[0], at), finite_number(z[1], at));
    } else {
      v = Complex(finite_number(z, at), 0.0);
    }
    m(idx / cols, idx % cols) = v;
  }
  return m;
}

// Accepts either a bare matrix object or {"matrix": {...}}.
inline ComplexMatrix decode_matrix_document(const json &j) {
  if (j.is_object() && j.contains("matrix"))
    return decode_matrix(j.at("matrix"), "matrix");
  return decode_matrix(j);
}

//============================================================================
// Problems
//============================================================================

struct Problem {
  std::vector<HermitianMatrix> a;
  std::vector<HermitianMatrix> b;
  std::vector<std::string> warnings;

  std::vector<MatrixPair> pairs() const {
    std::vector<MatrixPair> out;
    for (size_t i = 0; i < a.size(); ++i)
      out.emplace_back(a[i].matrix(), b[i].matrix());
    return out;
  }
};

inline std::vector<HermitianMatrix>
decode_family(const json &list, const std::string &name, double herm_tol,
              std::vector<std::string> &warnings) {
  if (!list.is_array() || list.empty())
    throw ParseError(name + ": expected a non-empty array of matrices");
  std::vector<HermitianMatrix> out;
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string where = name + "[" + std::to_string(i) + "]";
    const ComplexMatrix m = decode_matrix(list[i], where);
    if (m.rows() != m.cols() || m.rows() == 0)
      throw ParseError(where + ": matrix must be square and non-empty");
    double asym = 0.0;
    out.push_back(HermitianMatrix::symmetrized(m, &asym));
    if (asym > herm_tol * (1.0 + max_abs(m)))
      warnings.push_back(where + ": not Hermitian (||H - H^*||_max = " +
                         std::to_string(asym) + "); symmetrized");
    if (out.back().dim() != out.front().dim())
      throw ParseError(where + ": dimension differs from " + name + "[0]");
  }
  return out;
}

inline Problem decode_problem(const json &j, double herm_tol = 1e-10) {
  if (!j.is_object())
    throw ParseError("problem: expected an object");
  if (j.contains("version") &&
      (!j.at("version").is_string() ||
       j.at("version").get<std::string>().rfind("cpinterp.problem/", 0) != 0))
    throw ParseError("problem: unsupported version");
  if (!j.contains("A") || !j.contains("B"))
    throw ParseError("problem: missing A or B");
  Problem p;
  p.a = decode_family(j.at("A"), "A", herm_tol, p.warnings);
  p.b = decode_family(j.at("B"), "B", herm_tol, p.warnings);
  if (p.a.size() != p.b.size())
    throw ParseError("problem: A and B have different lengths");
  return p;
}

inline json encode_problem(const std::vector<ComplexMatrix> &a,
                           const std::vector<ComplexMatrix> &b) {
  json out = {{"version", kProblemVersion}, {"A", json::array()}, {"B", json::array()}};
  for (const auto &m : a)
    out["A"].push_back(encode_matrix(m));
  for (const auto &m : b)
    out["B"].push_back(encode_matrix(m));
  return out;
}

//============================================================================
// Maps
//============================================================================

inline json encode_map(const KrausMap &k) {
  json ops = json::array();
  for (const auto &f : k.operators())
    ops.push_back(encode_matrix(f));
  return {{"kind", "kraus"},
          {"n", k.input_dim()},
          {"m", k.output_dim()},
          {"operators", ops}};
}

inline json encode_map(const MixedUnitaryMap &mu) {
  json us = json::array();
  for (const auto &u : mu.unitaries)
    us.push_back(encode_matrix(u));
  return {{"kind", "mixed_unitary"},
          {"n", mu.dim()},
          {"weights", mu.weights},
          {"unitaries", us}};
}

struct LoadedMap {
  std::optional<KrausMap> kraus;
  std::optional<MixedUnitaryMap> mixed;

  Eigen::Index input_dim() const {
    return kraus ? kraus->input_dim() : mixed->dim();
  }
  Eigen::Index output_dim() const {
    return kraus ? kraus->output_dim() : mixed->dim();
  }
};

// Accepts a map document or any report carrying one under "map".
inline LoadedMap decode_map(const json &doc) {
  const json &j = doc.is_object() && doc.contains("map") ? doc.at("map") : doc;
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("map: missing kind");
  const std::string kind = j.at("kind").get<std::string>();
  LoadedMap out;
  try {
    if (kind == "kraus") {
      if (!j.contains("operators") || !j.at("operators").is_array())
        throw ParseError("map: missing operators");
      std::vector<ComplexMatrix> ops;
      for (size_t i = 0; i < j.at("operators").size(); ++i)
        ops.push_back(decode_matrix(j.at("operators")[i],
                                    "operators[" + std::to_string(i) + "]"));
      if (ops.empty())
        throw ParseError("map: no operators");
      Eigen::Index n = ops.front().rows(), m = ops.front().cols();
      if (j.contains("n"))
        n = j.at("n").get<Eigen::Index>();
      if (j.contains("m"))
        m = j.at("m").get<Eigen::Index>();
      out.kraus = KrausMap(n, m, std::move(ops));
    } else if (kind == "mixed_unitary") {
      if (!j.contains("weights") || !j.contains("unitaries"))
        throw ParseError("map: missing weights or unitaries");
      MixedUnitaryMap mu;
      for (const json &w : j.at("weights"))
        mu.weights.push_back(finite_number(w, "weights"));
      for (size_t i = 0; i < j.at("unitaries").size(); ++i)
        mu.unitaries.push_back(decode_matrix(
            j.at("unitaries")[i], "unitaries[" + std::to_string(i) + "]"));
      if (mu.weights.size() != mu.unitaries.size() || mu.weights.empty())
        throw ParseError("map: weights and unitaries differ in length");
      for (const auto &u : mu.unitaries)
        if (u.rows() != mu.dim() || u.cols() != mu.dim())
          throw ParseError("map: unitaries must share one square shape");
      out.mixed = std::move(mu);
    } else {
      throw ParseError("map: unknown kind '" + kind + "'");
    }
  } catch (const ParseError &) {
    throw;
  } catch (const InputError &e) {
    throw ParseError(std::string("map: ") + e.what());
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("map: ") + e.what());
  }
  return out;
}

//============================================================================
// Reports
//============================================================================

inline json encode_verification(const VerificationReport &r) {
  return {{"is_cp", r.is_cp},
          {"min_choi_eigenvalue", r.min_choi_eigenvalue},
          {"is_unital", r.is_unital},
          {"unital_residual", r.unital_residual},
          {"is_tp", r.is_tp},
          {"tp_residual", r.tp_residual},
          {"interpolation_residuals", r.interpolation_residuals},
          {"max_interpolation_residual", r.max_interpolation_residual()},
          {"kraus_rank", r.kraus_rank},
          {"operator_count", r.operator_count}};
}

inline json encode_birkhoff(const BirkhoffDecomposition &dec,
                            const Eigen::MatrixXd &source) {
  json perms = json::array();
  for (const auto &p : dec.permutations)
    perms.push_back(p);
  return {{"weights", dec.weights},
          {"permutations", perms},
          {"terms", dec.weights.size()},
          {"reconstruction_residual",
           (dec.reconstruct() - source).cwiseAbs().maxCoeff()}};
}

inline json encode_class_verdict(const ClassVerdict &cv) {
  json out = {{"feasible", to_string(cv.verdict)},
              {"class", class_name(cv.cls)},
              {"criterion", cv.criterion},
              {"phase1_objective", cv.lp.phase1_objective},
              {"lp_tolerance", cv.lp.tolerance}};
  if (cv.analytic)
    out["analytic"] = *cv.analytic;
  if (cv.witness) {
    out["witness"] = encode_matrix(cv.witness->entries);
    out["residual"] = cv.witness_residual;
  }
  if (cv.lp.failing_column)
    out["failing_column"] = *cv.lp.failing_column;
  return out;
}

inline Config decode_config(const json &j, Config base = {}) {
  if (!j.is_object())
    throw ParseError("config: expected an object");
  if (j.contains("seed"))
    base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("grid"))
    base.grid = j.at("grid").get<int>();
  if (j.contains("tolerances")) {
    const json &t = j.at("tolerances");
    auto read = [&](const char *key, double &slot) {
      if (t.contains(key))
        slot = finite_number(t.at(key), std::string("tolerances.") + key);
    };
    read("hermitian", base.tol.hermitian);
    read("decomposition", base.tol.decomposition);
    read("unitarity", base.tol.unitarity);
    read("commute", base.tol.commute);
    read("feasibility", base.tol.feasibility);
    read("property", base.tol.property);
    read("numrange", base.tol.numrange);
  }
  return base;
}

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path + ": " + e.what());
  }
}

} // namespace cpinterp::io
