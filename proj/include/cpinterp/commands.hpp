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

// Subcommand bodies of the cpinterp CLI, operating on parsed JSON documents.
// Exit codes are part of the interface:
//   0 success, 2 non-commuting family, 3 parse/shape error,
//   4 infeasible class or invalid input matrix, 5 unsupported class
//   combination, 1 internal failure.

#include <optional>
#include <string>
#include <vector>

#include "cpinterp/classify.hpp"
#include "cpinterp/config.hpp"
#include "cpinterp/construct.hpp"
#include "cpinterp/io.hpp"
#include "cpinterp/linalg.hpp"
#include "cpinterp/verify.hpp"

namespace cpinterp::cli {

using io::json;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kNonCommuting = 2,
  kParse = 3,
  kInfeasible = 4,
  kUnsupported = 5,
};

struct CommandResult {
  int exit_code = kOk;
  json report;
  std::string message; // human-readable diagnostic for stderr
};

namespace detail {

inline json base_report(const char *command) {
  return {{"version", io::kReportVersion},
          {"command", command},
          {"diagnostics", json::array()}};
}

inline CommandResult failure(json report, int code, std::string message) {
  report["error"] = {{"exit_code", code}, {"message", message}};
  return {code, std::move(report), std::move(message)};
}

struct Diagonalized {
  SpectrumTable a, b;
};

// Commutation check then joint diagonalization of both families.
inline std::optional<CommandResult> diagonalize(const io::Problem &p,
                                                const Config &cfg, json &report,
                                                Diagonalized &out) {
  const struct {
    const std::vector<HermitianMatrix> *family;
    const char *name;
  } families[] = {{&p.a, "A"}, {&p.b, "B"}};
  for (const auto &f : families) {
    const CommutatorReport c = commutator_report(*f.family, cfg.tol.commute);
    if (!c.commuting) {
      report["non_commuting"] = {{"family", f.name},
                                 {"pair", {c.first, c.second}},
                                 {"commutator_norm", c.norm}};
      return failure(std::move(report), kNonCommuting,
                     std::string("family ") + f.name + " does not commute: ||" +
                         f.name + "[" + std::to_string(c.first) + "], " +
                         f.name + "[" + std::to_string(c.second) +
                         "]|| = " + std::to_string(c.norm));
    }
  }
  out.a = simultaneous_diagonalize(p.a, cfg.seed, cfg.tol.decomposition);
  out.b = simultaneous_diagonalize(p.b, cfg.seed, cfg.tol.decomposition);
  report["dimensions"] = {
      {"k", p.a.size()}, {"n", out.a.n}, {"m", out.b.n}};
  report["spectra"] = {{"a_table", io::encode_matrix(out.a.table)},
                       {"b_table", io::encode_matrix(out.b.table)}};
  return std::nullopt;
}

inline json encode_classes(const FeasibilityReport &fr) {
  json classes = json::object();
  for (StochasticClass c : kAllClasses)
    classes[class_key(c)] = io::encode_class_verdict(fr[c]);
  return classes;
}

inline void add_warnings(json &report, const io::Problem &p) {
  for (const auto &w : p.warnings)
    report["diagnostics"].push_back(w);
}

// Runs the verifier and fails the command when the map misses its targets.
template <typename Map>
inline std::optional<CommandResult>
verify_before_emit(const Map &map, const io::Problem &p, const Config &cfg,
                   json &report, StochasticClass cls) {
  const VerificationReport v = check_properties(map, p.pairs(), cfg.tol.property);
  report["verification"] = io::encode_verification(v);
  double scale = 1.0;
  for (const auto &b : p.b)
    scale = std::max(scale, max_abs(b.matrix()));
  bool ok = v.is_cp && v.max_interpolation_residual() <= cfg.tol.property * scale;
  if (needs_column_sums(cls))
    ok = ok && v.is_unital;
  if (needs_row_sums(cls))
    ok = ok && v.is_tp;
  if (!ok)
    return failure(std::move(report), kInternal,
                   "synthesized map failed re-verification");
  return std::nullopt;
}

} // namespace detail

//============================================================================
// analyze
//============================================================================

inline CommandResult cmd_analyze(const json &problem_doc, const Config &cfg = {}) {
  json report = detail::base_report("analyze");
  try {
    const io::Problem p = io::decode_problem(problem_doc, cfg.tol.hermitian);
    detail::add_warnings(report, p);
    detail::Diagonalized d;
    if (auto fail = detail::diagonalize(p, cfg, report, d))
      return *fail;
    const FeasibilityReport fr = classify(d.a, d.b, cfg.tol.feasibility);
    report["classes"] = detail::encode_classes(fr);
    return {kOk, std::move(report), ""};
  } catch (const InputError &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const json::exception &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const std::exception &e) {
    return detail::failure(std::move(report), kInternal, e.what());
  }
}

//============================================================================
// synthesize
//============================================================================

inline const std::vector<std::string> &synthesis_classes() {
  static const std::vector<std::string> names = {
      "cp", "unital", "tp", "utp", "mixed-unitary", "equal-weight"};
  return names;
}

inline CommandResult cmd_synthesize(const json &problem_doc,
                                    const std::string &requested,
                                    const Config &cfg = {}) {
  json report = detail::base_report("synthesize");
  report["class"] = requested;
  try {
    const io::Problem p = io::decode_problem(problem_doc, cfg.tol.hermitian);
    detail::add_warnings(report, p);

    if (requested == "equal-weight") {
      if (p.a.size() != 1 || p.a.front().dim() != p.b.front().dim())
        return detail::failure(std::move(report), kUnsupported,
                               "equal-weight needs a single pair with n == m");
      const EigenDecomposition ea = eig_hermitian(p.a.front(), cfg.tol.decomposition);
      const EigenDecomposition eb = eig_hermitian(p.b.front(), cfg.tol.decomposition);
      const SingleSpectrumPair pair(ea.values, eb.values);
      report["dimensions"] = {{"k", 1}, {"n", pair.n()}, {"m", pair.m()}};
      if (!majorizes(pair)) {
        report["failed_criterion"] = "majorization";
        return detail::failure(std::move(report), kInfeasible,
                               "spectrum of B is not majorized by that of A");
      }
      const MixedUnitaryMap mu = equal_weight_unitaries(p.a.front(), p.b.front());
      report["map"] = io::encode_map(mu);
      if (auto fail = detail::verify_before_emit(mu, p, cfg, report,
                                                 StochasticClass::DoublyStochastic))
        return *fail;
      return {kOk, std::move(report), ""};
    }

    const bool mixed = requested == "mixed-unitary";
    const std::optional<StochasticClass> cls =
        mixed ? std::optional(StochasticClass::DoublyStochastic)
              : parse_class(requested);
    if (!cls)
      return detail::failure(std::move(report), kUnsupported,
                             "unknown class '" + requested + "'");

    detail::Diagonalized d;
    if (auto fail = detail::diagonalize(p, cfg, report, d))
      return *fail;
    const FeasibilityReport fr = classify(d.a, d.b, cfg.tol.feasibility);
    report["classes"] = detail::encode_classes(fr);
    const ClassVerdict &cv = fr[*cls];
    if (cv.verdict != Verdict::Feasible || !cv.witness) {
      report["failed_criterion"] = cv.criterion;
      return detail::failure(std::move(report), kInfeasible,
                             std::string("class ") + class_key(*cls) + " is " +
                                 (cv.verdict == Verdict::Marginal
                                      ? "marginal at this tolerance"
                                      : "infeasible") +
                                 " (" + cv.criterion + ")");
    }
    report["transfer_matrix"] = io::encode_matrix(cv.witness->entries);
    const ComplexMatrix &u = d.a.diagonalizer;
    const ComplexMatrix v = d.b.diagonalizer.adjoint();

    if (mixed) {
      const BirkhoffDecomposition dec =
          birkhoff_decompose(TransferMatrix{cv.witness->entries, *cls});
      report["birkhoff"] = io::encode_birkhoff(dec, cv.witness->entries);
      const MixedUnitaryMap mu = mixed_unitary_from_decomposition(dec, u, v);
      report["map"] = io::encode_map(mu);
      if (auto fail = detail::verify_before_emit(mu, p, cfg, report, *cls))
        return *fail;
      return {kOk, std::move(report), ""};
    }

    const KrausMap k = kraus_from_transfer(*cv.witness, u, v, 1e-9);
    report["map"] = io::encode_map(k);
    if (auto fail = detail::verify_before_emit(k, p, cfg, report, *cls))
      return *fail;
    return {kOk, std::move(report), ""};
  } catch (const InputError &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const json::exception &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const std::exception &e) {
    return detail::failure(std::move(report), kInternal, e.what());
  }
}

//============================================================================
// verify
//============================================================================

inline CommandResult cmd_verify(const json &map_doc, const json &problem_doc,
                                const Config &cfg = {}) {
  json report = detail::base_report("verify");
  try {
    const io::LoadedMap map = io::decode_map(map_doc);
    const io::Problem p = io::decode_problem(problem_doc, cfg.tol.hermitian);
    detail::add_warnings(report, p);
    if (p.a.front().dim() != map.input_dim() ||
        p.b.front().dim() != map.output_dim())
      return detail::failure(std::move(report), kParse,
                             "map dimensions do not match the problem");
    const VerificationReport v =
        map.kraus ? check_properties(*map.kraus, p.pairs(), cfg.tol.property)
                  : check_properties(*map.mixed, p.pairs(), cfg.tol.property);
    report["verification"] = io::encode_verification(v);
    return {kOk, std::move(report), ""};
  } catch (const InputError &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const json::exception &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const std::exception &e) {
    return detail::failure(std::move(report), kInternal, e.what());
  }
}

//============================================================================
// decompose
//============================================================================

inline CommandResult cmd_decompose(const json &matrix_doc, const Config &cfg = {}) {
  (void)cfg;
  json report = detail::base_report("decompose");
  try {
    const ComplexMatrix m = io::decode_matrix_document(matrix_doc);
    if (m.rows() != m.cols() || m.rows() == 0)
      return detail::failure(std::move(report), kInfeasible,
                             "matrix is not square");
    if (max_abs(m.imag()) > 1e-12)
      return detail::failure(std::move(report), kInfeasible,
                             "matrix has non-real entries");
    const Eigen::MatrixXd d = m.real();
    if (!satisfies_class(d, StochasticClass::DoublyStochastic, 1e-9)) {
      report["class_violation"] =
          class_violation(d, StochasticClass::DoublyStochastic);
      return detail::failure(std::move(report), kInfeasible,
                             "matrix is not doubly stochastic");
    }
    const BirkhoffDecomposition dec =
        birkhoff_decompose(TransferMatrix{d, StochasticClass::DoublyStochastic});
    report["birkhoff"] = io::encode_birkhoff(dec, d);
    return {kOk, std::move(report), ""};
  } catch (const InputError &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const json::exception &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const std::exception &e) {
    return detail::failure(std::move(report), kInternal, e.what());
  }
}

//============================================================================
// numrange
//============================================================================

// W(B) inside W(A), sampled on `grid` support directions.
inline CommandResult cmd_numrange(const json &a_doc, const json &b_doc,
                                  const Config &cfg = {}) {
  json report = detail::base_report("numrange");
  try {
    const ComplexMatrix a = io::decode_matrix_document(a_doc);
    const ComplexMatrix b = io::decode_matrix_document(b_doc);
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() == 0 ||
        b.rows() == 0)
      return detail::failure(std::move(report), kParse,
                             "numerical range needs non-empty square matrices");
    const double tol =
        cfg.tol.numrange * (1.0 + operator_norm(a) + operator_norm(b));
    const NumrangeReport nr = numrange_compare(b, a, cfg.grid, tol);
    report["contained"] = nr.contained;
    report["grid"] = cfg.grid;
    report["tol"] = nr.tol;
    report["worst_margin"] = nr.worst_margin;
    report["angles"] = nr.angles;
    report["margins"] = nr.margins;
    if (a.rows() == 2) {
      report["criterion_applicable"] = true;
    } else if (a.rows() == 3) {
      const double red = reducibility_residual(a);
      report["reducibility_residual"] = red;
      report["criterion_applicable"] = red <= 1e-8 * (1.0 + operator_norm(a));
      report["diagnostics"].push_back(
          "unitary reducibility of A is a numerical heuristic");
    } else {
      report["criterion_applicable"] = false;
    }
    return {kOk, std::move(report), ""};
  } catch (const InputError &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const json::exception &e) {
    return detail::failure(std::move(report), kParse, e.what());
  } catch (const std::exception &e) {
    return detail::failure(std::move(report), kInternal, e.what());
  }
}

} // namespace cpinterp::cli
