//
// Copyright 2026 The privsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// JSON file formats:
//   quality vector   {"labels": [...], "scores": [...]}
//   neighbor pairs   {"pairs": [{"q1": <quality>, "q2": <quality>}, ...]}
//   distribution     {"labels": [...], "probabilities": [...], "provenance": "..."}
//   audit report     {"bound": x, "worst_ratio": x, "pass": b, "per_pair": [...]}
//   utility report   {"per_instance": [...], "dominance_violations": n}
// An infinite audit ratio is written as null.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "privsel/audit.hpp"
#include "privsel/core.hpp"
#include "privsel/error.hpp"

namespace privsel::io {

using Json = nlohmann::json;

namespace internal {

template <typename T>
T Field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::kParseError,
                std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("field '") + name + "': " + e.what());
  }
}

inline double RatioFromJson(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

inline Json RatioToJson(double r) {
  if (std::isinf(r)) return nullptr;
  return r;
}

}  // namespace internal

inline QualityVector QualityFromJson(const Json& j) {
  return {internal::Field<std::vector<std::string>>(j, "labels"),
          internal::Field<std::vector<double>>(j, "scores")};
}

inline Json QualityToJson(const QualityVector& q) {
  return {{"labels", q.labels}, {"scores", q.scores}};
}

inline std::vector<NeighborPair> PairsFromJson(const Json& j) {
  const auto entries = internal::Field<std::vector<Json>>(j, "pairs");
  std::vector<NeighborPair> pairs;
  pairs.reserve(entries.size());
  for (const Json& e : entries) {
    pairs.push_back({QualityFromJson(internal::Field<Json>(e, "q1")),
                     QualityFromJson(internal::Field<Json>(e, "q2"))});
  }
  return pairs;
}

inline Json PairsToJson(const std::vector<NeighborPair>& pairs) {
  Json list = Json::array();
  for (const auto& p : pairs) {
    list.push_back({{"q1", QualityToJson(p.q1)}, {"q2", QualityToJson(p.q2)}});
  }
  return {{"pairs", list}};
}

inline std::string ProvenanceToString(const Provenance& p) {
  switch (p.kind) {
    case Provenance::Kind::kExactClosedForm: return "exact-closed-form";
    case Provenance::Kind::kExactEnumeration: return "exact-enumeration";
    case Provenance::Kind::kQuadrature: return "quadrature";
    case Provenance::Kind::kEmpirical:
      return "empirical(n=" + std::to_string(p.samples) +
             ",seed=" + std::to_string(p.seed) + ")";
  }
  return "";
}

inline Provenance ProvenanceFromString(const std::string& s) {
  if (s == "exact-closed-form") return {Provenance::Kind::kExactClosedForm};
  if (s == "exact-enumeration") return {Provenance::Kind::kExactEnumeration};
  if (s == "quadrature") return {Provenance::Kind::kQuadrature};
  static const std::regex kEmpirical(R"(empirical\(n=(\d+),seed=(\d+)\))");
  std::smatch m;
  if (std::regex_match(s, m, kEmpirical)) {
    return Provenance::Empirical(std::stoull(m[1].str()), std::stoull(m[2].str()));
  }
  throw Error(ErrorCode::kParseError, "unknown provenance '" + s + "'");
}

inline Json TableToJson(const ProbabilityTable& t) {
  return {{"labels", t.labels},
          {"probabilities", t.probabilities},
          {"provenance", ProvenanceToString(t.provenance)}};
}

inline ProbabilityTable TableFromJson(const Json& j) {
  return MakeTable(internal::Field<std::vector<std::string>>(j, "labels"),
                   internal::Field<std::vector<double>>(j, "probabilities"),
                   ProvenanceFromString(internal::Field<std::string>(j, "provenance")));
}

inline Json AuditToJson(const AuditReport& r) {
  Json per_pair = Json::array();
  for (const auto& p : r.per_pair) {
    per_pair.push_back({{"pair_index", p.pair_index},
                        {"worst_label", p.worst_label},
                        {"ratio", internal::RatioToJson(p.ratio)}});
  }
  return {{"bound", r.bound},
          {"worst_ratio", internal::RatioToJson(r.worst_ratio)},
          {"pass", r.pass},
          {"per_pair", per_pair}};
}

inline AuditReport AuditFromJson(const Json& j) {
  AuditReport r;
  r.bound = internal::Field<double>(j, "bound");
  r.worst_ratio = internal::RatioFromJson(internal::Field<Json>(j, "worst_ratio"));
  r.pass = internal::Field<bool>(j, "pass");
  for (const Json& e : internal::Field<std::vector<Json>>(j, "per_pair")) {
    r.per_pair.push_back({internal::Field<std::size_t>(e, "pair_index"),
                          internal::Field<std::string>(e, "worst_label"),
                          internal::RatioFromJson(internal::Field<Json>(e, "ratio"))});
  }
  return r;
}

inline Json UtilityToJson(const UtilityReport& r) {
  Json per = Json::array();
  for (const auto& u : r.per_instance) {
    per.push_back({{"instance_id", u.instance_id},
                   {"expected_error_pf", u.expected_error_pf},
                   {"expected_error_em", u.expected_error_em}});
  }
  return {{"per_instance", per}, {"dominance_violations", r.dominance_violations}};
}

inline UtilityReport UtilityFromJson(const Json& j) {
  UtilityReport r;
  r.dominance_violations = internal::Field<std::size_t>(j, "dominance_violations");
  for (const Json& e : internal::Field<std::vector<Json>>(j, "per_instance")) {
    r.per_instance.push_back({internal::Field<std::size_t>(e, "instance_id"),
                              internal::Field<double>(e, "expected_error_pf"),
                              internal::Field<double>(e, "expected_error_em")});
  }
  return r;
}

inline Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, "'" + path + "': " + e.what());
  }
}

// Full double precision (shortest round-trip representation).
inline void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace privsel::io
