#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "hcm/config.hpp"

namespace hcm {

using json = nlohmann::json;

/// One violated check inside a suite run: enough serialized input to replay
/// the single check in isolation.
struct FailureRecord {
  std::string check;   // replay dispatch key
  json inputs;         // serialized fixtures and parameters
  std::vector<double> margins;
  std::string note;
};

/// Structured outcome of a theorem suite.
struct VerificationReport {
  std::string suite_id;
  std::string theorem_ref;
  int trials = 0;
  std::uint64_t seed = 0;
  ToleranceConfig config;
  std::vector<FailureRecord> failures;
  std::vector<json> witnesses; // notable positive findings (counterexamples etc.)
  json details;                // per-suite extras
  double elapsed_seconds = 0;

  bool passed() const { return failures.empty(); }

  void fail(std::string check, json inputs, std::vector<double> margins,
            std::string note = {}) {
    failures.push_back({std::move(check), std::move(inputs), std::move(margins),
                        std::move(note)});
  }
};

inline void to_json(json& j, const ToleranceConfig& c) {
  j = json{{"eq_tol", c.eq_tol},
           {"psd_tol", c.psd_tol},
           {"opt_tol", c.opt_tol},
           {"sing_tol", c.sing_tol}};
}

inline void from_json(const json& j, ToleranceConfig& c) {
  j.at("eq_tol").get_to(c.eq_tol);
  j.at("psd_tol").get_to(c.psd_tol);
  j.at("opt_tol").get_to(c.opt_tol);
  j.at("sing_tol").get_to(c.sing_tol);
}

inline void to_json(json& j, const FailureRecord& f) {
  j = json{{"check", f.check}, {"inputs", f.inputs}, {"margins", f.margins}, {"note", f.note}};
}

inline void from_json(const json& j, FailureRecord& f) {
  j.at("check").get_to(f.check);
  f.inputs = j.at("inputs");
  j.at("margins").get_to(f.margins);
  j.at("note").get_to(f.note);
}

inline void to_json(json& j, const VerificationReport& r) {
  j = json{{"suite_id", r.suite_id},
           {"theorem_ref", r.theorem_ref},
           {"trials", r.trials},
           {"seed", r.seed},
           {"config", r.config},
           {"passed", r.passed()},
           {"failures", r.failures},
           {"witnesses", r.witnesses},
           {"details", r.details},
           {"elapsed_seconds", r.elapsed_seconds}};
}

inline void from_json(const json& j, VerificationReport& r) {
  j.at("suite_id").get_to(r.suite_id);
  j.at("theorem_ref").get_to(r.theorem_ref);
  j.at("trials").get_to(r.trials);
  j.at("seed").get_to(r.seed);
  j.at("config").get_to(r.config);
  j.at("failures").get_to(r.failures);
  r.witnesses = j.at("witnesses").get<std::vector<json>>();
  r.details = j.at("details");
  j.at("elapsed_seconds").get_to(r.elapsed_seconds);
}

/// Report serialization with the timing field zeroed, for byte-for-byte
/// determinism comparisons.
inline std::string report_canonical_dump(const VerificationReport& r, int indent = 2) {
  json j = r;
  j["elapsed_seconds"] = 0.0;
  return j.dump(indent);
}

} // namespace hcm
