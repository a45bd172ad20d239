// Command-line front end: orthogonality checks, form factorization,
// preservation checks, and the theorem verification suites, all on JSON
// fixtures, with seeded deterministic output.
//
// Exit codes: 0 = pass / relation holds, 1 = relation fails or a theorem
// check found a violation, 2 = configuration or fixture error.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "hcm/hcm.hpp"

namespace {

using namespace hcm;

struct ToleranceFlags {
  double eq = -1, psd = -1, opt = -1, sing = -1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-eq", eq, "equality tolerance override");
    cmd->add_option("--tol-psd", psd, "eigenvalue floor override");
    cmd->add_option("--tol-opt", opt, "optimizer slack override");
    cmd->add_option("--tol-sing", sing, "invertibility cutoff override");
  }

  Config apply() const {
    Config cfg;
    if (eq > 0) cfg.tol.eq_tol = eq;
    if (psd > 0) cfg.tol.psd_tol = psd;
    if (opt > 0) cfg.tol.opt_tol = opt;
    if (sing > 0) cfg.tol.sing_tol = sing;
    if (!cfg.tol.valid()) throw CLI::ValidationError("tolerances must be positive");
    return cfg;
  }
};

AlgebraShape parse_shape(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) dims.push_back(std::stoi(part));
  return AlgebraShape(dims);
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << std::endl;
  else
    write_json_file(out_path, j);
}

int run_check_orth(const std::string& relation, const std::string& method,
                   const std::string& x_path, const std::string& y_path,
                   std::uint64_t seed, const Config& cfg, const std::string& out_path) {
  ModuleVector x = load_json_file(x_path).get<ModuleVector>();
  ModuleVector y = load_json_file(y_path).get<ModuleVector>();

  OrthogonalityVerdict v;
  if (relation == "ip") v = ip_orthogonal(x, y, cfg);
  else if (relation == "bj")
    v = (method == "witness") ? bj_orthogonal_witness(x, y, cfg)
                              : bj_orthogonal_minimize(x, y, cfg);
  else if (relation == "sbj") v = strong_bj_orthogonal(x, y, cfg);
  else if (relation == "reversed") v = reversed_action_condition(x, y, cfg, seed);
  else if (relation == "mod") v = modulus_condition(x, y, cfg, seed);
  else if (relation == "mod2") v = squared_modulus_condition(x, y, cfg, seed);
  else throw CLI::ValidationError("unknown relation: " + relation);

  json j = v;
  j["seed"] = seed;
  emit(j, out_path);
  return v.holds ? 0 : 1;
}

int run_factorize(const std::string& e_path, const std::string& f_path, std::uint64_t seed,
                  bool experimental, const Config& cfg, const std::string& out_path) {
  MultiForm e = load_json_file(e_path).get<MultiForm>();
  MultiForm f = load_json_file(f_path).get<MultiForm>();
  auto outcome = factorize_pair(e, f, cfg, seed, experimental);
  json j;
  int code = 0;
  if (factorize_ok(outcome)) {
    const auto& r = std::get<FactorizationResult>(outcome);
    j = json{{"status", "ok"},
             {"c", r.c},
             {"residual", r.residual},
             {"h_variation", r.h_variation}};
  } else {
    const auto& err = std::get<FactorizeError>(outcome);
    const char* kind = err.kind == FactorizeErrorKind::NotStrong ? "not-strong"
                       : err.kind == FactorizeErrorKind::UnsupportedShape
                           ? "unsupported-shape"
                           : "preservation-violated";
    j = json{{"status", kind}, {"detail", err.detail}, {"witness", err.witness}};
    code = err.kind == FactorizeErrorKind::UnsupportedShape ? 2 : 1;
  }
  j["seed"] = seed;
  emit(j, out_path);
  return code;
}

int run_preserve_check(const std::string& e_path, const std::string& f_path, int trials,
                       std::uint64_t seed, const Config& cfg, const std::string& out_path) {
  MultiForm e = load_json_file(e_path).get<MultiForm>();
  MultiForm f = load_json_file(f_path).get<MultiForm>();
  auto rep = preservation_check(e, f, trials, seed, cfg);
  json j = rep;
  emit(j, out_path);
  return rep.passed() ? 0 : 1;
}

int run_run_suite(const std::string& id, const SuiteParams& params,
                  const std::string& out_path) {
  bool known = false;
  for (const auto& s : suite_registry()) known |= (s.id == id);
  if (!known) throw CLI::ValidationError("unknown suite id: " + id);
  auto rep = run_suite(id, params);
  emit(json(rep), out_path);
  return rep.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional Hilbert C*-module orthogonality toolkit"};
  app.require_subcommand(1);

  std::string relation, method = "minimize", x_path, y_path, e_path, f_path, out_path;
  std::string suite_id, shape_text = "2", example_id;
  std::uint64_t seed = 42;
  int trials = 200, k = 1, arity = 2;
  bool experimental = false;
  ToleranceFlags tols;

  auto* check = app.add_subcommand("check-orth", "decide an orthogonality relation");
  check->add_option("--relation", relation, "ip|bj|sbj|reversed|mod|mod2")->required();
  check->add_option("--method", method, "bj implementation: minimize|witness");
  check->add_option("--x", x_path, "module vector fixture")->required();
  check->add_option("--y", y_path, "module vector fixture")->required();
  check->add_option("--seed", seed, "search seed");
  check->add_option("--out", out_path, "write the verdict JSON here");
  tols.attach(check);

  ToleranceFlags ftols;
  auto* fact = app.add_subcommand("factorize", "factor F = cE for multi-A-linear forms");
  fact->add_option("--E", e_path, "form fixture")->required();
  fact->add_option("--F", f_path, "form fixture")->required();
  fact->add_option("--seed", seed, "witness search seed");
  fact->add_flag("--experimental", experimental,
                 "run on a non-abelian shape with n = 2 and report outcomes");
  fact->add_option("--out", out_path, "write the result JSON here");
  ftols.attach(fact);

  ToleranceFlags ptols;
  auto* pres = app.add_subcommand("preserve-check",
                                  "orthogonality preservation on kernel tuples");
  pres->add_option("--E", e_path, "form fixture")->required();
  pres->add_option("--F", f_path, "form fixture")->required();
  pres->add_option("--trials", trials, "kernel tuples to test");
  pres->add_option("--seed", seed, "sampling seed");
  pres->add_option("--out", out_path, "write the report JSON here");
  ptols.attach(pres);

  ToleranceFlags stols;
  auto* run = app.add_subcommand("run-suite", "run a theorem verification suite");
  run->add_option("--id", suite_id, "suite id (see --list)")->required();
  run->add_option("--shape", shape_text, "block dims, comma separated (e.g. 2 or 1,1)");
  run->add_option("--k", k, "module rank");
  run->add_option("--n", arity, "form arity (factorization suite)");
  run->add_option("--trials", trials, "trial count");
  run->add_option("--seed", seed, "suite seed");
  run->add_option("--out", out_path, "write the report JSON here");
  stols.attach(run);

  auto* repro = app.add_subcommand("reproduce", "reproduce a named example");
  repro->add_option("--example", example_id, "example id: 2.1")->required();
  repro->add_option("--out", out_path, "write the report JSON here");

  auto* list = app.add_subcommand("list-suites", "print the suite registry");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return run_check_orth(relation, method, x_path, y_path, seed, tols.apply(), out_path);
    if (fact->parsed())
      return run_factorize(e_path, f_path, seed, experimental, ftols.apply(), out_path);
    if (pres->parsed())
      return run_preserve_check(e_path, f_path, trials, seed, ptols.apply(), out_path);
    if (run->parsed()) {
      SuiteParams params;
      params.shape = parse_shape(shape_text);
      params.k = k;
      params.n = arity;
      params.trials = trials;
      params.seed = seed;
      params.cfg = stols.apply();
      return run_run_suite(suite_id, params, out_path);
    }
    if (repro->parsed()) {
      if (example_id != "2.1")
        throw CLI::ValidationError("unknown example: " + example_id);
      auto rep = suite_example_2_1();
      emit(json(rep), out_path);
      return rep.passed() ? 0 : 1;
    }
    if (list->parsed()) {
      json j = json::array();
      for (const auto& s : suite_registry())
        j.push_back(json{{"id", s.id},
                         {"theorem_refs", s.theorem_refs},
                         {"description", s.description}});
      emit(j, out_path);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // malformed fixtures, unknown keys, dimension mismatches
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
