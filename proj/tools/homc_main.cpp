// homc: construct, check, solve, enumerate and verify transition tensors of
// higher-order Markov chains over the canonical JSON formats.

#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homc/analysis.hpp"
#include "homc/characterize.hpp"
#include "homc/constructions.hpp"
#include "homc/json_io.hpp"
#include "homc/solvers.hpp"
#include "homc/tensor.hpp"

namespace {

using namespace homc;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

template <class S>
std::vector<S> parse_matrix(const std::string& text, int n) {
  std::vector<S> out;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if constexpr (scalar_traits<S>::exact) {
        out.push_back(Rational::parse(cell));
      } else {
        out.push_back(std::stod(cell));
      }
    }
  }
  if (out.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("--v: expected " + std::to_string(n) + "x" + std::to_string(n) +
                                " entries ('row1;row2;...' with comma-separated values)");
  }
  return out;
}

template <class S>
std::vector<S> parse_weights(const std::string& text, std::size_t count) {
  std::vector<S> out;
  std::stringstream cells(text);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    if constexpr (scalar_traits<S>::exact) {
      out.push_back(Rational::parse(cell));
    } else {
      out.push_back(std::stod(cell));
    }
  }
  if (out.size() != count) {
    throw std::invalid_argument("--weights: expected " + std::to_string(count) + " values");
  }
  return out;
}

AnyTensor load_tensor(const std::string& path) { return tensor_from_json(load_json(path)); }

void require_valid(const AnyTensor& tensor, double tol) {
  auto issues = std::visit([&](const auto& t) { return validate(t, tol); }, tensor);
  if (!issues.empty()) {
    const int n = std::visit([](const auto& t) { return t.states(); }, tensor);
    const int m = std::visit([](const auto& t) { return t.order(); }, tensor);
    throw std::invalid_argument("input tensor is not a transition law: " +
                                issues.front().describe(n, m) + " (and " +
                                std::to_string(issues.size() - 1) + " more)");
  }
}

struct ConstructArgs {
  int n = 0, m = 2, k = 0;
  std::string variant = "base";
  std::string v_text;
  std::string mode = "rational";
  std::string input;
  std::vector<std::string> inputs;
  std::string weights;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int run_construct_theorem1(const ConstructArgs& a) {
  nlohmann::json out;
  if (a.mode == "rational") {
    ThmOneParams<Rational> params(a.n, parse_matrix<Rational>(a.v_text, a.n));
    out = tensor_to_json(build_theorem1(params));
  } else {
    ThmOneParams<double> params(a.n, parse_matrix<double>(a.v_text, a.n));
    out = tensor_to_json(build_theorem1(params));
  }
  save_json(out, a.output);
  std::cerr << "construct: theorem1 universal family, n=" << a.n << "\n";
  return kExitOk;
}

int run_construct_family(const ConstructArgs& a, bool general_order) {
  ConstructionSpec spec;
  spec.n = a.n;
  spec.m = general_order ? a.m : 2;
  spec.k = a.k;
  spec.variant = variant_from_name(a.variant);
  nlohmann::json out = a.mode == "rational" ? tensor_to_json(build_construction<Rational>(spec))
                                            : tensor_to_json(build_construction<double>(spec));
  save_json(out, a.output);
  std::cerr << "construct: " << (general_order ? "theorem4" : "theorem2") << " variant="
            << variant_name(spec.variant) << " n=" << spec.n << " m=" << spec.m
            << " k=" << spec.k << "\n";
  return kExitOk;
}

int run_construct_lift(const ConstructArgs& a) {
  AnyTensor in = load_tensor(a.input);
  nlohmann::json out = std::visit([](const auto& t) { return tensor_to_json(lift(t)); }, in);
  save_json(out, a.output);
  std::cerr << "construct: theorem3 lift to order "
            << std::visit([](const auto& t) { return t.order(); }, in) + 1 << "\n";
  return kExitOk;
}

int run_construct_permute(const ConstructArgs& a) {
  AnyTensor in = load_tensor(a.input);
  const int n = std::visit([](const auto& t) { return t.states(); }, in);
  const int m = std::visit([](const auto& t) { return t.order(); }, in);
  std::vector<std::int64_t> perm = random_within_class_permutation(n, m, a.seed);
  nlohmann::json out = std::visit(
      [&](const auto& t) { return tensor_to_json(permute_within_classes(t, perm)); }, in);
  save_json(out, a.output);
  std::cerr << "construct: theorem3 within-class column permutation, seed=" << a.seed << "\n";
  return kExitOk;
}

int run_construct_combine(const ConstructArgs& a) {
  if (a.inputs.size() < 2) throw std::invalid_argument("combine: need at least two --inputs");
  std::vector<AnyTensor> loaded;
  bool all_rational = true;
  for (const std::string& path : a.inputs) {
    loaded.push_back(load_tensor(path));
    all_rational = all_rational && std::holds_alternative<TransitionTensor<Rational>>(loaded.back());
  }
  nlohmann::json out;
  if (all_rational && a.mode == "rational") {
    std::vector<TransitionTensor<Rational>> ts;
    for (auto& t : loaded) ts.push_back(std::get<TransitionTensor<Rational>>(std::move(t)));
    ProbabilityVector<Rational> w(parse_weights<Rational>(a.weights, ts.size()));
    out = tensor_to_json(convex_combine<Rational>(ts, w));
  } else {
    std::vector<TransitionTensor<double>> ts;
    for (auto& t : loaded) ts.push_back(as_double(t));
    ProbabilityVector<double> w(parse_weights<double>(a.weights, ts.size()), 1e-9);
    out = tensor_to_json(convex_combine<double>(ts, w));
  }
  save_json(out, a.output);
  std::cerr << "construct: theorem3 convex combination of " << a.inputs.size() << " tensors\n";
  return kExitOk;
}

struct CheckArgs {
  std::string input;
  std::string output = "-";
  double tol = 1e-12;
  bool universal = false;
  bool theorem1 = false;
  bool irreducible = false;
};

int run_check(const CheckArgs& a) {
  AnyTensor tensor = load_tensor(a.input);
  const int n = std::visit([](const auto& t) { return t.states(); }, tensor);
  const int m = std::visit([](const auto& t) { return t.order(); }, tensor);
  nlohmann::json report;
  bool all_pass = true;

  auto issues = std::visit([&](const auto& t) { return validate(t, a.tol); }, tensor);
  report["valid"] = issues.empty();
  report["violations"] = violations_to_json(issues, n, m);
  if (!issues.empty()) all_pass = false;

  if (a.universal) {
    nlohmann::json cert = std::visit(
        [&](const auto& t) { return universal_check_to_json(is_universally_stationary(t, a.tol)); },
        tensor);
    if (!cert.at("universal").get<bool>()) all_pass = false;
    report["universal"] = std::move(cert);
  }
  if (a.theorem1) {
    if (m != 2) throw std::invalid_argument("--theorem1 applies to order-2 tensors only");
    nlohmann::json match;
    std::visit(
        [&](const auto& t) {
          auto result = is_theorem1_form(t, a.tol);
          match["is_theorem1_form"] = result.ok();
          if (result.ok()) {
            nlohmann::json v = nlohmann::json::array();
            const int nn = result.params->states();
            for (int i = 1; i <= nn; ++i) {
              nlohmann::json row = nlohmann::json::array();
              for (int j = 1; j <= nn; ++j) {
                using Scalar = std::decay_t<decltype(t.at(0, 0))>;
                if constexpr (scalar_traits<Scalar>::exact) {
                  row.push_back(result.params->v(i, j).str());
                } else {
                  row.push_back(result.params->v(i, j));
                }
              }
              v.push_back(std::move(row));
            }
            match["v"] = std::move(v);
          } else {
            match["mismatch"] = nlohmann::json{{"slice", result.mismatch->slice},
                                               {"row", result.mismatch->row},
                                               {"column", result.mismatch->column},
                                               {"expected", result.mismatch->expected},
                                               {"actual", result.mismatch->actual},
                                               {"reason", result.mismatch->reason}};
          }
        },
        tensor);
    if (!match.at("is_theorem1_form").get<bool>()) all_pass = false;
    report["theorem1"] = std::move(match);
  }
  if (a.irreducible) {
    nlohmann::json irr = std::visit(
        [&](const auto& t) { return irreducibility_to_json(is_irreducible(t)); }, tensor);
    if (!irr.at("irreducible").get<bool>()) all_pass = false;
    report["irreducibility"] = std::move(irr);
  }
  report["pass"] = all_pass;
  save_json(report, a.output);
  return all_pass ? kExitOk : kExitCheckFailed;
}

struct SolveArgs {
  std::string input;
  std::string output = "-";
  int restarts = 256;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  int max_iter = 5000;
  double damping = 0.2;
  double cluster_radius = 1e-6;
  bool closed_form = false;
};

int run_solve(const SolveArgs& a) {
  AnyTensor tensor = load_tensor(a.input);
  require_valid(tensor, 1e-9);
  const int n = std::visit([](const auto& t) { return t.states(); }, tensor);
  const int m = std::visit([](const auto& t) { return t.order(); }, tensor);

  if (a.closed_form) {
    if (n != 2 || m != 2) {
      throw std::invalid_argument("--closed-form requires a two-state order-2 tensor");
    }
    SolutionSet sol;
    if (const auto* rat = std::get_if<TransitionTensor<Rational>>(&tensor)) {
      EdgeRestriction<Rational> er = restrict_to_edge(*rat, 1, 2);
      sol = solve_quadratic_2x2(er.a1, er.a2, er.b1, er.b2);
    } else {
      EdgeRestriction<double> er = restrict_to_edge(std::get<TransitionTensor<double>>(tensor), 1, 2);
      sol = solve_quadratic_2x2(er.a1, er.a2, er.b1, er.b2);
    }
    nlohmann::json out = solution_set_to_json(sol);
    if (sol.is_interval()) {
      std::cerr << "case " << case_label(sol.case_label) << ": all of [0,1]\n";
    } else {
      std::cerr << "case " << case_label(sol.case_label) << ": " << sol.roots.size()
                << " solution(s)\n";
    }
    save_json(out, a.output);
    return kExitOk;
  }

  SolveOptions opts;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  opts.damping = a.damping;
  opts.cluster_radius = a.cluster_radius;
  SolveReport report = multi_start_solve(as_double(tensor), opts);
  save_json(solve_report_to_json(report), a.output);
  std::cerr << "solve: " << report.points.size() << " stationary point(s) from "
            << report.converged_starts << "/" << report.total_starts << " converged starts\n";
  return kExitOk;
}

struct EnumerateArgs {
  std::string input;
  std::string output = "-";
  std::string expect;
  int resolution = 100;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  int samples = 100;
};

int run_enumerate(const EnumerateArgs& a) {
  AnyTensor tensor = load_tensor(a.input);
  require_valid(tensor, 1e-9);
  const int n = std::visit([](const auto& t) { return t.states(); }, tensor);
  if (n > 5) {
    throw std::invalid_argument("enumerate: grid enumeration is capped at n <= 5 states (lattice "
                                "size grows as C(resolution+n-1, n-1))");
  }
  GridOptions opts;
  opts.resolution = a.resolution;
  opts.refine_tol = a.tol;
  TransitionTensor<double> P = as_double(tensor);
  std::vector<ProbabilityVector<double>> points = enumerate_stationary_grid(P, opts);

  nlohmann::json out;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back(p.entries());
  out["points"] = std::move(pts);
  out["resolution"] = a.resolution;

  int code = kExitOk;
  if (!a.expect.empty()) {
    StationaryDescription desc = description_from_json(load_json(a.expect));
    VerifyOptions vopts;
    vopts.samples = a.samples;
    vopts.seed = a.seed;
    VerificationReport vr = verify_description(P, desc, vopts);
    out["verification"] = verification_report_to_json(vr);
    code = vr.pass ? kExitOk : kExitCheckFailed;
  }
  save_json(out, a.output);
  std::cerr << "enumerate: " << points.size() << " stationary point(s) at resolution "
            << a.resolution << "\n";
  return code;
}

struct VerifyArgs {
  std::string input;
  std::string description;
  std::string output = "-";
  int samples = 100;
  std::uint64_t seed = 0;
  double tol = 1e-12;
};

int run_verify(const VerifyArgs& a) {
  AnyTensor tensor = load_tensor(a.input);
  require_valid(tensor, 1e-9);
  StationaryDescription desc = description_from_json(load_json(a.description));
  VerifyOptions opts;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.membership_tol = a.tol;
  VerificationReport report = verify_description(as_double(tensor), desc, opts);
  save_json(verification_report_to_json(report), a.output);
  std::cerr << "verify: " << (report.pass ? "pass" : "fail") << " (" << report.detail << ")\n";
  return report.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary vectors of higher-order Markov chains"};
  app.require_subcommand(1);

  ConstructArgs cons;
  CheckArgs chk;
  SolveArgs slv;
  EnumerateArgs enu;
  VerifyArgs ver;
  std::function<int()> action;

  auto* construct = app.add_subcommand("construct", "build a transition tensor");
  construct->require_subcommand(1);

  auto add_mode_output = [&](CLI::App* cmd) {
    cmd->add_option("--mode", cons.mode, "arithmetic mode: rational (default) or float")
        ->check(CLI::IsMember({"rational", "float"}));
    cmd->add_option("-o,--output", cons.output, "output path ('-' for stdout)");
  };

  auto* t1 = construct->add_subcommand("theorem1", "universal-stationarity family (order 2)");
  t1->add_option("--n", cons.n, "number of states")->required();
  t1->add_option("--v", cons.v_text, "coupling matrix, rows ';'-separated, e.g. \"0,0.5;0.5,0\"")
      ->required();
  add_mode_output(t1);
  t1->callback([&] { action = [&] { return run_construct_theorem1(cons); }; });

  auto* t2 = construct->add_subcommand("theorem2", "prescribed stationary sets, order 2");
  t2->add_option("--n", cons.n, "number of states")->required();
  t2->add_option("--k", cons.k, "face size / point count parameter")->required();
  t2->add_option("--variant", cons.variant,
                 "base | two-points | k-points | n-plus-1-points | face | disconnected")
      ->required();
  add_mode_output(t2);
  t2->callback([&] { action = [&] { return run_construct_family(cons, false); }; });

  auto* t4 = construct->add_subcommand("theorem4", "prescribed stationary sets, any order");
  t4->add_option("--n", cons.n, "number of states")->required();
  t4->add_option("--m", cons.m, "chain order (>= 2)")->required();
  t4->add_option("--k", cons.k, "face size / point count parameter")->required();
  t4->add_option("--variant", cons.variant,
                 "base | two-points | k-points | n-plus-1-points | face | disconnected")
      ->required();
  add_mode_output(t4);
  t4->callback([&] { action = [&] { return run_construct_family(cons, true); }; });

  auto* lf = construct->add_subcommand("lift", "raise the order by one: [P | ... | P]");
  lf->add_option("--input", cons.input, "input tensor JSON")->required();
  lf->add_option("-o,--output", cons.output, "output path");
  lf->callback([&] { action = [&] { return run_construct_lift(cons); }; });

  auto* pm = construct->add_subcommand("permute", "random within-class column permutation");
  pm->add_option("--input", cons.input, "input tensor JSON")->required();
  pm->add_option("--seed", cons.seed, "permutation seed");
  pm->add_option("-o,--output", cons.output, "output path");
  pm->callback([&] { action = [&] { return run_construct_permute(cons); }; });

  auto* cb = construct->add_subcommand("combine", "convex combination of tensors");
  cb->add_option("--inputs", cons.inputs, "input tensor JSON paths")->required()->expected(-2);
  cb->add_option("--weights", cons.weights, "comma-separated weights, e.g. \"1/2,1/4,1/4\"")
      ->required();
  add_mode_output(cb);
  cb->callback([&] { action = [&] { return run_construct_combine(cons); }; });

  auto* check = app.add_subcommand("check", "validate a tensor and test properties");
  check->add_option("--input", chk.input, "tensor JSON")->required();
  check->add_option("-o,--output", chk.output, "report path");
  check->add_option("--tol", chk.tol, "tolerance for float-mode checks");
  check->add_flag("--universal", chk.universal, "test universal stationarity (class sums)");
  check->add_flag("--theorem1", chk.theorem1, "match against the order-2 universal family");
  check->add_flag("--irreducible", chk.irreducible, "test tensor irreducibility");
  check->callback([&] { action = [&] { return run_check(chk); }; });

  auto* solve = app.add_subcommand("solve", "find stationary vectors");
  solve->add_option("--input", slv.input, "tensor JSON")->required();
  solve->add_option("-o,--output", slv.output, "report path");
  solve->add_option("--restarts", slv.restarts, "number of starts")->check(CLI::PositiveNumber);
  solve->add_option("--seed", slv.seed, "random seed");
  solve->add_option("--tol", slv.tol, "residual tolerance");
  solve->add_option("--max-iter", slv.max_iter, "iteration cap per start");
  solve->add_option("--damping", slv.damping, "damping factor in [0,1)");
  solve->add_option("--cluster-radius", slv.cluster_radius, "max-norm clustering radius");
  solve->add_flag("--closed-form", slv.closed_form,
                  "use the exact two-state order-2 solution (n = m = 2 only)");
  solve->callback([&] { action = [&] { return run_solve(slv); }; });

  auto* enumerate = app.add_subcommand("enumerate", "exhaustive simplex-grid search (n <= 5)");
  enumerate->add_option("--input", enu.input, "tensor JSON")->required();
  enumerate->add_option("-o,--output", enu.output, "report path");
  enumerate->add_option("--resolution", enu.resolution, "lattice resolution")
      ->check(CLI::PositiveNumber);
  enumerate->add_option("--tol", enu.tol, "residual tolerance for reported points");
  enumerate->add_option("--expect", enu.expect, "stationary-set description JSON to verify");
  enumerate->add_option("--seed", enu.seed, "sampling seed for --expect");
  enumerate->add_option("--samples", enu.samples, "samples for --expect verification");
  enumerate->callback([&] { action = [&] { return run_enumerate(enu); }; });

  auto* verify = app.add_subcommand("verify", "verify a claimed stationary-set description");
  verify->add_option("--input", ver.input, "tensor JSON")->required();
  verify->add_option("--description", ver.description, "description JSON")->required();
  verify->add_option("-o,--output", ver.output, "report path");
  verify->add_option("--samples", ver.samples, "membership/exclusion samples");
  verify->add_option("--seed", ver.seed, "sampling seed");
  verify->add_option("--tol", ver.tol, "membership residual tolerance");
  verify->callback([&] { action = [&] { return run_verify(ver); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
