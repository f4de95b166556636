//------------------------------------------------------------------------------
//
//   Copyright 2026 The Clinch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
//
// Command-line front end.
//
//   clinch run   --mechanism clinching|hetero-div|hetero-rand|oracle ...
//   clinch check ir|npt|po-nt|po-structural|vm|pi|wmon|ic ...
//   clinch demo  multidim|singdim ...
//
// Verdict exit codes for `check`: 0 holds, 1 violated, 4 inconclusive.
// Everywhere: 2 invalid input, 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "clinch/bridge.hpp"
#include "clinch/certificates.hpp"
#include "clinch/checkers.hpp"
#include "clinch/clinching.hpp"
#include "clinch/hetero.hpp"
#include "clinch/io.hpp"
#include "clinch/oracle.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;
constexpr int kExitInconclusive = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AUCTION_SEED")) {
    try {
      return static_cast<std::uint64_t>(std::stoull(env));
    } catch (...) {
      throw std::invalid_argument("AUCTION_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void print_outcome_table(const clinch::Outcome& out, const clinch::AnyInstance& inst) {
  std::printf("%-6s %-28s %-14s %s\n", "agent", "allocation", "payment", "utility");
  for (int i = 0; i < out.agents(); ++i) {
    std::string row = "[";
    for (int j = 0; j < out.allocation.items(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", out.allocation.x[i][j]);
      row += buf;
      row += (j + 1 < out.allocation.items()) ? " " : "";
    }
    row += "]";
    const double u = std::visit([&](const auto& in) { return clinch::utility(in, out, i); }, inst);
    std::printf("%-6d %-28s %-14.10g %.10g\n", i, row.c_str(), out.payments[i], u);
  }
}

int emit_report(const clinch::PropertyReport& report, const std::string& path) {
  const auto j = clinch::to_json(report);
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    clinch::write_json_file(path, j);
  std::cerr << report.property << ": " << clinch::to_string(report.verdict)
            << (report.detail.empty() ? "" : " - " + report.detail) << '\n';
  switch (report.verdict) {
    case clinch::Verdict::holds: return kExitHolds;
    case clinch::Verdict::violated: return kExitViolated;
    default: return kExitInconclusive;
  }
}

int cmd_run(const std::string& mechanism, const std::string& input, const std::string& output,
            std::uint64_t seed, double epsilon) {
  using namespace clinch;
  const AnyInstance inst = instance_from_json(read_json_file(input));

  Outcome out;
  OutcomeMeta meta;
  meta.mechanism = mechanism;

  if (mechanism == "clinching" || mechanism == "oracle") {
    const auto* si = std::get_if<SingleItemInstance>(&inst);
    if (!si) throw std::invalid_argument(mechanism + " expects a single_item instance");
    if (mechanism == "clinching") {
      out = clinching_auction(*si);
    } else {
      out = epsilon_oracle(*si, epsilon);
      meta.tolerances["epsilon"] = epsilon;
    }
  } else if (mechanism == "hetero-div" || mechanism == "hetero-rand") {
    const auto* sd = std::get_if<SingleDimInstance>(&inst);
    if (!sd) throw std::invalid_argument(mechanism + " expects a single_dim instance");
    if (mechanism == "hetero-div") {
      out = run_hetero_divisible(*sd);
    } else {
      out = run_hetero_indivisible_randomized(*sd, seed);
      meta.seed = seed;
    }
  } else {
    throw std::invalid_argument("unknown mechanism: " + mechanism);
  }

  const auto check = validate_allocation(out.allocation);
  if (!check.ok) throw InternalError("mechanism produced an infeasible allocation: " + check.message);

  if (!output.empty()) write_json_file(output, to_json(out, meta));
  print_outcome_table(out, inst);
  return kExitHolds;
}

int cmd_check(const std::string& checker, const std::string& input, const std::string& outcome_path,
              std::string mechanism, int grid_points, double tol, bool tol_set, int nt_cap,
              int trials, std::uint64_t seed, double alpha, double beta,
              const std::string& report_path) {
  using namespace clinch;
  const AnyInstance inst = instance_from_json(read_json_file(input));

  const auto need_outcome = [&]() {
    if (outcome_path.empty()) throw std::invalid_argument(checker + " requires --outcome");
    return outcome_from_json(read_json_file(outcome_path));
  };

  // Default mechanism per instance kind, plus the single-item view used by the
  // mechanism checkers (m = 1, alpha = (1)).
  SingleDimInstance view;
  SingleDimMechanismFn mech;
  const auto bind_mechanism = [&]() {
    if (mechanism.empty())
      mechanism = std::holds_alternative<SingleItemInstance>(inst) ? "clinching" : "hetero-div";
    if (mechanism == "clinching") {
      const auto* si = std::get_if<SingleItemInstance>(&inst);
      if (!si) throw std::invalid_argument("mechanism clinching expects a single_item instance");
      view = as_single_dim(*si);
      mech = single_item_clinching_mechanism();
    } else if (mechanism == "hetero-div") {
      const auto* sd = std::get_if<SingleDimInstance>(&inst);
      if (!sd) throw std::invalid_argument("mechanism hetero-div expects a single_dim instance");
      view = *sd;
      mech = hetero_divisible_mechanism(sd->alphas);
    } else {
      throw std::invalid_argument("unknown mechanism: " + mechanism);
    }
  };
  const auto sweep_grid = [&]() {
    const double v_max = *std::max_element(view.valuations.begin(), view.valuations.end());
    return geometric_grid(2.0 * v_max, grid_points);
  };

  PropertyReport report;
  if (checker == "ir") {
    const Outcome out = need_outcome();
    report = std::visit([&](const auto& in) { return check_ir(in, out, tol); }, inst);
  } else if (checker == "npt") {
    report = check_npt(need_outcome(), tol);
  } else if (checker == "po-nt") {
    const auto* sd = std::get_if<SingleDimInstance>(&inst);
    if (!sd) throw std::invalid_argument("po-nt expects a single_dim instance");
    const Outcome out = need_outcome();
    if (out.allocation.divisibility == Divisibility::indivisible)
      report = check_nt_indivisible(*sd, out, nt_cap, tol);
    else
      report = check_nt_divisible_search(*sd, out, trials, seed, tol);
  } else if (checker == "po-structural") {
    const auto* sd = std::get_if<SingleDimInstance>(&inst);
    if (!sd) throw std::invalid_argument("po-structural expects a single_dim instance");
    report = check_structural_po(*sd, need_outcome(), tol);
  } else if (checker == "vm") {
    bind_mechanism();
    report = check_vm(mech, view, sweep_grid(), tol);
  } else if (checker == "pi") {
    bind_mechanism();
    report = check_pi(mech, view, sweep_grid(), tol_set ? tol : clinch::kPaymentIdentityTol);
  } else if (checker == "ic") {
    bind_mechanism();
    report = check_ic_bruteforce(mech, view, sweep_grid(), {}, tol);
  } else if (checker == "wmon") {
    const auto* md = std::get_if<MultiDimInstance>(&inst);
    if (!md) throw std::invalid_argument("wmon expects a multi_dim instance");
    if (!(alpha > beta && beta > 0.0))
      throw std::invalid_argument("wmon requires --alpha > --beta > 0 for the report pair");
    if (classify_case(*md).label != CaseLabel::case3)
      throw std::invalid_argument("wmon report pairs need a case-3 instance");
    const MultiDimAllocationFn forced = [](const MultiDimInstance& reported) {
      return forced_outcome(reported, CaseLabel::case3).allocation;
    };
    WmonReportPair pair;
    pair.agent = 1;
    pair.valuations = md->valuations[1];
    pair.valuations_prime = {md->valuations[1][0] + alpha, md->valuations[1][1] - beta};
    report = check_wmon(forced, *md, {pair}, tol);
  } else {
    throw std::invalid_argument("unknown checker: " + checker);
  }
  return emit_report(report, report_path);
}

int cmd_demo(const std::string& which, const std::string& input, double alpha, double beta,
             std::vector<double> alphas, double v2, double b1, double v1, bool v1_set,
             const std::string& output) {
  using namespace clinch;
  if (which == "multidim") {
    MultiDimInstance inst{{{4.0, 5.0}, {3.0, 4.0}}, {5.0, 8.0}};  // built-in default
    if (!input.empty()) {
      const AnyInstance any = instance_from_json(read_json_file(input));
      const auto* md = std::get_if<MultiDimInstance>(&any);
      if (!md) throw std::invalid_argument("demo multidim expects a multi_dim instance");
      inst = *md;
    }
    const Certificate cert = wmon_certificate(inst, alpha, beta);
    const auto j = to_json(cert);
    if (!output.empty()) write_json_file(output, j);
    std::cout << j.dump(2) << '\n';
    std::cerr << "contradiction: " << (cert.contradiction ? "true" : "false") << '\n';
    return kExitHolds;
  }
  if (which == "singdim") {
    const BoundReport rep =
        singdim_bounds(alphas, v2, b1, v1_set ? std::optional<double>(v1) : std::nullopt);
    const auto j = to_json(rep);
    if (!output.empty()) write_json_file(output, j);
    std::cout << j.dump(2) << '\n';
    std::cerr << "ir_conflict: " << (rep.ir_conflict ? "true" : "false") << '\n';
    return kExitHolds;
  }
  throw std::invalid_argument("unknown demo: " + which);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained auction mechanisms: clinching auction, heterogeneous-item "
               "reductions, lottery bridge, property checkers and impossibility certificates"};
  app.require_subcommand(1);

  std::string mechanism, input, output, outcome_path, report_path, checker, which;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double epsilon = 1e-6, tol = clinch::kPropertyTol, alpha = 0.0, beta = 0.0;
  int grid_points = 50, nt_cap = 8, trials = 2000;
  std::vector<double> alphas;
  double v2 = 0.0, b1 = 0.0, v1 = 0.0;

  auto* run = app.add_subcommand("run", "run a mechanism on an instance file");
  run->add_option("--mechanism", mechanism, "clinching | hetero-div | hetero-rand | oracle")->required();
  run->add_option("--input", input, "instance JSON file")->required();
  run->add_option("--output", output, "outcome JSON file");
  run->add_option("--seed", seed, "RNG seed (overrides AUCTION_SEED)")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--epsilon", epsilon, "price step of the oracle");

  auto* check = app.add_subcommand("check", "check a property of an outcome or mechanism");
  check->add_option("checker", checker, "ir | npt | po-nt | po-structural | vm | pi | wmon | ic")
      ->required();
  check->add_option("--input", input, "instance JSON file")->required();
  check->add_option("--outcome", outcome_path, "outcome JSON file (outcome checkers)");
  check->add_option("--mechanism", mechanism, "clinching | hetero-div (mechanism checkers)");
  check->add_option("--grid", grid_points, "misreport grid size");
  auto* tol_opt = check->add_option("--tol", tol, "tolerance for definitional inequalities");
  check->add_option("--nt-cap", nt_cap, "item cap for the no-trade enumeration");
  check->add_option("--samples", trials, "trials for the divisible no-trade search");
  check->add_option("--seed", seed, "RNG seed (overrides AUCTION_SEED)")->each([&](const std::string&) {
    seed_set = true;
  });
  check->add_option("--alpha", alpha, "overstatement of v21 (wmon pair)");
  check->add_option("--beta", beta, "understatement of v22 (wmon pair)");
  check->add_option("--report", report_path, "write the property report here");

  auto* demo = app.add_subcommand("demo", "evaluate an impossibility-proof certificate");
  demo->add_option("which", which, "multidim | singdim")->required();
  demo->add_option("--input", input, "multi_dim instance JSON (multidim; defaults to the built-in 2x2)");
  demo->add_option("--alpha", alpha, "overstatement of v21 (multidim)");
  demo->add_option("--beta", beta, "understatement of v22 (multidim)");
  demo->add_option("--alphas", alphas, "item qualities a1,a2 (singdim)")->delimiter(',');
  demo->add_option("--v2", v2, "agent 2 valuation (singdim)");
  demo->add_option("--b1", b1, "agent 1 budget (singdim)");
  auto* v1_opt = demo->add_option("--v1", v1, "chosen truthful valuation of agent 1 (singdim)");
  demo->add_option("--output", output, "write the certificate here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (!seed_set) seed = default_seed();
    if (run->parsed()) return cmd_run(mechanism, input, output, seed, epsilon);
    if (check->parsed())
      return cmd_check(checker, input, outcome_path, mechanism, grid_points, tol,
                       tol_opt->count() > 0, nt_cap, trials, seed, alpha, beta, report_path);
    return cmd_demo(which, input, alpha, beta, alphas, v2, b1, v1, v1_opt->count() > 0, output);
  } catch (const clinch::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
