// Command-line front end: solve, mech, compare, generate, audit, validate, table.
// Exit codes: 0 success, 1 bound violation or failed check, 2 usage or input error.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "dpfl/io.hpp"

using namespace dpfl;

namespace {

struct FamilyOpts {
  std::string family;
  int m = 1;
  double B = 960.0;
  int n = 7;
  std::uint64_t seed = 0;
  int dim = 1;
  std::string norm = "L1";
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::string variant = "first";

  void add_to(CLI::App& app, bool family_required) {
    auto* f = app.add_option("--family", family, "I1, I2, det_I1, det_I2, hardness_2d_l1, hardness_2d_l2, skewed, random");
    if (family_required) f->required();
    app.add_option("--m", m, "group size for the hard instances")->check(CLI::PositiveNumber);
    app.add_option("--B", B, "bound on preferred distances")->check(CLI::PositiveNumber);
    app.add_option("--n", n, "agent count (skewed, random)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--dim", dim, "dimension (random)")->check(CLI::IsMember({1, 2}));
    app.add_option("--norm", norm, "L1 or L2 (random)")->check(CLI::IsMember({"L1", "L2"}));
    app.add_option("--beta", beta, "extra-group factor for the 2D constructions");
    app.add_option("--variant", variant, "first or second instance of a 2D construction")
        ->check(CLI::IsMember({"first", "second"}));
  }

  FamilySpec spec() const {
    FamilySpec s;
    s.family = parse_family(family);
    s.m = m;
    s.B = B;
    s.n = n;
    s.seed = seed;
    s.dim = dim;
    s.norm = norm == "L2" ? Norm::L2 : Norm::L1;
    s.beta = beta;
    s.variant = variant == "second" ? HardVariant::second : HardVariant::first;
    return s;
  }

  std::string ref() const {
    const FamilySpec s = spec();
    std::string r = family;
    switch (s.family) {
      case Family::skewed: r += ":n=" + std::to_string(n) + ":seed=" + std::to_string(seed); break;
      case Family::random:
        r += ":n=" + std::to_string(n) + ":dim=" + std::to_string(dim) + ":" + norm + ":seed=" + std::to_string(seed);
        break;
      case Family::hardness_2d_l1:
      case Family::hardness_2d_l2: r += ":m=" + std::to_string(m) + ":" + variant; break;
      default: r += ":m=" + std::to_string(m); break;
    }
    return r + ":B=" + format_double(B);
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(',', start);
    const std::string item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) std::cout << text;
  else write_text(out_path, text);
}

/// Family used by `audit` when none is given: random instances the mechanism accepts.
FamilySpec default_audit_family(Mechanism m, std::uint64_t seed) {
  FamilySpec s;
  s.family = Family::random;
  s.n = 7;
  s.seed = seed;
  s.dim = 1;
  s.B = 960.0;
  if (m == Mechanism::coord_median || m == Mechanism::median_plus_2d) s.dim = 2;
  if (m == Mechanism::geometric_median) {
    s.dim = 2;
    s.norm = Norm::L2;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility location with doubly peaked preferences: mechanisms, oracles and audits"};
  app.require_subcommand(1);

  std::string input, output, mech_names = "median_plus", obs_ids, sweep = "m";
  std::size_t k = 1;
  int trials = 100, from = 1, to = 5, step = 1;
  double pitch = 1.0 / 16.0;
  FamilyOpts fam;

  auto* solve = app.add_subcommand("solve", "optimal location(s) by the exact oracle");
  solve->add_option("-i,--input", input, "instance JSON")->required();
  solve->add_option("--k", k, "number of facilities (1D)")->check(CLI::PositiveNumber);

  auto* mech = app.add_subcommand("mech", "run a mechanism");
  mech->add_option("--mech", mech_names, "mechanism name")->required();
  mech->add_option("-i,--input", input, "instance JSON")->required();
  mech->add_option("--k", k, "facilities for k_median")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "mechanism vs oracle vs additive bound, as CSV");
  compare->add_option("--mech", mech_names, "comma-separated mechanism names");
  compare->add_option("-i,--input", input, "instance JSON");
  compare->add_option("--k", k, "facilities for k_median")->check(CLI::PositiveNumber);
  compare->add_option("-o,--output", output, "CSV path (default stdout)");
  fam.add_to(*compare, false);

  auto* generate = app.add_subcommand("generate", "write a family instance as JSON");
  generate->add_option("-o,--output", output, "JSON path (default stdout)");
  fam.add_to(*generate, true);

  auto* audit = app.add_subcommand("audit", "search for profitable misreports");
  audit->add_option("--mech", mech_names, "mechanism name")->required();
  audit->add_option("--trials", trials, "instances per randomized family")->check(CLI::PositiveNumber);
  audit->add_option("--pitch", pitch, "misreport grid pitch as a fraction of B")->check(CLI::Range(1e-6, 1.0));
  audit->add_option("--k", k, "facilities for k_median")->check(CLI::PositiveNumber);
  audit->add_option("-o,--output", output, "JSON path (default stdout)");
  fam.add_to(*audit, false);

  auto* validate = app.add_subcommand("validate", "check the cost facts of the hard instances");
  validate->add_option("--obs", obs_ids, "comma-separated observation ids, or 'all'")->required();
  validate->add_option("-o,--output", output, "JSON path (default stdout)");
  fam.add_to(*validate, false);

  auto* table = app.add_subcommand("table", "sweep m or n over a family and emit CSV");
  table->add_option("--mech", mech_names, "comma-separated mechanism names");
  table->add_option("--sweep", sweep, "parameter to sweep")->check(CLI::IsMember({"m", "n"}));
  table->add_option("--from", from, "first value")->check(CLI::PositiveNumber);
  table->add_option("--to", to, "last value")->check(CLI::PositiveNumber);
  table->add_option("--step", step, "increment")->check(CLI::PositiveNumber);
  table->add_option("--k", k, "facilities for k_median")->check(CLI::PositiveNumber);
  table->add_option("-o,--output", output, "CSV path (default stdout)");
  fam.add_to(*table, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto selectors = [&]() {
      std::vector<MechanismSel> out;
      for (const std::string& name : split_list(mech_names)) out.push_back(MechanismSel{parse_mechanism(name), k, 1e-9});
      if (out.empty()) throw std::invalid_argument("no mechanism given");
      return out;
    };

    if (*solve) {
      const Instance inst = parse_instance(input);
      const OracleResult r = oracle_for(MechanismSel{k > 1 ? Mechanism::k_median : Mechanism::median, k, 1e-9}, inst);
      const nlohmann::json j{{"opt", r.opt_value},
                             {"facilities", points_json(r.placement.facilities, inst.dim())},
                             {"method", to_string(r.method)},
                             {"guaranteed_exact", r.guaranteed_exact}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*mech) {
      const Instance inst = parse_instance(input);
      const MechanismSel sel = selectors().front();
      const Placement p = run_mechanism(sel, inst);
      const nlohmann::json j{
          {"mechanism", to_string(sel.id)}, {"facilities", points_json(p.facilities, inst.dim())}, {"sc", p.social_cost}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*compare) {
      if (input.empty() == fam.family.empty()) throw std::invalid_argument("compare needs exactly one of -i or --family");
      const Instance inst = input.empty() ? dpfl::generate(fam.spec()) : parse_instance(input);
      const std::string ref = input.empty() ? fam.ref() : input;
      std::vector<RunRecord> rows;
      bool ok = true;
      for (const MechanismSel& sel : selectors()) {
        rows.push_back(make_run_record(ref, sel, inst));
        ok = ok && rows.back().within_bound;
      }
      emit(to_csv(rows), output);
      return ok ? 0 : 1;
    }

    if (*generate) {
      emit(instance_to_json(dpfl::generate(fam.spec())), output);
      return 0;
    }

    if (*audit) {
      const MechanismSel sel = selectors().front();
      const FamilySpec spec = fam.family.empty() ? default_audit_family(sel.id, fam.seed) : fam.spec();
      const AuditReport r = audit_mechanism(sel, {spec}, pitch, trials);
      const bool expect_sp = strategy_proof(sel.id);
      emit(to_json(r, expect_sp).dump(2) + "\n", output);
      return r.pass(expect_sp) ? 0 : 1;
    }

    if (*validate) {
      FamilySpec spec;
      if (!fam.family.empty()) spec = fam.spec();
      spec.m = fam.m;
      spec.B = fam.B;
      spec.beta = fam.beta;
      const std::vector<std::string> ids = obs_ids == "all" ? supported_observations() : split_list(obs_ids);
      nlohmann::json reports = nlohmann::json::array();
      bool ok = true;
      for (const std::string& id : ids) {
        const ObservationReport r = validate_observation(spec, id);
        ok = ok && r.all_pass;
        reports.push_back(to_json(r));
      }
      emit(reports.dump(2) + "\n", output);
      return ok ? 0 : 1;
    }

    if (*table) {
      if (from > to) throw std::invalid_argument("--from must not exceed --to");
      std::vector<RunRecord> rows;
      bool ok = true;
      for (int v = from; v <= to; v += step) {
        FamilyOpts f = fam;
        (sweep == "m" ? f.m : f.n) = v;
        const Instance inst = dpfl::generate(f.spec());
        for (const MechanismSel& sel : selectors()) {
          rows.push_back(make_run_record(f.ref(), sel, inst));
          ok = ok && rows.back().within_bound;
        }
      }
      emit(to_csv(rows), output);
      return ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
