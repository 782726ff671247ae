// Command-line harness: constants, principal-sets, verify, search, generate.
// Exit codes: 0 all assertions pass, 1 a hard assertion failed, 2 usage or
// input error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fms/io.hpp"
#include "fms/suites.hpp"

using namespace fms;
using nlohmann::json;

namespace {

struct Options {
  std::string mode = "atoms";
  bool rational = false;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double c_budget = 64.0;
  long cap = kDefaultExhaustiveCap;
  int budget = 8;
  int trials = 0;
  std::string out;
  std::string format = "json";
  std::string command_line;

  // generator knobs for corpus runs and `generate`
  std::string gen_kind = "dyadic";
  int depth = 3;
  int branching = 2;
  std::string law = "lognormal";
  double law_a = 0.0;
  double law_b = 1.0;

  SetMode set_mode() const { return mode == "exhaustive" ? SetMode::exhaustive : SetMode::atoms; }
  VerifyOptions verify_opts(int trial = 0) const {
    VerifyOptions v;
    v.c_budget = c_budget;
    v.mode = set_mode();
    v.cap = cap;
    v.tol = Tolerance{tol, tol * 1e-3};
    v.seed = seed + static_cast<std::uint64_t>(trial) * 7919;
    v.budget = budget;
    return v;
  }
  Provenance provenance() const {
    Provenance p;
    p.build = build_id();
    p.command = command_line;
    p.seed = seed;
    p.mode = rational ? mode + "+rational" : mode;
    p.tol = tol;
    p.c_budget = c_budget;
    return p;
  }
  GeneratorSpec generator_spec(int trial) const {
    GeneratorSpec g;
    g.kind = gen_kind == "random-tree" ? GeneratorSpec::Kind::random_tree
                                       : GeneratorSpec::Kind::dyadic;
    g.depth = depth;
    g.branching = branching;
    g.law = parse_weight_law(law, law_a, law_b);
    g.seed = seed + static_cast<std::uint64_t>(trial) * 0x9e3779b9ULL;
    return g;
  }
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("--mode", opts.mode, "set quantifier mode")
      ->check(CLI::IsMember({"atoms", "exhaustive"}));
  cmd->add_flag("--rational", opts.rational, "exact rational arithmetic where supported");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--tol", opts.tol, "relative tolerance for float comparisons");
  cmd->add_option("--c-budget", opts.c_budget, "budget for bounds the theory states up to a constant");
  cmd->add_option("--cap", opts.cap, "exhaustive enumeration cap (atoms per level)");
  cmd->add_option("--budget", opts.budget, "ascent restarts for norm estimates");
  cmd->add_option("--out", opts.out, "write the report to this path");
  cmd->add_option("--format", opts.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

void add_generator(CLI::App* cmd, Options& opts) {
  cmd->add_option("--trials", opts.trials, "run over this many generated instances");
  cmd->add_option("--gen-kind", opts.gen_kind, "generator kind")
      ->check(CLI::IsMember({"dyadic", "random-tree"}));
  cmd->add_option("--depth", opts.depth, "tree depth");
  cmd->add_option("--branching", opts.branching, "branching factor");
  cmd->add_option("--law", opts.law, "weight law")
      ->check(CLI::IsMember({"lognormal", "power", "two-point"}));
  cmd->add_option("--law-a", opts.law_a, "first law parameter");
  cmd->add_option("--law-b", opts.law_b, "second law parameter");
}

Instance trial_instance(const Options& opts, int trial, bool custom_generator) {
  if (custom_generator) return generate(opts.generator_spec(trial));
  return default_corpus_instance(opts.seed, trial);
}

void emit(const json& doc, const std::string& human, const Options& opts,
          const std::string& csv = "") {
  std::cout << human;
  if (!opts.out.empty()) {
    if (opts.format == "csv" && !csv.empty()) write_text(opts.out, csv);
    else write_text(opts.out, doc.dump(2) + "\n");
  }
}

std::string render_checks(const VerificationReport& rep) {
  std::string out;
  for (const auto& c : rep.checks) {
    char line[512];
    std::snprintf(line, sizeof(line), "  [%s] %-55s lhs=%-12.6g rhs=%-12.6g ratio=%.6g%s\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.lhs, c.rhs, c.ratio,
                  c.hard ? "" : " (informational)");
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// constants

template <typename S>
std::vector<ConstantsReport<double>> compute_constants(const InstanceT<S>& inst, SetMode mode,
                                                       Index cap) {
  const auto& sp = inst.space;
  const Vec<S>& w = inst.weight("omega");
  const Vec<S> v = inst.has_weight("v") ? inst.weight("v") : w;
  const Vec<S> sigma = inst.sigma_or_dual();
  const S p = inst.p, q = inst.q;

  std::vector<ConstantsReport<double>> out;
  auto scalar = [&](const std::string& name, const S& value, S pp = S(0), S qq = S(0)) {
    out.push_back({name, to_double(value), mode, MeasurableSet{-1, {}}, to_double(pp),
                   to_double(qq)});
  };
  auto witnessed = [&](const ConstantsReport<S>& rep) {
    out.push_back({rep.name, to_double(rep.value), rep.mode, rep.witness, to_double(rep.p),
                   to_double(rep.q)});
  };
  scalar("A1[omega]", a1_const(sp, w));
  scalar("A1[v]", a1_const(sp, v));
  scalar("A1[sigma]", a1_const(sp, sigma));
  scalar("Ap[v,omega]", ap_two_weight(sp, v, w, p), p);
  scalar("Ap[omega]", ap_one_weight(sp, w, p), p);
  scalar("Ainf_exp[omega]", ainf_exp(sp, w));
  scalar("Bp[v,omega]", bp_const(sp, v, w, p), p);
  witnessed(sp_star(sp, v, w, p, mode, cap));
  witnessed(ainf_star(sp, w, mode, cap));
  {
    auto rep = mixed_const(sp, w, p, mode, cap);
    rep.name = "mixed[sigma]";
    witnessed(rep);
  }
  witnessed(testing_forward(sp, inst.alpha, sigma, w, p, q, mode, cap));
  witnessed(testing_backward(sp, inst.alpha, sigma, w, p, q, mode, cap));
  return out;
}

int run_constants(const Options& opts, const std::string& instance_path) {
  const Instance inst = load_instance(instance_path);
  std::vector<ConstantsReport<double>> reports;
  if (opts.rational)
    reports = compute_constants(inst.cast<Rational>(), opts.set_mode(), opts.cap);
  else
    reports = compute_constants(inst, opts.set_mode(), opts.cap);

  std::string human = "constants (" + std::string(to_string(opts.set_mode())) +
                      (opts.rational ? ", rational" : "") + "):\n";
  for (const auto& c : reports) {
    char line[256];
    std::snprintf(line, sizeof(line), "  %-18s = %.12g", c.name.c_str(), c.value);
    human += line;
    if (c.witness.level >= 0) {
      human += "  (witness level " + std::to_string(c.witness.level) + ", atoms";
      for (Index a : c.witness.atoms) human += " " + std::to_string(a);
      human += ")";
    }
    human += "\n";
  }
  emit(constants_to_json(reports, opts.provenance()), human, opts, constants_to_csv(reports));
  return 0;
}

// ---------------------------------------------------------------------------
// principal sets

template <typename S>
int run_principal(const Options& opts, const InstanceT<S>& inst, const std::string& function,
                  const std::string& base, int level, std::optional<int> scale) {
  const auto& sp = inst.space;
  const Vec<S>& h = inst.function(function);
  Vec<S> w = Vec<S>::Constant(sp.atom_count(), S(1));
  if (base != "uniform") w = inst.weight(base);

  std::vector<PrincipalFamily<S>> families;
  if (scale.has_value())
    families.push_back(build_principal_family(sp, h, w, level, *scale, whole_space(sp, level)));
  else
    families = principal_cover(sp, h, w, level);

  const Tolerance tol{opts.tol, opts.tol * 1e-3};
  json out;
  out["provenance"] = provenance_to_json(opts.provenance());
  out["families"] = json::array();
  bool all_pass = true;
  std::string human;
  for (const auto& fam : families) {
    const PropertiesResult props = check_properties(sp, fam, tol);
    const RepresentationResult<S> rep = maximal_representation_check(sp, fam, tol);
    const CarlesonResult<S> car = carleson_check(sp, fam, inst.p, tol);
    json jf = family_to_json(sp, fam);
    jf["properties"] = {{"P1", props.partition},      {"P2", props.measurability},
                        {"P3", props.conditional_half}, {"P4", props.shell_bounds},
                        {"P5", props.localized_sup},  {"P6", props.pre_passage_bound},
                        {"sparsity", props.sparsity}};
    jf["representation"] = {{"localization", rep.localization},
                            {"partition", rep.partition},
                            {"bound", rep.bound},
                            {"max_ratio", to_double(rep.max_ratio)}};
    jf["carleson"] = {{"lhs", to_double(car.lhs)}, {"rhs", to_double(car.rhs)}, {"pass", car.pass}};
    jf["failures"] = props.failures;
    out["families"].push_back(jf);
    const bool ok = props.all() && rep.all() && car.pass;
    all_pass = all_pass && ok;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  [%s] scale k=%-4d nodes=%-4zu P.1-P.6 %s, representation %s (max ratio "
                  "%.4g), carleson %.6g <= %.6g\n",
                  ok ? "PASS" : "FAIL", fam.origin_scale, fam.root.node_count(),
                  props.all() ? "ok" : "FAILED", rep.all() ? "ok" : "FAILED",
                  to_double(rep.max_ratio), to_double(car.lhs), to_double(car.rhs));
    human += line;
  }
  out["pass"] = all_pass;
  human = "principal sets over level " + std::to_string(level) + " (" +
          std::to_string(families.size()) + " families, base " + base + "):\n" + human;
  emit(out, human, opts);
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const Options& opts, const std::string& what, const std::string& instance_path,
               bool custom_generator) {
  const bool corpus = instance_path.empty();
  const int trials = corpus ? (opts.trials > 0 ? opts.trials : 100) : 1;
  if (opts.rational && (what == "strong" || what == "weak" || what == "maximal" ||
                        what == "remark28"))
    throw CLI::ValidationError("--rational is not supported for search-based verifiers");

  json out;
  out["provenance"] = provenance_to_json(opts.provenance());
  out["suite"] = what;
  out["reports"] = json::array();
  bool all_pass = true;
  std::string human = "verify " + what + " over " + std::to_string(trials) +
                      (corpus ? " generated" : " provided") + " instance(s):\n";
  double worst_ratio = 0.0;

  for (int trial = 0; trial < trials; ++trial) {
    const Instance inst =
        corpus ? trial_instance(opts, trial, custom_generator) : load_instance(instance_path);
    const auto& sp = inst.space;
    const VecD& w = inst.weight("omega");
    const VecD v = inst.has_weight("v") ? inst.weight("v") : w;
    const VerifyOptions vopts = opts.verify_opts(trial);

    if (what == "strong" || what == "weak" || what == "maximal") {
      VerificationReport rep;
      if (what == "strong")
        rep = verify_strong(sp, inst.alpha, inst.sigma_or_dual(), w, inst.p, inst.q, vopts);
      else if (what == "weak")
        rep = verify_weak(sp, inst.alpha, inst.sigma_or_dual(), w, inst.p, inst.q, vopts);
      else
        rep = verify_maximal_bounds(sp, v, w, inst.p, vopts);
      all_pass = all_pass && rep.pass();
      for (const auto& c : rep.checks)
        if (c.name.find("ratio") == std::string::npos)
          worst_ratio = std::max(worst_ratio, c.ratio);
      out["reports"].push_back(report_to_json(rep, opts.provenance()));
      if (!rep.pass() || trial == 0 || !corpus) human += render_checks(rep);
    } else if (what == "sparsity" || what == "carleson") {
      FamilyChecks checks;
      const VecD& h = inst.function("h");
      if (opts.rational) {
        const auto rsp = inst.space.cast<Rational>();
        Vec<Rational> rh(rsp.atom_count()), rw(rsp.atom_count());
        for (Index x = 0; x < rsp.atom_count(); ++x) {
          rh[x] = from_double<Rational>(h[x]);
          rw[x] = from_double<Rational>(w[x]);
        }
        checks = run_family_checks(rsp, rh, rw, from_double<Rational>(inst.p));
      } else {
        checks = run_family_checks(sp, h, w, inst.p, vopts.tol);
      }
      const bool ok = what == "sparsity" ? (checks.properties_ok && checks.representation_ok)
                                         : checks.carleson_ok;
      all_pass = all_pass && ok;
      worst_ratio = std::max(worst_ratio, what == "sparsity" ? checks.max_rep_ratio
                                                             : checks.max_carleson_ratio);
      json jr = {{"trial", trial},
                 {"families", checks.families},
                 {"nodes", checks.nodes},
                 {"properties_ok", checks.properties_ok},
                 {"representation_ok", checks.representation_ok},
                 {"carleson_ok", checks.carleson_ok},
                 {"max_rep_ratio", checks.max_rep_ratio},
                 {"max_carleson_ratio", checks.max_carleson_ratio},
                 {"failures", checks.failures}};
      out["reports"].push_back(jr);
      if (!ok) {
        human += "  [FAIL] trial " + std::to_string(trial) + "\n";
        for (const auto& f : checks.failures) human += "    " + f + "\n";
      }
    } else if (what == "remark28") {
      const Remark28Outcome r =
          run_remark28_checks(sp, w, vopts.mode, vopts.cap, vopts.tol);
      const bool ok = r.duality_ok && r.jensen_ok;
      all_pass = all_pass && ok;
      worst_ratio = std::max(worst_ratio, r.ainf_ratio);
      out["reports"].push_back({{"trial", trial},
                                {"duality_ok", r.duality_ok},
                                {"jensen_ok", r.jensen_ok},
                                {"ainf_star_over_ainf_exp", r.ainf_ratio},
                                {"failures", r.failures}});
      if (!ok)
        for (const auto& f : r.failures) human += "  [FAIL] trial " + std::to_string(trial) + ": " + f + "\n";
    } else {
      throw CLI::ValidationError("unknown verify suite: " + what);
    }
  }

  out["pass"] = all_pass;
  out["worst_ratio"] = worst_ratio;
  char line[160];
  std::snprintf(line, sizeof(line), "  summary: %s, worst ratio %.6g\n",
                all_pass ? "PASS" : "FAIL", worst_ratio);
  human += line;
  emit(out, human, opts);
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// search

int run_search(const Options& opts, const std::string& what, bool probe_a1) {
  const int trials = opts.trials > 0 ? opts.trials : 20;
  json out;
  out["provenance"] = provenance_to_json(opts.provenance());
  out["objective"] = probe_a1 ? "a1-probe" : what;
  out["rows"] = json::array();
  std::string human = "search " + (probe_a1 ? std::string("--probe-a1") : what) + ":\n";
  double best = 0.0;
  json best_row;

  for (int trial = 0; trial < trials; ++trial) {
    Options gen_opts = opts;
    if (probe_a1) {
      // power-law weights of growing exponent push the A1 constants up
      gen_opts.law = "power";
      gen_opts.law_a = -0.25 * (1 + trial % 12);
      gen_opts.gen_kind = "dyadic";
      gen_opts.depth = 4;
    }
    const Instance inst = trial_instance(gen_opts, trial, probe_a1 || opts.trials > 0);
    const auto& sp = inst.space;
    const VecD& w = inst.weight("omega");
    const VecD v = inst.has_weight("v") ? inst.weight("v") : w;
    const VecD sigma = inst.sigma_or_dual();
    const VerifyOptions vopts = opts.verify_opts(trial);
    json row;
    row["trial"] = trial;
    double ratio = 0.0;

    if (probe_a1 || what == "strong") {
      const auto rep = verify_strong(sp, inst.alpha, sigma, w, inst.p, inst.q, vopts);
      ratio = rep.constants.at("upper_ratio");
      row["a1_omega"] = rep.constants.at("a1_omega");
      row["a1_sigma"] = rep.constants.at("a1_sigma");
      row["norm_estimate"] = rep.constants.at("norm_estimate");
      if (probe_a1) row["power_exponent"] = gen_opts.law_a;
    } else if (what == "weak") {
      const auto rep = verify_weak(sp, inst.alpha, sigma, w, inst.p, inst.q, vopts);
      ratio = rep.constants.at("weak_max_ratio");
      row["weak_norm_estimate"] = rep.constants.at("weak_norm_estimate");
    } else if (what == "maximal") {
      const auto rep = verify_maximal_bounds(sp, v, w, inst.p, vopts);
      ratio = rep.constants.at("norm_estimate") / std::max(rep.constants.at("sp_star"), 1e-300);
      row["sp_star"] = rep.constants.at("sp_star");
      row["norm_estimate"] = rep.constants.at("norm_estimate");
    } else if (what == "ainf-ratio") {
      const Remark28Outcome r = run_remark28_checks(sp, w, vopts.mode, vopts.cap, vopts.tol);
      ratio = r.ainf_ratio;
    } else {
      throw CLI::ValidationError("unknown search objective: " + what);
    }
    row["ratio"] = ratio;
    out["rows"].push_back(row);
    if (ratio > best) {
      best = ratio;
      best_row = row;
    }
    char line[160];
    std::snprintf(line, sizeof(line), "  trial %-4d ratio %.6g\n", trial, ratio);
    human += line;
  }
  out["max_ratio"] = best;
  out["max_row"] = best_row;
  human += "  max ratio " + std::to_string(best) + "\n";
  emit(out, human, opts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted estimates for positive and Doob maximal operators on finite filtered "
               "measure spaces"};
  app.require_subcommand(1);
  Options opts;
  for (int i = 0; i < argc; ++i) opts.command_line += std::string(i ? " " : "") + argv[i];

  std::string instance_path, what, function = "h", base = "uniform";
  int level = 0;
  std::optional<int> scale;
  bool probe_a1 = false;

  auto* constants = app.add_subcommand("constants", "all weight and testing constants");
  constants->add_option("instance", instance_path, "instance file")->required();
  add_common(constants, opts);

  auto* principal = app.add_subcommand("principal-sets",
                                       "build principal sets, check their properties, serialize");
  principal->add_option("instance", instance_path, "instance file")->required();
  principal->add_option("--function", function, "source function name");
  principal->add_option("--base-weight", base, "base weight name or 'uniform'");
  principal->add_option("--level", level, "origin level");
  principal->add_option("--scale", scale, "dyadic scale k (omit to build the whole cover)");
  add_common(principal, opts);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("what", what, "strong|weak|maximal|sparsity|carleson|remark28")
      ->required()
      ->check(CLI::IsMember({"strong", "weak", "maximal", "sparsity", "carleson", "remark28"}));
  verify->add_option("instance", instance_path, "instance file (omit to run over --trials)");
  add_common(verify, opts);
  add_generator(verify, opts);

  auto* search = app.add_subcommand("search", "extremal ratio search over generated instances");
  search->add_option("what", what, "strong|weak|maximal|ainf-ratio")
      ->check(CLI::IsMember({"strong", "weak", "maximal", "ainf-ratio"}));
  search->add_flag("--probe-a1", probe_a1,
                   "sweep power-law weights with growing A1 constants and report the trend");
  add_common(search, opts);
  add_generator(search, opts);

  auto* gen = app.add_subcommand("generate", "emit a deterministic instance file");
  add_common(gen, opts);
  add_generator(gen, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (constants->parsed()) return run_constants(opts, instance_path);
    if (principal->parsed()) {
      const Instance inst = load_instance(instance_path);
      if (opts.rational)
        return run_principal<Rational>(opts, inst.cast<Rational>(), function, base, level, scale);
      return run_principal<double>(opts, inst, function, base, level, scale);
    }
    if (verify->parsed())
      return run_verify(opts, what, instance_path, verify->count("--gen-kind") > 0 ||
                                                       verify->count("--depth") > 0 ||
                                                       verify->count("--law") > 0);
    if (search->parsed()) {
      if (!probe_a1 && what.empty())
        throw CLI::ValidationError("search: name an objective or pass --probe-a1");
      return run_search(opts, what, probe_a1);
    }
    if (gen->parsed()) {
      const Instance inst = generate(opts.generator_spec(0));
      if (opts.out.empty()) {
        std::cout << instance_to_json(inst).dump(2) << "\n";
      } else {
        save_instance(inst, opts.out);
        std::cout << "wrote " << opts.out << "\n";
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
