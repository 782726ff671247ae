#include "fms/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fms {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw std::invalid_argument("instance: key \"" + key + "\": " + what);
}

const json& require(const json& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) fail(key, "missing");
  return *it;
}

/// Accepts plain numbers and "n/d" rational strings.
double parse_number(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1));
      if (den == 0.0) fail(key, "zero denominator");
      return num / den;
    } catch (const std::invalid_argument&) {
      fail(key, "not a number: \"" + s + "\"");
    }
  }
  fail(key, "expected a number");
}

Eigen::ArrayXd parse_array(const json& j, const std::string& key, Index expect = -1) {
  if (!j.is_array()) fail(key, "expected an array");
  if (expect >= 0 && static_cast<Index>(j.size()) != expect)
    fail(key, "expected " + std::to_string(expect) + " entries, got " + std::to_string(j.size()));
  Eigen::ArrayXd out(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    out[static_cast<Index>(i)] = parse_number(j[i], key + "[" + std::to_string(i) + "]");
  return out;
}

json array_to_json(const Eigen::ArrayXd& a) {
  json j = json::array();
  for (Index i = 0; i < a.size(); ++i) j.push_back(a[i]);
  return j;
}

std::string cell(double x) { return json(x).dump(); }

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string build_id() {
#ifdef FMS_BUILD_ID
  return FMS_BUILD_ID;
#else
  return "unknown";
#endif
}

Instance instance_from_json(const json& doc) {
  const json& jspace = require(doc, "space");
  Eigen::ArrayXd mu = parse_array(require(jspace, "mu"), "space.mu");
  const Index n = mu.size();

  std::vector<std::string> names;
  if (jspace.contains("atoms")) {
    const json& ja = jspace["atoms"];
    if (!ja.is_array()) fail("space.atoms", "expected an array");
    for (const auto& e : ja) names.push_back(e.get<std::string>());
  }

  const json& jlevels = require(jspace, "levels");
  if (!jlevels.is_array() || jlevels.empty()) fail("space.levels", "expected a nonempty array");
  std::vector<Partition> levels;
  for (std::size_t i = 0; i < jlevels.size(); ++i) {
    const json& jl = jlevels[i];
    const std::string key = "space.levels[" + std::to_string(i) + "]";
    if (!jl.is_array()) fail(key, "expected an array of blocks");
    Partition part;
    for (const auto& jb : jl) {
      if (!jb.is_array()) fail(key, "expected blocks to be arrays of atom indices");
      std::vector<Index> block;
      for (const auto& jx : jb) block.push_back(jx.get<Index>());
      part.push_back(std::move(block));
    }
    levels.push_back(std::move(part));
  }

  FilteredSpace<double> space = [&] {
    try {
      return FilteredSpace<double>(names, mu, std::move(levels));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("instance: key \"space\": " + std::string(e.what()));
    }
  }();

  Instance inst{std::move(space), {}, {}, AlphaSequence<double>{}, 2.0, 2.0};

  if (doc.contains("weights")) {
    for (const auto& [name, jw] : doc["weights"].items()) {
      Eigen::ArrayXd w = parse_array(jw, "weights." + name, n);
      validate_weight(inst.space, w, name);
      inst.weights.emplace(name, std::move(w));
    }
  }
  if (doc.contains("functions")) {
    for (const auto& [name, jf] : doc["functions"].items())
      inst.functions.emplace(name, parse_array(jf, "functions." + name, n));
  }

  AlphaSequence<double> alpha = AlphaSequence<double>::zeros(inst.space);
  if (doc.contains("alpha")) {
    const json& ja = doc["alpha"];
    if (!ja.is_array() || static_cast<int>(ja.size()) != inst.space.level_count())
      fail("alpha", "expected one array per level (" + std::to_string(inst.space.level_count()) +
                        " levels)");
    for (int i = 0; i <= inst.space.last_level(); ++i)
      alpha.per_level[static_cast<std::size_t>(i)] =
          parse_array(ja[static_cast<std::size_t>(i)], "alpha[" + std::to_string(i) + "]",
                      inst.space.level_atom_count(i));
    try {
      alpha.validate(inst.space);
    } catch (const std::invalid_argument& e) {
      fail("alpha", e.what());
    }
  }
  inst.alpha = std::move(alpha);

  if (doc.contains("p")) inst.p = parse_number(doc["p"], "p");
  if (doc.contains("q")) inst.q = parse_number(doc["q"], "q");
  if (!(inst.p > 1.0)) fail("p", "requires p > 1");
  if (!(inst.q >= inst.p)) fail("q", "requires p <= q");
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("instance: malformed JSON in " + path + ": " + e.what());
  }
  return instance_from_json(doc);
}

json instance_to_json(const Instance& inst) {
  json j;
  json jspace;
  jspace["atoms"] = inst.space.atom_names();
  jspace["mu"] = array_to_json(inst.space.mu());
  json jlevels = json::array();
  for (int i = 0; i <= inst.space.last_level(); ++i) {
    json jl = json::array();
    for (const auto& block : inst.space.partition(i)) jl.push_back(block);
    jlevels.push_back(jl);
  }
  jspace["levels"] = jlevels;
  j["space"] = jspace;

  json jw;
  for (const auto& [name, w] : inst.weights) jw[name] = array_to_json(w);
  j["weights"] = jw;
  json jf;
  for (const auto& [name, f] : inst.functions) jf[name] = array_to_json(f);
  j["functions"] = jf;

  json ja = json::array();
  for (const auto& lvl : inst.alpha.per_level) ja.push_back(array_to_json(lvl));
  j["alpha"] = ja;
  j["p"] = inst.p;
  j["q"] = inst.q;
  return j;
}

void save_instance(const Instance& inst, const std::string& path) {
  write_text(path, instance_to_json(inst).dump(2) + "\n");
}

json provenance_to_json(const Provenance& prov) {
  json j;
  j["tool"] = prov.tool;
  j["build"] = prov.build;
  j["command"] = prov.command;
  j["seed"] = prov.seed;
  j["mode"] = prov.mode;
  j["tol"] = prov.tol;
  j["c_budget"] = prov.c_budget;
  return j;
}

json report_to_json(const VerificationReport& rep, const Provenance& prov) {
  json j;
  j["provenance"] = provenance_to_json(prov);
  j["theorem"] = rep.theorem;
  j["p"] = rep.p;
  j["q"] = rep.q;
  j["mode"] = to_string(rep.mode);
  j["seed"] = rep.seed;
  j["constants"] = rep.constants;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json jc;
    jc["name"] = c.name;
    jc["lhs"] = c.lhs;
    jc["rhs"] = c.rhs;
    jc["ratio"] = c.ratio;
    jc["hard"] = c.hard;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["pass"] = rep.pass();
  return j;
}

json constants_to_json(const std::vector<ConstantsReport<double>>& constants,
                       const Provenance& prov) {
  json j;
  j["provenance"] = provenance_to_json(prov);
  json list = json::array();
  for (const auto& c : constants) {
    json jc;
    jc["name"] = c.name;
    jc["value"] = c.value;
    jc["mode"] = to_string(c.mode);
    jc["witness_level"] = c.witness.level;
    jc["witness_atoms"] = c.witness.atoms;
    jc["p"] = c.p;
    jc["q"] = c.q;
    list.push_back(jc);
  }
  j["constants"] = list;
  return j;
}

std::string report_to_csv(const VerificationReport& rep) {
  std::ostringstream out;
  out << "kind,name,lhs,rhs,ratio,hard,pass\n";
  for (const auto& [name, value] : rep.constants)
    out << "constant," << quoted(name) << "," << cell(value) << ",,,,\n";
  for (const auto& c : rep.checks)
    out << "check," << quoted(c.name) << "," << cell(c.lhs) << "," << cell(c.rhs) << ","
        << cell(c.ratio) << "," << (c.hard ? "true" : "false") << "," << (c.pass ? "true" : "false")
        << "\n";
  return out.str();
}

std::string constants_to_csv(const std::vector<ConstantsReport<double>>& constants) {
  std::ostringstream out;
  out << "name,value,mode,witness_level,witness_atoms,p,q\n";
  for (const auto& c : constants) {
    out << quoted(c.name) << "," << cell(c.value) << "," << to_string(c.mode) << ","
        << c.witness.level << ",";
    for (std::size_t i = 0; i < c.witness.atoms.size(); ++i)
      out << (i ? ";" : "") << c.witness.atoms[i];
    out << "," << cell(c.p) << "," << cell(c.q) << "\n";
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

}  // namespace fms
