#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fms/constants.hpp"
#include "fms/instance.hpp"
#include "fms/principal.hpp"
#include "fms/verifiers.hpp"

namespace fms {

/// Everything a report needs to be reproduced by a single command.
struct Provenance {
  std::string tool = "fms";
  std::string build;
  std::string command;
  std::uint64_t seed = 0;
  std::string mode = "atoms";
  double tol = 1e-9;
  double c_budget = 64.0;
};

std::string build_id();

/// Parses the single-document JSON instance format; diagnostics name the
/// offending key. Invariants (positive measure, strictly positive weights,
/// refining partitions, discrete last level) are enforced here.
Instance load_instance(const std::string& path);
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json instance_to_json(const Instance& inst);
/// Canonical key ordering; save-load-save is byte stable.
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json provenance_to_json(const Provenance& prov);
nlohmann::json report_to_json(const VerificationReport& rep, const Provenance& prov);
nlohmann::json constants_to_json(const std::vector<ConstantsReport<double>>& constants,
                                 const Provenance& prov);

template <typename S>
nlohmann::json family_to_json(const FilteredSpace<S>& sp, const PrincipalFamily<S>& fam);

/// CSV flattening of the same reports; cells are rendered through the JSON
/// number writer so both formats carry identical values.
std::string report_to_csv(const VerificationReport& rep);
std::string constants_to_csv(const std::vector<ConstantsReport<double>>& constants);

void write_text(const std::string& path, const std::string& text);

// -- template implementation --------------------------------------------------

template <typename S>
nlohmann::json principal_node_to_json(const FilteredSpace<S>& sp, const PrincipalSet<S>& node) {
  nlohmann::json j;
  j["k1"] = node.k1;
  j["k2"] = node.k2;
  j["atoms"] = node.set.atoms;
  std::vector<std::string> finest;
  for (Index x : finest_of(sp, node.set)) finest.push_back(sp.atom_name(x));
  j["finest"] = finest;
  std::vector<std::string> exc;
  for (Index x : node.exceptional) exc.push_back(sp.atom_name(x));
  j["exceptional"] = exc;
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : node.children) kids.push_back(principal_node_to_json(sp, c));
  j["children"] = kids;
  return j;
}

template <typename S>
nlohmann::json family_to_json(const FilteredSpace<S>& sp, const PrincipalFamily<S>& fam) {
  nlohmann::json j;
  j["origin_level"] = fam.origin_level;
  j["origin_scale"] = fam.origin_scale;
  j["node_count"] = fam.root.node_count();
  j["tree"] = principal_node_to_json(sp, fam.root);
  return j;
}

}  // namespace fms
