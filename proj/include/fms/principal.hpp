#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fms/operators.hpp"
#include "fms/parallel.hpp"

namespace fms {

/// One node of the principal-set tree. The set is measurable at level k1;
/// 2^{k2-1} < E^w_{k1}(h) <= 2^{k2} holds on it. The exceptional part E(P) is
/// where the node's stopping time never fires; the stopping time is kNever
/// off the node.
template <typename S>
struct PrincipalSet {
  MeasurableSet set;  // level == k1
  int k1 = 0;
  int k2 = 0;
  std::vector<Index> exceptional;  // finest atoms
  StoppingTime stopping;
  std::vector<PrincipalSet<S>> children;

  template <typename F>
  void walk(F&& visit) const {
    visit(*this);
    for (const auto& c : children) c.walk(visit);
  }
  std::size_t node_count() const {
    std::size_t n = 0;
    walk([&n](const PrincipalSet<S>&) { ++n; });
    return n;
  }
};

/// A full construction: the root P0 = {2^{k-1} < E^w_i(h) <= 2^k} cut to
/// Omega0, recursively refined along first passages above doubled thresholds.
template <typename S>
struct PrincipalFamily {
  PrincipalSet<S> root;
  Vec<S> base_weight;  // w, the construction runs on the measure w*dmu
  Vec<S> source;       // h
  int origin_level = 0;
  int origin_scale = 0;
};

namespace detail {

template <typename S>
S mass_under(const FilteredSpace<S>& sp, const Vec<S>& w, const std::vector<Index>& finest) {
  S acc(0);
  for (Index x : finest) acc += w[x] * sp.mu()[x];
  return acc;
}

/// Recursive step. `atoms` are the level-j0 atom ids of the node; every atom
/// satisfies 2^{k0-1} < E^w_{j0}(h) <= 2^{k0}.
template <typename S>
PrincipalSet<S> build_node(const FilteredSpace<S>& sp, const std::vector<Vec<S>>& ewh,
                           std::vector<Index> atoms, int j0, int k0) {
  PrincipalSet<S> node;
  node.set = MeasurableSet{j0, std::move(atoms)};
  node.k1 = j0;
  node.k2 = k0;

  const S threshold = pow2<S>(k0 + 1);
  node.stopping.level_of.assign(static_cast<std::size_t>(sp.atom_count()), StoppingTime::kNever);
  const std::vector<Index> finest = finest_of(sp, node.set);
  for (Index x : finest) {
    for (int j = j0; j <= sp.last_level(); ++j) {
      if (ewh[static_cast<std::size_t>(j)][x] > threshold) {
        node.stopping.level_of[static_cast<std::size_t>(x)] = j;
        break;
      }
    }
    if (node.stopping.level_of[static_cast<std::size_t>(x)] == StoppingTime::kNever)
      node.exceptional.push_back(x);
  }

  // Group the stopped part by (passage level j, dyadic shell l of E^w_j(h)).
  // Each group is one child; constancy on level-j atoms makes the grouping
  // atom-wise. l > k0 + 1 holds automatically above the threshold.
  std::map<std::pair<int, int>, std::vector<Index>> groups;
  for (Index x : finest) {
    const int j = node.stopping.level_of[static_cast<std::size_t>(x)];
    if (j == StoppingTime::kNever) continue;
    const Index a = sp.level_atom_of(j, x);
    const int l = dyadic_shell(ewh[static_cast<std::size_t>(j)][sp.members(j, a).front()]);
    auto& g = groups[{j, l}];
    if (g.empty() || g.back() != a) g.push_back(a);
  }
  for (auto& [key, child_atoms] : groups) {
    std::sort(child_atoms.begin(), child_atoms.end());
    child_atoms.erase(std::unique(child_atoms.begin(), child_atoms.end()), child_atoms.end());
    node.children.push_back(build_node(sp, ewh, std::move(child_atoms), key.first, key.second));
  }
  return node;
}

template <typename S>
std::vector<Vec<S>> all_weighted_cond_exps(const FilteredSpace<S>& sp, const Vec<S>& h,
                                           const Vec<S>& w) {
  std::vector<Vec<S>> ewh;
  ewh.reserve(static_cast<std::size_t>(sp.level_count()));
  for (int j = 0; j <= sp.last_level(); ++j)
    ewh.push_back(weighted_cond_exp_expanded(sp, h, w, j));
  return ewh;
}

}  // namespace detail

/// Builds the complete principal-set family for (h, w, i, k, Omega0). Throws
/// when the root shell has zero w-measure.
template <typename S>
PrincipalFamily<S> build_principal_family(const FilteredSpace<S>& sp, const Vec<S>& h,
                                          const Vec<S>& w, int i, int k,
                                          const MeasurableSet& omega0) {
  sp.check_level(i);
  check_set(sp, omega0);
  if (omega0.level != i)
    throw std::invalid_argument("principal sets: Omega0 must be measurable at the origin level");
  for (Index x = 0; x < sp.atom_count(); ++x)
    if (h[x] < S(0)) throw std::invalid_argument("principal sets: source function must be >= 0");

  const std::vector<Vec<S>> ewh = detail::all_weighted_cond_exps(sp, h, w);
  const S lo = pow2<S>(k - 1), hi = pow2<S>(k);
  std::vector<Index> root_atoms;
  for (Index a : omega0.atoms) {
    const S v = ewh[static_cast<std::size_t>(i)][sp.members(i, a).front()];
    if (lo < v && v <= hi) root_atoms.push_back(a);
  }
  if (root_atoms.empty())
    throw std::invalid_argument("empty principal root: the shell 2^" + std::to_string(k - 1) +
                                " < E^w_" + std::to_string(i) + "(h) <= 2^" + std::to_string(k) +
                                " has zero w-measure inside Omega0");
  PrincipalFamily<S> fam;
  fam.root = detail::build_node(sp, ewh, std::move(root_atoms), i, k);
  fam.base_weight = w;
  fam.source = h;
  fam.origin_level = i;
  fam.origin_scale = k;
  return fam;
}

/// One family per w-positive dyadic shell of E^w_i(h), with Omega0 the whole
/// space; the shells partition {E^w_i(h) > 0}. Distinct shells build in
/// parallel. Returns an empty list for h == 0.
template <typename S>
std::vector<PrincipalFamily<S>> principal_cover(const FilteredSpace<S>& sp, const Vec<S>& h,
                                                const Vec<S>& w, int i) {
  sp.check_level(i);
  const Vec<S> ei = weighted_cond_exp_expanded(sp, h, w, i);
  std::map<int, bool> shell_set;
  for (Index a = 0; a < sp.level_atom_count(i); ++a) {
    const S v = ei[sp.members(i, a).front()];
    if (v > S(0)) shell_set[dyadic_shell(v)] = true;
  }
  std::vector<int> shells;
  for (const auto& [k, _] : shell_set) shells.push_back(k);
  const MeasurableSet omega0 = whole_space(sp, i);
  return map_indexed<PrincipalFamily<S>>(static_cast<Index>(shells.size()), [&](Index s) {
    return build_principal_family(sp, h, w, i, shells[static_cast<std::size_t>(s)], omega0);
  });
}

/// Outcome of verifying the construction's properties P.1-P.6 plus the
/// per-node sparsity bound w(P) <= 2 w(E(P)), all under the base measure
/// w*dmu. Failures are reported, not thrown.
struct PropertiesResult {
  bool partition = false;        // P.1
  bool measurability = false;    // P.2
  bool conditional_half = false; // P.3
  bool shell_bounds = false;     // P.4
  bool localized_sup = false;    // P.5
  bool pre_passage_bound = false;// P.6
  bool sparsity = false;         // w(P) <= 2 w(E(P))
  std::vector<std::string> failures;
  bool all() const {
    return partition && measurability && conditional_half && shell_bounds && localized_sup &&
           pre_passage_bound && sparsity;
  }
};

template <typename S>
PropertiesResult check_properties(const FilteredSpace<S>& sp, const PrincipalFamily<S>& fam,
                                  Tolerance tol = {}) {
  PropertiesResult res;
  const Vec<S>& w = fam.base_weight;
  const Vec<S>& h = fam.source;
  const std::vector<Vec<S>> ewh = detail::all_weighted_cond_exps(sp, h, w);

  auto describe = [&sp](const PrincipalSet<S>& node) {
    std::string s = "node(k1=" + std::to_string(node.k1) + ",k2=" + std::to_string(node.k2) + ",{";
    for (Index a : node.set.atoms) s += std::to_string(a) + ",";
    s += "})";
    return s;
  };

  // P.1: the exceptional parts partition the root exactly
  {
    std::vector<int> seen(static_cast<std::size_t>(sp.atom_count()), 0);
    fam.root.walk([&](const PrincipalSet<S>& node) {
      for (Index x : node.exceptional) seen[static_cast<std::size_t>(x)] += 1;
    });
    res.partition = true;
    std::vector<int> in_root(static_cast<std::size_t>(sp.atom_count()), 0);
    for (Index x : finest_of(sp, fam.root.set)) in_root[static_cast<std::size_t>(x)] = 1;
    for (Index x = 0; x < sp.atom_count(); ++x)
      if (seen[static_cast<std::size_t>(x)] != in_root[static_cast<std::size_t>(x)]) {
        res.partition = false;
        res.failures.push_back("P.1: atom " + sp.atom_name(x) + " covered " +
                               std::to_string(seen[static_cast<std::size_t>(x)]) + " times");
      }
  }

  res.measurability = true;
  res.conditional_half = true;
  res.shell_bounds = true;
  res.localized_sup = true;
  res.pre_passage_bound = true;
  res.sparsity = true;

  fam.root.walk([&](const PrincipalSet<S>& node) {
    const std::vector<Index> finest = finest_of(sp, node.set);
    std::vector<char> in_node(static_cast<std::size_t>(sp.atom_count()), 0);
    for (Index x : finest) in_node[static_cast<std::size_t>(x)] = 1;

    // P.2: the node is a union of level-k1 atoms and its stopping time is a
    // stopping time
    if (node.set.level != node.k1 || !is_valid_stopping_time(sp, node.stopping)) {
      res.measurability = false;
      res.failures.push_back("P.2: " + describe(node));
    }

    // P.3: on each level-k1 atom of P, at least half the w-mass is exceptional
    std::vector<char> in_exc(static_cast<std::size_t>(sp.atom_count()), 0);
    for (Index x : node.exceptional) in_exc[static_cast<std::size_t>(x)] = 1;
    for (Index a : node.set.atoms) {
      S atom_w(0), exc_w(0);
      for (Index x : sp.members(node.k1, a)) {
        atom_w += w[x] * sp.mu()[x];
        if (in_exc[static_cast<std::size_t>(x)]) exc_w += w[x] * sp.mu()[x];
      }
      if (!le_with_slack(atom_w, S(2) * exc_w, tol)) {
        res.conditional_half = false;
        res.failures.push_back("P.3: " + describe(node) + " atom " + std::to_string(a));
      }
    }

    // P.4: the defining shell bounds hold on P
    const S lo = pow2<S>(node.k2 - 1), hi = pow2<S>(node.k2);
    for (Index x : finest) {
      const S v = ewh[static_cast<std::size_t>(node.k1)][x];
      if (!(lo < v && v <= hi)) {
        res.shell_bounds = false;
        res.failures.push_back("P.4: " + describe(node) + " at atom " + sp.atom_name(x));
      }
    }

    // P.5: sup_{j>=k1} E^w_j(h chi_P) <= 2^{k2+1} on E(P)
    const S cap = pow2<S>(node.k2 + 1);
    Vec<S> h_loc(sp.atom_count());
    for (Index x = 0; x < sp.atom_count(); ++x)
      h_loc[x] = in_node[static_cast<std::size_t>(x)] ? h[x] : S(0);
    const Vec<S> sup_loc = tailed_maximal(sp, h_loc, w, node.k1);
    for (Index x : node.exceptional)
      if (!le_with_slack(sup_loc[x], cap, tol)) {
        res.localized_sup = false;
        res.failures.push_back("P.5: " + describe(node) + " at atom " + sp.atom_name(x));
      }

    // P.6: E^w_j(h) <= 2^{k2+1} on P wherever the node's stopping time has
    // not yet fired (k1 <= j < tau_P)
    for (Index x : finest) {
      const int t = node.stopping.level_of[static_cast<std::size_t>(x)];
      const int last = (t == StoppingTime::kNever) ? sp.last_level() : t - 1;
      for (int j = node.k1; j <= last; ++j)
        if (!le_with_slack(ewh[static_cast<std::size_t>(j)][x], cap, tol)) {
          res.pre_passage_bound = false;
          res.failures.push_back("P.6: " + describe(node) + " level " + std::to_string(j));
        }
    }

    // per-node sparsity, each node being the root of its own sub-construction
    const S node_w = detail::mass_under(sp, w, finest);
    const S exc_w = detail::mass_under(sp, w, node.exceptional);
    if (!le_with_slack(node_w, S(2) * exc_w, tol)) {
      res.sparsity = false;
      res.failures.push_back("sparsity: " + describe(node));
    }
  });
  return res;
}

/// Verifies the representation of the tailed maximal operator over the
/// family: localization and partition equalities (exact in rational mode) and
/// the bound by 4 * 2^{k2-1} on each exceptional part.
template <typename S>
struct RepresentationResult {
  bool localization = false;  // *M^w_i(h) = *M^w_i(h chi_P0) on P0
  bool partition = false;     // the E(P) decomposition reassembles it
  bool bound = false;         // <= 4 sum_P 2^{k2(P)-1} chi_E(P)
  S max_ratio{};              // max over P0 of lhs / rhs of the bound
  bool all() const { return localization && partition && bound; }
};

template <typename S>
RepresentationResult<S> maximal_representation_check(const FilteredSpace<S>& sp,
                                                     const PrincipalFamily<S>& fam,
                                                     Tolerance tol = {}) {
  RepresentationResult<S> res;
  const Vec<S>& w = fam.base_weight;
  const Vec<S>& h = fam.source;
  const int i = fam.origin_level;
  const std::vector<Index> p0 = finest_of(sp, fam.root.set);
  std::vector<char> in_p0(static_cast<std::size_t>(sp.atom_count()), 0);
  for (Index x : p0) in_p0[static_cast<std::size_t>(x)] = 1;

  Vec<S> h_loc(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x)
    h_loc[x] = in_p0[static_cast<std::size_t>(x)] ? h[x] : S(0);
  const Vec<S> global = tailed_maximal(sp, h, w, i);
  const Vec<S> localized = tailed_maximal(sp, h_loc, w, i);

  res.localization = true;
  for (Index x : p0)
    if (!eq_with_slack(global[x], localized[x], tol)) res.localization = false;

  // reassemble from the exceptional parts and compare pointwise
  Vec<S> reassembled = Vec<S>::Constant(sp.atom_count(), S(0));
  std::vector<int> covered(static_cast<std::size_t>(sp.atom_count()), 0);
  Vec<S> cap = Vec<S>::Constant(sp.atom_count(), S(0));
  fam.root.walk([&](const PrincipalSet<S>& node) {
    for (Index x : node.exceptional) {
      reassembled[x] += localized[x];
      covered[static_cast<std::size_t>(x)] += 1;
      cap[x] = S(4) * pow2<S>(node.k2 - 1);
    }
  });
  res.partition = true;
  for (Index x : p0)
    if (covered[static_cast<std::size_t>(x)] != 1 || !eq_with_slack(reassembled[x], localized[x], tol))
      res.partition = false;

  res.bound = true;
  res.max_ratio = S(0);
  for (Index x : p0) {
    if (!le_with_slack(localized[x], cap[x], tol)) res.bound = false;
    const S r = localized[x] / cap[x];
    if (r > res.max_ratio) res.max_ratio = r;
  }
  return res;
}

/// Carleson embedding over the family:
/// sum_P w(P) 2^{p(k2(P)-1)} <= 2 (p')^p int_{P0} h^p w dmu.
template <typename S>
struct CarlesonResult {
  S lhs{};
  S rhs{};
  bool pass = false;
};

template <typename S>
CarlesonResult<S> carleson_check(const FilteredSpace<S>& sp, const PrincipalFamily<S>& fam,
                                 const S& p, Tolerance tol = {}) {
  if (!(p > S(1))) throw std::invalid_argument("carleson_check: requires p > 1");
  CarlesonResult<S> res;
  const Vec<S>& w = fam.base_weight;
  res.lhs = S(0);
  fam.root.walk([&](const PrincipalSet<S>& node) {
    const S node_w = detail::mass_under(sp, w, finest_of(sp, node.set));
    res.lhs += node_w * power(pow2<S>(node.k2 - 1), p);
  });
  S energy(0);
  for (Index x : finest_of(sp, fam.root.set))
    energy += power(fam.source[x], p) * w[x] * sp.mu()[x];
  res.rhs = S(2) * power(conjugate_exponent(p), p) * energy;
  res.pass = le_with_slack(res.lhs, res.rhs, tol);
  return res;
}

}  // namespace fms
