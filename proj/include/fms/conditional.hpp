#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fms/space.hpp"

namespace fms {

/// Level-i conditional expectation: on each level-i atom A the mass-weighted
/// average (sum_{x in A} f(x) mu(x)) / mu(A).
template <typename S>
LevelFunction<S> cond_exp(const FilteredSpace<S>& sp, const Vec<S>& f, int i) {
  sp.check_level(i);
  const Index m = sp.level_atom_count(i);
  LevelFunction<S> out{i, Vec<S>(m)};
  for (Index a = 0; a < m; ++a) {
    S acc(0);
    for (Index x : sp.members(i, a)) acc += f[x] * sp.mu()[x];
    out.values[a] = acc / sp.atom_mass(i, a);
  }
  return out;
}

template <typename S>
Vec<S> cond_exp_expanded(const FilteredSpace<S>& sp, const Vec<S>& f, int i) {
  return expand(sp, cond_exp(sp, f, i));
}

/// Conditional expectation under the measure w*dmu: E_i(fw)/E_i(w) atomwise.
/// Reduces to cond_exp for w == 1.
template <typename S>
LevelFunction<S> weighted_cond_exp(const FilteredSpace<S>& sp, const Vec<S>& f, const Vec<S>& w,
                                   int i) {
  sp.check_level(i);
  const Index m = sp.level_atom_count(i);
  LevelFunction<S> out{i, Vec<S>(m)};
  for (Index a = 0; a < m; ++a) {
    S num(0), den(0);
    for (Index x : sp.members(i, a)) {
      num += f[x] * w[x] * sp.mu()[x];
      den += w[x] * sp.mu()[x];
    }
    if (!(den > S(0)))
      throw std::domain_error("weighted_cond_exp: base weight vanishes on a level atom");
    out.values[a] = num / den;
  }
  return out;
}

template <typename S>
Vec<S> weighted_cond_exp_expanded(const FilteredSpace<S>& sp, const Vec<S>& f, const Vec<S>& w,
                                  int i) {
  return expand(sp, weighted_cond_exp(sp, f, w, i));
}

/// Integral of f over the whole space against w*dmu.
template <typename S>
S integrate(const FilteredSpace<S>& sp, const Vec<S>& f) {
  return (f * sp.mu()).sum();
}
template <typename S>
S integrate(const FilteredSpace<S>& sp, const Vec<S>& f, const Vec<S>& w) {
  return (f * w * sp.mu()).sum();
}

/// Integral of f over a measurable set, optionally against a weight.
template <typename S>
S integrate(const FilteredSpace<S>& sp, const Vec<S>& f, const MeasurableSet& e) {
  check_set(sp, e);
  S acc(0);
  for (Index a : e.atoms)
    for (Index x : sp.members(e.level, a)) acc += f[x] * sp.mu()[x];
  return acc;
}
template <typename S>
S integrate(const FilteredSpace<S>& sp, const Vec<S>& f, const MeasurableSet& e, const Vec<S>& w) {
  check_set(sp, e);
  S acc(0);
  for (Index a : e.atoms)
    for (Index x : sp.members(e.level, a)) acc += f[x] * w[x] * sp.mu()[x];
  return acc;
}

/// w-measure of a set: integral of the indicator.
template <typename S>
S measure(const FilteredSpace<S>& sp, const MeasurableSet& e) {
  check_set(sp, e);
  S acc(0);
  for (Index a : e.atoms) acc += sp.atom_mass(e.level, a);
  return acc;
}
template <typename S>
S measure(const FilteredSpace<S>& sp, const MeasurableSet& e, const Vec<S>& w) {
  check_set(sp, e);
  S acc(0);
  for (Index a : e.atoms)
    for (Index x : sp.members(e.level, a)) acc += w[x] * sp.mu()[x];
  return acc;
}

/// (integral |f|^p w dmu)^{1/p}, p >= 1. The p-th root goes through double
/// precision for fractional 1/p; use lp_pow_p when the exact p-th power is
/// what a check needs.
template <typename S>
S lp_pow_p(const FilteredSpace<S>& sp, const Vec<S>& f, const S& p, const Vec<S>& w) {
  if (!(p >= S(1))) throw std::invalid_argument("lp norm: requires p >= 1");
  S acc(0);
  for (Index x = 0; x < sp.atom_count(); ++x) {
    S v = f[x] < S(0) ? S(-f[x]) : f[x];
    acc += power(v, p) * w[x] * sp.mu()[x];
  }
  return acc;
}

template <typename S>
S lp_norm(const FilteredSpace<S>& sp, const Vec<S>& f, const S& p, const Vec<S>& w) {
  return power(lp_pow_p(sp, f, p, w), S(1) / p);
}
template <typename S>
S lp_norm(const FilteredSpace<S>& sp, const Vec<S>& f, const S& p) {
  return lp_norm(sp, f, p, Vec<S>(Vec<S>::Constant(sp.atom_count(), S(1))));
}

/// Streams the level-i measurable sets: each single atom in atoms mode, every
/// nonempty union of atoms in exhaustive mode. Exhaustive enumeration is
/// refused above `cap` atoms, naming the count.
constexpr Index kDefaultExhaustiveCap = 20;

template <typename S, typename F>
void for_each_set(const FilteredSpace<S>& sp, int i, SetMode mode, F&& visit,
                  Index cap = kDefaultExhaustiveCap) {
  sp.check_level(i);
  const Index m = sp.level_atom_count(i);
  if (mode == SetMode::atoms) {
    for (Index a = 0; a < m; ++a) visit(MeasurableSet{i, {a}});
    return;
  }
  if (m > cap)
    throw std::invalid_argument("exhaustive set enumeration refused: level " + std::to_string(i) +
                                " has " + std::to_string(m) + " atoms (cap " + std::to_string(cap) +
                                ")");
  const std::uint64_t total = (std::uint64_t(1) << m) - 1;
  for (std::uint64_t bits = 1; bits <= total; ++bits) {
    MeasurableSet e{i, {}};
    for (Index a = 0; a < m; ++a)
      if (bits & (std::uint64_t(1) << a)) e.atoms.push_back(a);
    visit(e);
  }
}

template <typename S>
std::vector<MeasurableSet> enumerate_sets(const FilteredSpace<S>& sp, int i, SetMode mode,
                                          Index cap = kDefaultExhaustiveCap) {
  std::vector<MeasurableSet> out;
  for_each_set(sp, i, mode, [&out](const MeasurableSet& e) { out.push_back(e); }, cap);
  return out;
}

}  // namespace fms
