#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fms/conditional.hpp"
#include "fms/space.hpp"

namespace fms {

/// Per-level nonnegative coefficients, each constant on the atoms of its
/// level. On a finite space every such function is bounded, so no separate
/// bound is enforced.
template <typename S>
struct AlphaSequence {
  std::vector<Vec<S>> per_level;  // per_level[i] has one entry per level-i atom

  static AlphaSequence zeros(const FilteredSpace<S>& sp) {
    AlphaSequence a;
    for (int i = 0; i <= sp.last_level(); ++i)
      a.per_level.push_back(Vec<S>::Constant(sp.level_atom_count(i), S(0)));
    return a;
  }

  void validate(const FilteredSpace<S>& sp) const {
    if (static_cast<int>(per_level.size()) != sp.level_count())
      throw std::invalid_argument("alpha: needs one coefficient function per level");
    for (int i = 0; i <= sp.last_level(); ++i) {
      if (per_level[static_cast<std::size_t>(i)].size() != sp.level_atom_count(i))
        throw std::invalid_argument("alpha: level " + std::to_string(i) + " has wrong atom count");
      for (Index a = 0; a < sp.level_atom_count(i); ++a)
        if (per_level[static_cast<std::size_t>(i)][a] < S(0))
          throw std::invalid_argument("alpha: negative coefficient at level " + std::to_string(i));
    }
  }

  Vec<S> expanded(const FilteredSpace<S>& sp, int i) const {
    return expand(sp, LevelFunction<S>{i, per_level[static_cast<std::size_t>(i)]});
  }

  template <typename T>
  AlphaSequence<T> cast() const {
    AlphaSequence<T> out;
    for (const auto& lvl : per_level) {
      Vec<T> v(lvl.size());
      for (Index a = 0; a < lvl.size(); ++a) v[a] = from_double<T>(to_double(lvl[a]));
      out.per_level.push_back(std::move(v));
    }
    return out;
  }
};

/// Level-valued function with {tau = i} a union of level-i atoms. kNever
/// stands for "never stopped".
struct StoppingTime {
  static constexpr int kNever = std::numeric_limits<int>::max();
  std::vector<int> level_of;  // per finest atom
};

template <typename S>
bool is_valid_stopping_time(const FilteredSpace<S>& sp, const StoppingTime& tau) {
  if (static_cast<Index>(tau.level_of.size()) != sp.atom_count()) return false;
  for (Index x = 0; x < sp.atom_count(); ++x) {
    const int t = tau.level_of[static_cast<std::size_t>(x)];
    if (t == StoppingTime::kNever) continue;
    if (t < 0 || t > sp.last_level()) return false;
    const Index a = sp.level_atom_of(t, x);
    for (Index y : sp.members(t, a))
      if (tau.level_of[static_cast<std::size_t>(y)] != t) return false;
  }
  return true;
}

/// Doob maximal operator: pointwise max over all levels of |E_i(f)|.
template <typename S>
Vec<S> doob_maximal(const FilteredSpace<S>& sp, const Vec<S>& f) {
  Vec<S> best = cond_exp_expanded(sp, f, 0).abs();
  for (int i = 1; i <= sp.last_level(); ++i)
    best = best.max(cond_exp_expanded(sp, f, i).abs());
  return best;
}

/// Tailed Doob maximal operator: max over levels j >= i. Equals doob_maximal
/// at i = 0 and |f| at i = L.
template <typename S>
Vec<S> tailed_maximal(const FilteredSpace<S>& sp, const Vec<S>& f, int i) {
  sp.check_level(i);
  Vec<S> best = cond_exp_expanded(sp, f, i).abs();
  for (int j = i + 1; j <= sp.last_level(); ++j)
    best = best.max(cond_exp_expanded(sp, f, j).abs());
  return best;
}

/// Tailed maximal under the base measure w*dmu.
template <typename S>
Vec<S> tailed_maximal(const FilteredSpace<S>& sp, const Vec<S>& f, const Vec<S>& w, int i) {
  sp.check_level(i);
  Vec<S> best = weighted_cond_exp_expanded(sp, f, w, i).abs();
  for (int j = i + 1; j <= sp.last_level(); ++j)
    best = best.max(weighted_cond_exp_expanded(sp, f, w, j).abs());
  return best;
}

/// First passage of the conditional expectations of f above a threshold:
/// tau(x) = least j >= i with E_j(f)(x) > threshold. Strict comparison, no
/// tolerance: rational mode decides boundary cases exactly, double mode uses
/// plain IEEE comparison.
template <typename S>
StoppingTime first_passage(const FilteredSpace<S>& sp, const Vec<S>& f, int i,
                           const S& threshold) {
  sp.check_level(i);
  StoppingTime tau;
  tau.level_of.assign(static_cast<std::size_t>(sp.atom_count()), StoppingTime::kNever);
  for (int j = i; j <= sp.last_level(); ++j) {
    const Vec<S> ej = cond_exp_expanded(sp, f, j);
    for (Index x = 0; x < sp.atom_count(); ++x)
      if (tau.level_of[static_cast<std::size_t>(x)] == StoppingTime::kNever && ej[x] > threshold)
        tau.level_of[static_cast<std::size_t>(x)] = j;
  }
  return tau;
}

template <typename S>
StoppingTime first_passage(const FilteredSpace<S>& sp, const Vec<S>& f, const Vec<S>& w, int i,
                           const S& threshold) {
  sp.check_level(i);
  StoppingTime tau;
  tau.level_of.assign(static_cast<std::size_t>(sp.atom_count()), StoppingTime::kNever);
  for (int j = i; j <= sp.last_level(); ++j) {
    const Vec<S> ej = weighted_cond_exp_expanded(sp, f, w, j);
    for (Index x = 0; x < sp.atom_count(); ++x)
      if (tau.level_of[static_cast<std::size_t>(x)] == StoppingTime::kNever && ej[x] > threshold)
        tau.level_of[static_cast<std::size_t>(x)] = j;
  }
  return tau;
}

/// Positive operator: sum_i alpha_i * E_i(f), pointwise over all levels.
template <typename S>
Vec<S> positive_op(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha, const Vec<S>& f) {
  Vec<S> acc = Vec<S>::Constant(sp.atom_count(), S(0));
  for (int i = 0; i <= sp.last_level(); ++i)
    acc += alpha.expanded(sp, i) * cond_exp_expanded(sp, f, i);
  return acc;
}

/// Tail of the positive operator applied to a weight: sum_{j >= i} alpha_j *
/// E_j(f). The testing conditions quantify over these tails.
template <typename S>
Vec<S> positive_op_tail(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha, const Vec<S>& f,
                        int i) {
  sp.check_level(i);
  Vec<S> acc = Vec<S>::Constant(sp.atom_count(), S(0));
  for (int j = i; j <= sp.last_level(); ++j)
    acc += alpha.expanded(sp, j) * cond_exp_expanded(sp, f, j);
  return acc;
}

/// All tails at once: tails[i] = sum_{j >= i} alpha_j E_j(f).
template <typename S>
std::vector<Vec<S>> positive_op_tails(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha,
                                      const Vec<S>& f) {
  std::vector<Vec<S>> tails(static_cast<std::size_t>(sp.level_count()));
  Vec<S> acc = Vec<S>::Constant(sp.atom_count(), S(0));
  for (int j = sp.last_level(); j >= 0; --j) {
    acc += alpha.expanded(sp, j) * cond_exp_expanded(sp, f, j);
    tails[static_cast<std::size_t>(j)] = acc;
  }
  return tails;
}

template <typename S>
struct BilinearResult {
  Vec<S> values;  // sum_i alpha_i E_i(f) E_i(g), pointwise
  S mass;         // its integral against dmu
};

template <typename S>
BilinearResult<S> bilinear_op(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha,
                              const Vec<S>& f, const Vec<S>& g) {
  Vec<S> acc = Vec<S>::Constant(sp.atom_count(), S(0));
  for (int i = 0; i <= sp.last_level(); ++i)
    acc += alpha.expanded(sp, i) * cond_exp_expanded(sp, f, i) * cond_exp_expanded(sp, g, i);
  return {acc, integrate(sp, acc)};
}

/// Weak L^q quasinorm: sup_t t * w({|g| >= t})^{1/q} over the distinct values
/// t of |g|. On a finite space this equals sup_{lambda>0} lambda *
/// w({|g| > lambda})^{1/q} because the distribution function is a
/// right-continuous step function.
template <typename S>
S weak_norm(const FilteredSpace<S>& sp, const Vec<S>& g, const S& q, const Vec<S>& w) {
  if (!(q >= S(1))) throw std::invalid_argument("weak_norm: requires q >= 1");
  std::vector<S> values;
  values.reserve(static_cast<std::size_t>(sp.atom_count()));
  for (Index x = 0; x < sp.atom_count(); ++x) values.push_back(g[x] < S(0) ? S(-g[x]) : g[x]);
  std::vector<S> thresholds = values;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const S inv_q = S(1) / q;
  S best(0);
  for (const S& t : thresholds) {
    if (!(t > S(0))) continue;
    S mass(0);
    for (Index x = 0; x < sp.atom_count(); ++x)
      if (values[static_cast<std::size_t>(x)] >= t) mass += w[x] * sp.mu()[x];
    const S cand = t * power(mass, inv_q);
    if (cand > best) best = cand;
  }
  return best;
}

}  // namespace fms
