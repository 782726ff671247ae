#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fms/operators.hpp"
#include "fms/parallel.hpp"

namespace fms {

/// One computed bracket constant, with the (level, set) witness attaining the
/// supremum and the enumeration mode it was taken over.
template <typename S>
struct ConstantsReport {
  std::string name;
  S value{};
  SetMode mode = SetMode::atoms;
  MeasurableSet witness;
  S p{};
  S q{};
};

namespace detail {

/// Supremum of term(i, E) over levels i and enumerated level-i sets E.
/// Levels are scanned in parallel; within a level the enumeration order is
/// fixed and ties keep the lexicographically smallest witness.
template <typename S, typename Term>
std::pair<S, MeasurableSet> sup_over_sets(const FilteredSpace<S>& sp, SetMode mode, Index cap,
                                          Term&& term) {
  struct Best {
    S value;
    MeasurableSet witness;
  };
  auto level_best = map_indexed<Best>(sp.level_count(), [&](Index li) {
    const int i = static_cast<int>(li);
    Best best{S(0), MeasurableSet{}};
    bool first = true;
    for_each_set(sp, i, mode, [&](const MeasurableSet& e) {
      S v = term(i, e);
      if (first || v > best.value || (v == best.value && e < best.witness)) {
        best = Best{std::move(v), e};
        first = false;
      }
    }, cap);
    return best;
  });
  Best overall = level_best.front();
  for (std::size_t i = 1; i < level_best.size(); ++i)
    if (level_best[i].value > overall.value) overall = level_best[i];
  return {overall.value, overall.witness};
}

}  // namespace detail

/// Dual weight sigma = omega^{-1/(p-1)}; exact over Rational whenever the
/// exponent is an integer (p = 2, 3/2, ...).
template <typename S>
Vec<S> dual_weight(const FilteredSpace<S>& sp, const Vec<S>& w, const S& p) {
  if (!(p > S(1))) throw std::invalid_argument("dual_weight: requires p > 1");
  const S e = S(-1) / (p - S(1));
  Vec<S> out(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) out[x] = power(w[x], e);
  return out;
}

/// A_1 constant: smallest C with sup_j E_j(v) <= C v, i.e. the essential sup
/// of Mv / v. Always >= 1 (level L contributes v/v).
template <typename S>
S a1_const(const FilteredSpace<S>& sp, const Vec<S>& v) {
  const Vec<S> mv = doob_maximal(sp, v);
  S best(0);
  for (Index x = 0; x < sp.atom_count(); ++x) {
    const S r = mv[x] / v[x];
    if (r > best) best = r;
  }
  return best;
}

/// Two-weight A_p constant: sup over levels and atoms of
/// E_j(v) * E_j(omega^{1-p'})^{p/p'}.
template <typename S>
S ap_two_weight(const FilteredSpace<S>& sp, const Vec<S>& v, const Vec<S>& w, const S& p) {
  if (!(p > S(1))) throw std::invalid_argument("ap constant: requires p > 1");
  const S pc = conjugate_exponent(p);
  const S dual_exp = S(1) - pc;  // omega^{1-p'} is the dual weight
  const S outer = p / pc;        // = p - 1
  Vec<S> wd(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) wd[x] = power(w[x], dual_exp);
  S best(0);
  for (int j = 0; j <= sp.last_level(); ++j) {
    const LevelFunction<S> ev = cond_exp(sp, v, j);
    const LevelFunction<S> ew = cond_exp(sp, wd, j);
    for (Index a = 0; a < sp.level_atom_count(j); ++a) {
      const S cand = ev.values[a] * power(ew.values[a], outer);
      if (cand > best) best = cand;
    }
  }
  return best;
}

template <typename S>
S ap_one_weight(const FilteredSpace<S>& sp, const Vec<S>& w, const S& p) {
  return ap_two_weight(sp, w, w, p);
}

/// Exponential A_infinity constant: sup over levels and atoms of
/// E_j(omega) * exp(E_j(log omega^{-1})).
template <typename S>
S ainf_exp(const FilteredSpace<S>& sp, const Vec<S>& w) {
  Vec<S> neg_log_w(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) neg_log_w[x] = S(-1) * log_of(w[x]);
  S best(0);
  for (int j = 0; j <= sp.last_level(); ++j) {
    const LevelFunction<S> ew = cond_exp(sp, w, j);
    const LevelFunction<S> el = cond_exp(sp, neg_log_w, j);
    for (Index a = 0; a < sp.level_atom_count(j); ++a) {
      const S cand = ew.values[a] * exp_of(el.values[a]);
      if (cand > best) best = cand;
    }
  }
  return best;
}

/// Sawyer-type testing constant of the maximal operator:
/// sup_{i,E} (int_E (*M_i(sigma chi_E))^p v dmu / sigma(E))^{1/p}.
template <typename S>
ConstantsReport<S> sp_star(const FilteredSpace<S>& sp, const Vec<S>& v, const Vec<S>& w, const S& p,
                           SetMode mode, Index cap = kDefaultExhaustiveCap) {
  if (!(p > S(1))) throw std::invalid_argument("sp_star: requires p > 1");
  const Vec<S> sigma = dual_weight(sp, w, p);
  auto [sup_pow, witness] = detail::sup_over_sets(sp, mode, cap, [&](int i, const MeasurableSet& e) {
    const Vec<S> g = sigma * indicator(sp, e);
    const Vec<S> tm = tailed_maximal(sp, g, i);
    S num(0), den(0);
    for (Index a : e.atoms)
      for (Index x : sp.members(e.level, a)) {
        num += power(tm[x], p) * v[x] * sp.mu()[x];
        den += sigma[x] * sp.mu()[x];
      }
    return num / den;
  });
  return {"Sp*", power(sup_pow, S(1) / p), mode, witness, p, S(0)};
}

/// B_p constant: sup over levels and atoms of
/// E_i(v) E_i(sigma)^p / exp(E_i(log sigma)).
template <typename S>
S bp_const(const FilteredSpace<S>& sp, const Vec<S>& v, const Vec<S>& w, const S& p) {
  if (!(p > S(1))) throw std::invalid_argument("bp_const: requires p > 1");
  const Vec<S> sigma = dual_weight(sp, w, p);
  Vec<S> log_sigma(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) log_sigma[x] = log_of(sigma[x]);
  S best(0);
  for (int i = 0; i <= sp.last_level(); ++i) {
    const LevelFunction<S> ev = cond_exp(sp, v, i);
    const LevelFunction<S> es = cond_exp(sp, sigma, i);
    const LevelFunction<S> el = cond_exp(sp, log_sigma, i);
    for (Index a = 0; a < sp.level_atom_count(i); ++a) {
      const S cand = ev.values[a] * power(es.values[a], p) / exp_of(el.values[a]);
      if (cand > best) best = cand;
    }
  }
  return best;
}

/// Tailed A_infinity constant: sup_{i,E} int_E *M_i(omega chi_E) dmu / omega(E).
template <typename S>
ConstantsReport<S> ainf_star(const FilteredSpace<S>& sp, const Vec<S>& w, SetMode mode,
                             Index cap = kDefaultExhaustiveCap) {
  auto [sup, witness] = detail::sup_over_sets(sp, mode, cap, [&](int i, const MeasurableSet& e) {
    const Vec<S> g = w * indicator(sp, e);
    const Vec<S> tm = tailed_maximal(sp, g, i);
    S num(0), den(0);
    for (Index a : e.atoms)
      for (Index x : sp.members(e.level, a)) {
        num += tm[x] * sp.mu()[x];
        den += w[x] * sp.mu()[x];
      }
    return num / den;
  });
  return {"Ainf*", sup, mode, witness, S(0), S(0)};
}

/// Mixed constant: sup_{i,Q} (esssup_Q(E_i(omega) E_i(sigma)^{p-1})
/// * int_Q *M_i(sigma chi_Q) dmu / |Q|)^{1/p}, sigma = omega^{-1/(p-1)}.
template <typename S>
ConstantsReport<S> mixed_const(const FilteredSpace<S>& sp, const Vec<S>& w, const S& p,
                               SetMode mode, Index cap = kDefaultExhaustiveCap) {
  if (!(p > S(1))) throw std::invalid_argument("mixed_const: requires p > 1");
  const Vec<S> sigma = dual_weight(sp, w, p);
  // E_i(omega) E_i(sigma)^{p-1} per level, on the level atoms
  std::vector<Vec<S>> level_density;
  for (int i = 0; i <= sp.last_level(); ++i) {
    const LevelFunction<S> ew = cond_exp(sp, w, i);
    const LevelFunction<S> es = cond_exp(sp, sigma, i);
    Vec<S> d(sp.level_atom_count(i));
    for (Index a = 0; a < sp.level_atom_count(i); ++a)
      d[a] = ew.values[a] * power(es.values[a], p - S(1));
    level_density.push_back(std::move(d));
  }
  auto [sup_pow, witness] = detail::sup_over_sets(sp, mode, cap, [&](int i, const MeasurableSet& e) {
    const auto& density = level_density[static_cast<std::size_t>(i)];
    S ess(0);
    bool first = true;
    for (Index a : e.atoms) {
      if (first || density[a] > ess) ess = density[a];
      first = false;
    }
    const Vec<S> g = sigma * indicator(sp, e);
    const Vec<S> tm = tailed_maximal(sp, g, i);
    S num(0), vol(0);
    for (Index a : e.atoms)
      for (Index x : sp.members(e.level, a)) {
        num += tm[x] * sp.mu()[x];
        vol += sp.mu()[x];
      }
    return ess * num / vol;
  });
  return {"mixed", power(sup_pow, S(1) / p), mode, witness, p, S(0)};
}

/// Testing constant [sigma, omega]_{alpha,p,q}:
/// sup_{i,E} (int_E (sum_{j>=i} E_j(omega) alpha_j)^{p'} sigma dmu)^{1/p'}
///           / omega(E)^{1/q'}.
template <typename S>
ConstantsReport<S> testing_forward(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha,
                                   const Vec<S>& sigma, const Vec<S>& w, const S& p, const S& q,
                                   SetMode mode, Index cap = kDefaultExhaustiveCap) {
  if (!(p > S(1)) || !(q >= p)) throw std::invalid_argument("testing constant: requires 1 < p <= q");
  const S pc = conjugate_exponent(p);
  const S qc = conjugate_exponent(q);
  const std::vector<Vec<S>> tails = positive_op_tails(sp, alpha, w);
  // per level: atomwise integrals of the tail power and of omega
  std::vector<Vec<S>> tail_int(static_cast<std::size_t>(sp.level_count()));
  std::vector<Vec<S>> w_int(static_cast<std::size_t>(sp.level_count()));
  for (int i = 0; i <= sp.last_level(); ++i) {
    Vec<S> ti = Vec<S>::Constant(sp.level_atom_count(i), S(0));
    Vec<S> wi = Vec<S>::Constant(sp.level_atom_count(i), S(0));
    const Vec<S>& u = tails[static_cast<std::size_t>(i)];
    for (Index a = 0; a < sp.level_atom_count(i); ++a)
      for (Index x : sp.members(i, a)) {
        ti[a] += power(u[x], pc) * sigma[x] * sp.mu()[x];
        wi[a] += w[x] * sp.mu()[x];
      }
    tail_int[static_cast<std::size_t>(i)] = std::move(ti);
    w_int[static_cast<std::size_t>(i)] = std::move(wi);
  }
  const S outer = pc / qc;
  auto [sup_pow, witness] = detail::sup_over_sets(sp, mode, cap, [&](int i, const MeasurableSet& e) {
    S num(0), den(0);
    for (Index a : e.atoms) {
      num += tail_int[static_cast<std::size_t>(i)][a];
      den += w_int[static_cast<std::size_t>(i)][a];
    }
    return num / power(den, outer);  // compared in the p'-th power domain
  });
  return {"[sigma,omega]", power(sup_pow, S(1) / pc), mode, witness, p, q};
}

/// Testing constant [omega, sigma]_{alpha,q',p'}:
/// sup_{i,E} (int_E (sum_{j>=i} E_j(sigma) alpha_j)^q omega dmu)^{1/q}
///           / sigma(E)^{1/p}.
template <typename S>
ConstantsReport<S> testing_backward(const FilteredSpace<S>& sp, const AlphaSequence<S>& alpha,
                                    const Vec<S>& sigma, const Vec<S>& w, const S& p, const S& q,
                                    SetMode mode, Index cap = kDefaultExhaustiveCap) {
  if (!(p > S(1)) || !(q >= p)) throw std::invalid_argument("testing constant: requires 1 < p <= q");
  const std::vector<Vec<S>> tails = positive_op_tails(sp, alpha, sigma);
  std::vector<Vec<S>> tail_int(static_cast<std::size_t>(sp.level_count()));
  std::vector<Vec<S>> s_int(static_cast<std::size_t>(sp.level_count()));
  for (int i = 0; i <= sp.last_level(); ++i) {
    Vec<S> ti = Vec<S>::Constant(sp.level_atom_count(i), S(0));
    Vec<S> si = Vec<S>::Constant(sp.level_atom_count(i), S(0));
    const Vec<S>& u = tails[static_cast<std::size_t>(i)];
    for (Index a = 0; a < sp.level_atom_count(i); ++a)
      for (Index x : sp.members(i, a)) {
        ti[a] += power(u[x], q) * w[x] * sp.mu()[x];
        si[a] += sigma[x] * sp.mu()[x];
      }
    tail_int[static_cast<std::size_t>(i)] = std::move(ti);
    s_int[static_cast<std::size_t>(i)] = std::move(si);
  }
  const S outer = q / p;
  auto [sup_pow, witness] = detail::sup_over_sets(sp, mode, cap, [&](int i, const MeasurableSet& e) {
    S num(0), den(0);
    for (Index a : e.atoms) {
      num += tail_int[static_cast<std::size_t>(i)][a];
      den += s_int[static_cast<std::size_t>(i)][a];
    }
    return num / power(den, outer);  // q-th power domain
  });
  return {"[omega,sigma]", power(sup_pow, S(1) / q), mode, witness, p, q};
}

}  // namespace fms
