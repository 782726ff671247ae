#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fms/constants.hpp"
#include "fms/operators.hpp"
#include "fms/rng.hpp"

namespace fms {

using VecD = Vec<double>;
using SpaceD = FilteredSpace<double>;
using AlphaD = AlphaSequence<double>;

/// A certified lower bound on an operator norm, with the input attaining it.
struct NormEstimate {
  double value = 0.0;
  VecD witness_f;
  VecD witness_g;  // bilinear objectives only
  std::string method = "candidate-pool";
  int iterations = 0;
};

struct CheckLine {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs where defined
  bool hard = true;    // hard lines gate pass(); soft lines only report
  bool pass = true;
};

struct VerificationReport {
  std::string theorem;
  double p = 0.0, q = 0.0;
  SetMode mode = SetMode::atoms;
  std::uint64_t seed = 0;
  std::map<std::string, double> constants;
  std::vector<CheckLine> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (c.hard && !c.pass) return false;
    return true;
  }
};

struct VerifyOptions {
  double c_budget = 64.0;  // every hidden "<=" up to a constant gets this budget
  SetMode mode = SetMode::atoms;
  Index cap = kDefaultExhaustiveCap;
  Tolerance tol;
  std::uint64_t seed = 1;
  int budget = 8;     // ascent restarts
  int trials = 200;   // sampled inputs per instance
};

// ---------------------------------------------------------------------------
// norm objectives

/// The three ratio objectives whose suprema the theorems bound. `strong` is
/// ||T_a(f sigma)||_{L^q(w)} / ||f||_{L^p(sigma)} (the bilinear form is
/// maximized in its second argument by the Holder-extremal partner, so one
/// argument suffices); `weak` replaces the numerator by the weak L^q
/// quasinorm; `maximal` is ||Mf||_{L^p(v)} / ||f||_{L^p(w)}.
struct NormObjective {
  enum class Kind { strong, weak, maximal };
  Kind kind = Kind::strong;
  const SpaceD* space = nullptr;
  const AlphaD* alpha = nullptr;  // strong / weak
  VecD sigma;                     // strong / weak input weight
  VecD w;                         // strong / weak output weight; maximal input weight
  VecD v;                         // maximal output weight
  double p = 2.0, q = 2.0;

  double eval(const VecD& f) const {
    const SpaceD& sp = *space;
    switch (kind) {
      case Kind::strong: {
        const double den = lp_norm(sp, f, p, sigma);
        if (!(den > 0.0)) return 0.0;
        const VecD tf = positive_op(sp, *alpha, VecD(f * sigma));
        return lp_norm(sp, tf, q, w) / den;
      }
      case Kind::weak: {
        const double den = lp_norm(sp, f, p, sigma);
        if (!(den > 0.0)) return 0.0;
        const VecD tf = positive_op(sp, *alpha, VecD(f * sigma));
        return weak_norm(sp, tf, q, w) / den;
      }
      case Kind::maximal: {
        const double den = lp_norm(sp, f, p, w);
        if (!(den > 0.0)) return 0.0;
        return lp_norm(sp, doob_maximal(sp, f), p, v) / den;
      }
    }
    return 0.0;
  }

  /// Holder-extremal partner for the bilinear strong form.
  VecD partner_g(const VecD& f) const {
    const VecD tf = positive_op(*space, *alpha, VecD(f * sigma));
    return tf.pow(q - 1.0);
  }
  /// Extremal f for a given g on the dual side of the strong form.
  VecD f_from_g(const VecD& g) const {
    const double pc = p / (p - 1.0);
    const VecD tg = positive_op(*space, *alpha, VecD(g * w));
    return tg.pow(pc - 1.0);
  }
};

namespace detail {

/// Multiplicative coordinate ascent with a x2, x1.1, x1.01 factor schedule;
/// the objective is a ratio of norms, scale-free and smooth away from zero,
/// so sweeps until no factor improves any coordinate.
inline double coordinate_ascent(const NormObjective& obj, VecD& f, int& iterations) {
  double best = obj.eval(f);
  const double factors[] = {2.0, 1.1, 1.01};
  bool improved = true;
  int sweeps = 0;
  while (improved && sweeps < 200) {
    improved = false;
    ++sweeps;
    for (double factor : factors) {
      for (Index x = 0; x < f.size(); ++x) {
        const double saved = f[x];
        for (double m : {factor, 1.0 / factor}) {
          f[x] = saved * m;
          const double cand = obj.eval(f);
          if (cand > best * (1.0 + 1e-13)) {
            best = cand;
            improved = true;
            goto coordinate_done;
          }
          f[x] = saved;
        }
      coordinate_done:;
        ++iterations;
      }
    }
    const double peak = f.maxCoeff();
    if (peak > 0) f /= peak;  // objective is 0-homogeneous
  }
  return best;
}

/// Alternating closed-form updates for the strong form (a positive power
/// iteration), available only when partners are closed-form.
inline double alternate_strong(const NormObjective& obj, VecD& f, int& iterations) {
  double best = obj.eval(f);
  for (int it = 0; it < 50; ++it) {
    ++iterations;
    VecD g = obj.partner_g(f);
    if (!(g.maxCoeff() > 0.0)) break;
    VecD f2 = obj.f_from_g(g);
    if (!(f2.maxCoeff() > 0.0)) break;
    f2 /= f2.maxCoeff();
    const double cand = obj.eval(f2);
    if (cand <= best * (1.0 + 1e-12)) break;
    best = cand;
    f = f2;
  }
  return best;
}

inline void append_indicator_pool(const SpaceD& sp, std::vector<VecD>& pool) {
  pool.push_back(VecD::Constant(sp.atom_count(), 1.0));
  for (int i = 0; i <= sp.last_level(); ++i)
    for (Index a = 0; a < sp.level_atom_count(i); ++a)
      pool.push_back(indicator(sp, MeasurableSet{i, {a}}));
  if (sp.atom_count() <= 10) {  // tiny spaces: every union of finest atoms
    const std::uint64_t total = (std::uint64_t(1) << sp.atom_count()) - 1;
    for (std::uint64_t bits = 1; bits <= total; ++bits) {
      VecD f = VecD::Constant(sp.atom_count(), 0.0);
      for (Index x = 0; x < sp.atom_count(); ++x)
        if (bits & (std::uint64_t(1) << x)) f[x] = 1.0;
      pool.push_back(std::move(f));
    }
  }
}

inline void append_random_pool(const SpaceD& sp, std::vector<VecD>& pool, std::uint64_t seed,
                               int count) {
  Rng rng(seed);
  for (int t = 0; t < count; ++t) {
    VecD f(sp.atom_count());
    for (Index x = 0; x < f.size(); ++x) f[x] = std::exp(rng.normal());
    pool.push_back(std::move(f));
  }
}

/// Coarse tensor grid over tiny spaces; keeps the search competitive with
/// grid-based certification.
inline void append_grid_pool(const SpaceD& sp, std::vector<VecD>& pool) {
  if (sp.atom_count() > 6) return;
  const double values[] = {0.0, 0.125, 0.5, 2.0, 8.0};
  const std::size_t m = 5;
  std::size_t total = 1;
  for (Index x = 0; x < sp.atom_count(); ++x) total *= m;
  for (std::size_t idx = 1; idx < total; ++idx) {
    VecD f(sp.atom_count());
    std::size_t rest = idx;
    for (Index x = 0; x < sp.atom_count(); ++x) {
      f[x] = values[rest % m];
      rest /= m;
    }
    if (f.maxCoeff() > 0.0) pool.push_back(std::move(f));
  }
}

inline NormEstimate estimate_norm(const NormObjective& obj, int budget, std::uint64_t seed,
                                  std::span<const VecD> extra) {
  const SpaceD& sp = *obj.space;
  std::vector<VecD> pool;
  append_indicator_pool(sp, pool);
  for (const VecD& f : extra)
    if (f.size() == sp.atom_count() && f.maxCoeff() > 0.0) pool.push_back(f);
  if (obj.kind != NormObjective::Kind::maximal) {
    // dual-side seeds: extremal f for indicator g candidates
    std::vector<VecD> g_seeds;
    append_indicator_pool(sp, g_seeds);
    for (const VecD& g : g_seeds) {
      VecD f = obj.f_from_g(g);
      if (f.maxCoeff() > 0.0) pool.push_back(std::move(f));
    }
  }
  append_grid_pool(sp, pool);
  append_random_pool(sp, pool, seed, 1000);

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) ranked.emplace_back(obj.eval(pool[i]), i);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });

  NormEstimate est;
  est.value = ranked.front().first;
  est.witness_f = pool[ranked.front().second];
  est.method = "candidate-pool";
  const int restarts = std::min<int>(std::max(budget, 1), static_cast<int>(ranked.size()));
  for (int r = 0; r < restarts; ++r) {
    VecD f = pool[ranked[static_cast<std::size_t>(r)].second];
    if (!(f.maxCoeff() > 0.0)) continue;
    f /= f.maxCoeff();
    int iter = 0;
    double v = obj.eval(f);
    if (obj.kind == NormObjective::Kind::strong) v = alternate_strong(obj, f, iter);
    v = coordinate_ascent(obj, f, iter);
    est.iterations += iter;
    if (v > est.value * (1.0 + 1e-15)) {
      est.value = v;
      est.witness_f = f;
      est.method = "ascent";
    }
  }
  if (est.witness_f.maxCoeff() > 0.0) est.witness_f /= est.witness_f.maxCoeff();
  if (obj.kind == NormObjective::Kind::strong) est.witness_g = obj.partner_g(est.witness_f);
  return est;
}

inline double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline CheckLine make_check(std::string name, double lhs, double rhs, bool hard, Tolerance tol) {
  CheckLine c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.ratio = safe_ratio(lhs, rhs);
  c.hard = hard;
  c.pass = le_tol(lhs, rhs, tol);
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// norm estimates

/// Lower bound on sup over f,g >= 0 of
/// int T_a(f sigma, g w) dmu / (||f||_{L^p(sigma)} ||g||_{L^{q'}(w)}).
inline NormEstimate estimate_strong_norm(const SpaceD& sp, const AlphaD& alpha, const VecD& sigma,
                                         const VecD& w, double p, double q, int budget = 8,
                                         std::uint64_t seed = 1,
                                         std::span<const VecD> extra = {}) {
  NormObjective obj{NormObjective::Kind::strong, &sp, &alpha, sigma, w, {}, p, q};
  bool degenerate = true;
  for (const auto& lvl : alpha.per_level)
    if (lvl.size() > 0 && lvl.maxCoeff() > 0.0) degenerate = false;
  if (degenerate)
    return NormEstimate{0.0, VecD::Constant(sp.atom_count(), 1.0), VecD{}, "degenerate", 0};
  return detail::estimate_norm(obj, budget, seed, extra);
}

inline NormEstimate estimate_weak_norm(const SpaceD& sp, const AlphaD& alpha, const VecD& sigma,
                                       const VecD& w, double p, double q, int budget = 8,
                                       std::uint64_t seed = 1, std::span<const VecD> extra = {}) {
  NormObjective obj{NormObjective::Kind::weak, &sp, &alpha, sigma, w, {}, p, q};
  return detail::estimate_norm(obj, budget, seed, extra);
}

/// Lower bound on ||M||_{L^p(w) -> L^p(v)} over f >= 0.
inline NormEstimate estimate_maximal_norm(const SpaceD& sp, const VecD& v, const VecD& w, double p,
                                          int budget = 8, std::uint64_t seed = 1,
                                          std::span<const VecD> extra = {}) {
  NormObjective obj{NormObjective::Kind::maximal, &sp, nullptr, {}, w, v, p, p};
  std::vector<VecD> pool(extra.begin(), extra.end());
  const VecD sigma = dual_weight(sp, w, p);
  for (int i = 0; i <= sp.last_level(); ++i)
    for (Index a = 0; a < sp.level_atom_count(i); ++a)
      pool.push_back(VecD(sigma * indicator(sp, MeasurableSet{i, {a}})));
  return detail::estimate_norm(obj, budget, seed, pool);
}

/// Full tensor-grid maximum of a norm objective on tiny instances; certifies
/// the search-based estimates from an independent direction.
inline double oracle_exhaustive_norm(const SpaceD& sp, const NormObjective& obj,
                                     int grid_points = 8) {
  if (sp.atom_count() > 6)
    throw std::invalid_argument("oracle_exhaustive_norm: instance too large (> 6 atoms)");
  if (grid_points < 8)
    throw std::invalid_argument("oracle_exhaustive_norm: needs >= 8 grid points per atom");
  std::vector<double> values{0.0};
  for (int g = 0; g < grid_points; ++g) {
    const double e = -3.0 + 7.0 * static_cast<double>(g) / static_cast<double>(grid_points - 1);
    values.push_back(std::exp2(e));
  }
  const Index n = sp.atom_count();
  const std::size_t m = values.size();
  std::size_t total = 1;
  for (Index x = 0; x < n; ++x) total *= m;
  double best = 0.0;
  VecD f(n);
  for (std::size_t idx = 1; idx < total; ++idx) {
    std::size_t rest = idx;
    for (Index x = 0; x < n; ++x) {
      f[x] = values[rest % m];
      rest /= m;
    }
    const double v = obj.eval(f);
    if (v > best) best = v;
  }
  return best;
}

// ---------------------------------------------------------------------------
// theorem verifiers

/// Two-weight strong type characterization: testing constants never exceed
/// the norm estimate (hard, constant 1), and the estimate stays within
/// c_budget of [w,s][w]_{A1} + [s,w][s]_{A1}.
inline VerificationReport verify_strong(const SpaceD& sp, const AlphaD& alpha, const VecD& sigma,
                                        const VecD& w, double p, double q,
                                        const VerifyOptions& opts = {}) {
  VerificationReport rep;
  rep.theorem = "strong-type";
  rep.p = p;
  rep.q = q;
  rep.mode = opts.mode;
  rep.seed = opts.seed;

  const ConstantsReport<double> tf = testing_forward(sp, alpha, sigma, w, p, q, opts.mode, opts.cap);
  const ConstantsReport<double> tb = testing_backward(sp, alpha, sigma, w, p, q, opts.mode, opts.cap);
  const double a1w = a1_const(sp, w);
  const double a1s = a1_const(sp, sigma);

  std::vector<VecD> extra;
  extra.push_back(indicator(sp, tb.witness));   // realizes the backward constant as f
  extra.push_back(indicator(sp, tf.witness));
  {
    // dual seed: extremal f for g = chi_E at the forward witness
    NormObjective obj{NormObjective::Kind::strong, &sp, &alpha, sigma, w, {}, p, q};
    VecD g = indicator(sp, tf.witness);
    VecD f = obj.f_from_g(g);
    if (f.maxCoeff() > 0.0) extra.push_back(std::move(f));
  }
  const NormEstimate est =
      estimate_strong_norm(sp, alpha, sigma, w, p, q, opts.budget, opts.seed, extra);

  rep.constants["testing_forward"] = tf.value;
  rep.constants["testing_backward"] = tb.value;
  rep.constants["a1_omega"] = a1w;
  rep.constants["a1_sigma"] = a1s;
  rep.constants["norm_estimate"] = est.value;

  rep.checks.push_back(
      detail::make_check("testing_backward <= ||T||", tb.value, est.value, true, opts.tol));
  rep.checks.push_back(
      detail::make_check("testing_forward <= ||T||", tf.value, est.value, true, opts.tol));
  const double upper = tb.value * a1w + tf.value * a1s;
  rep.checks.push_back(detail::make_check("||T|| <= budget * ([w,s][w]_A1 + [s,w][s]_A1)",
                                          est.value, opts.c_budget * upper, true, opts.tol));
  rep.constants["upper_ratio"] = detail::safe_ratio(est.value, upper);
  bool one_weight = (sigma.size() == w.size()) && ((sigma - w).abs().maxCoeff() == 0.0);
  if (one_weight) {
    rep.checks.push_back(detail::make_check("||T|| <= budget * ([w,w] + [w,w]) (one weight)",
                                            est.value, opts.c_budget * (tb.value + tf.value), true,
                                            opts.tol));
    rep.constants["one_weight_ratio"] = detail::safe_ratio(est.value, tb.value + tf.value);
  }
  return rep;
}

/// Explicit weak-type constant 2^{q+1} (1+q)/q (1+q)^{1/q}.
inline double weak_type_constant(double q) {
  return std::exp2(q + 1.0) * ((1.0 + q) / q) * std::pow(1.0 + q, 1.0 / q);
}

/// Dual-pairing form of the weak norm: sup_F w(F)^{1/q - 1} int_F |v| w dmu,
/// scanned over the superlevel sets of |v| plus any supplied candidate sets
/// (as finest-atom index lists). It dominates weak_norm and is at most q'
/// times it; the Lorentz duality pairing holds against it with constant 1.
inline double pairing_weak_norm(const SpaceD& sp, const VecD& v, double q, const VecD& w,
                                std::span<const std::vector<Index>> candidates = {}) {
  if (!(q > 1.0)) throw std::invalid_argument("pairing_weak_norm: requires q > 1");
  const double e = 1.0 / q - 1.0;
  std::vector<Index> order(static_cast<std::size_t>(sp.atom_count()));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
  double best = 0.0, mass = 0.0, integral = 0.0;
  for (Index x : order) {
    mass += w[x] * sp.mu()[x];
    integral += std::abs(v[x]) * w[x] * sp.mu()[x];
    best = std::max(best, std::pow(mass, e) * integral);
  }
  for (const auto& set : candidates) {
    double m = 0.0, s = 0.0;
    for (Index x : set) {
      m += w[x] * sp.mu()[x];
      s += std::abs(v[x]) * w[x] * sp.mu()[x];
    }
    if (m > 0.0) best = std::max(best, std::pow(m, e) * s);
  }
  return best;
}

/// Two-weight weak type: for every sampled f >= 0 the weak norm of
/// T_a(f sigma) is bounded by C* [s,w]_{a,p,q} ||f||_{L^p(sigma)} (hard,
/// explicit constant), and the testing constant never exceeds the estimated
/// weak operator norm.
inline VerificationReport verify_weak(const SpaceD& sp, const AlphaD& alpha, const VecD& sigma,
                                      const VecD& w, double p, double q,
                                      const VerifyOptions& opts = {}) {
  VerificationReport rep;
  rep.theorem = "weak-type";
  rep.p = p;
  rep.q = q;
  rep.mode = opts.mode;
  rep.seed = opts.seed;

  const ConstantsReport<double> tf = testing_forward(sp, alpha, sigma, w, p, q, opts.mode, opts.cap);
  const double cstar = weak_type_constant(q);
  rep.constants["testing_forward"] = tf.value;
  rep.constants["weak_constant"] = cstar;

  std::vector<VecD> samples;
  detail::append_indicator_pool(sp, samples);
  samples.push_back(indicator(sp, tf.witness));
  {
    // the dual witness u^{p'-1} chi_E realizing the testing constant
    const double pc = p / (p - 1.0);
    const VecD u = positive_op_tail(sp, alpha, w, tf.witness.level);
    samples.push_back(VecD(u.pow(pc - 1.0) * indicator(sp, tf.witness)));
  }
  detail::append_random_pool(sp, samples, opts.seed, opts.trials);

  double worst = 0.0;
  bool bound_ok = true;
  for (const VecD& f : samples) {
    const double den = lp_norm(sp, f, p, sigma);
    if (!(den > 0.0)) continue;
    const double wn = weak_norm(sp, positive_op(sp, alpha, VecD(f * sigma)), q, w);
    const double rhs = cstar * tf.value * den;
    if (!le_tol(wn, rhs, opts.tol)) bound_ok = false;
    const double r = detail::safe_ratio(wn, rhs);
    if (r > worst) worst = r;
  }
  CheckLine weak_bound;
  weak_bound.name = "weak norm <= C* [s,w] ||f|| (all sampled f)";
  weak_bound.lhs = worst;
  weak_bound.rhs = 1.0;
  weak_bound.ratio = worst;
  weak_bound.hard = true;
  weak_bound.pass = bound_ok;
  rep.checks.push_back(weak_bound);
  rep.constants["weak_max_ratio"] = worst;

  const NormEstimate est = estimate_weak_norm(sp, alpha, sigma, w, p, q, opts.budget, opts.seed,
                                              std::span<const VecD>(samples));
  rep.constants["weak_norm_estimate"] = est.value;
  // The converse with constant 1 against the plain quasinorm: asserted as
  // stated even though the sup genuinely falls short by up to the Lorentz
  // duality factor q' (exhaustive search confirms the gap on tiny
  // instances). The two lines after it carry the forms that do hold.
  rep.checks.push_back(
      detail::make_check("testing_forward <= ||T||_weak", tf.value, est.value, true, opts.tol));
  const double qc = q / (q - 1.0);
  rep.checks.push_back(detail::make_check("testing_forward <= q' * ||T||_weak", tf.value,
                                          qc * est.value, false, opts.tol));
  {
    // duality-corrected estimate: the pairing form of the weak norm, with the
    // testing witness set among the candidates
    const std::vector<std::vector<Index>> sets{finest_of(sp, tf.witness)};
    double pairing_est = 0.0;
    for (const VecD& f : samples) {
      const double den = lp_norm(sp, f, p, sigma);
      if (!(den > 0.0)) continue;
      const VecD tfv = positive_op(sp, alpha, VecD(f * sigma));
      pairing_est = std::max(
          pairing_est, pairing_weak_norm(sp, tfv, q, w, std::span<const std::vector<Index>>(sets)) / den);
    }
    rep.constants["pairing_weak_norm_estimate"] = pairing_est;
    rep.checks.push_back(detail::make_check("testing_forward <= ||T||_weak-pairing", tf.value,
                                            pairing_est, false, opts.tol));
  }
  return rep;
}

/// Mixed bounds for the Doob maximal operator plus the two-sided testing
/// characterization and the clean Doob inequality on samples.
inline VerificationReport verify_maximal_bounds(const SpaceD& sp, const VecD& v, const VecD& w,
                                                double p, const VerifyOptions& opts = {}) {
  VerificationReport rep;
  rep.theorem = "maximal-bounds";
  rep.p = p;
  rep.q = p;
  rep.mode = opts.mode;
  rep.seed = opts.seed;

  const VecD sigma = dual_weight(sp, w, p);
  const ConstantsReport<double> spst = sp_star(sp, v, w, p, opts.mode, opts.cap);
  std::vector<VecD> extra;
  extra.push_back(VecD(sigma * indicator(sp, spst.witness)));
  const NormEstimate est = estimate_maximal_norm(sp, v, w, p, opts.budget, opts.seed, extra);

  const double bp = bp_const(sp, v, w, p);
  const double ap_vw = ap_two_weight(sp, v, w, p);
  const double ainf_sigma = ainf_star(sp, sigma, opts.mode, opts.cap).value;

  rep.constants["sp_star"] = spst.value;
  rep.constants["norm_estimate"] = est.value;
  rep.constants["bp"] = bp;
  rep.constants["ap_two_weight"] = ap_vw;
  rep.constants["ainf_star_sigma"] = ainf_sigma;

  rep.checks.push_back(
      detail::make_check("sp_star <= ||M||", spst.value, est.value, true, opts.tol));
  rep.checks.push_back(detail::make_check("||M|| <= budget * sp_star", est.value,
                                          opts.c_budget * spst.value, true, opts.tol));
  rep.checks.push_back(detail::make_check("||M|| <= budget * [v,w]_Bp^{1/p}", est.value,
                                          opts.c_budget * std::pow(bp, 1.0 / p), true, opts.tol));
  rep.checks.push_back(detail::make_check(
      "||M|| <= budget * ([v,w]_Ap [s]_Ainf*)^{1/p}", est.value,
      opts.c_budget * std::pow(ap_vw * ainf_sigma, 1.0 / p), true, opts.tol));

  const bool one_weight = ((v - w).abs().maxCoeff() == 0.0);
  if (one_weight) {
    const double mixed = mixed_const(sp, w, p, opts.mode, opts.cap).value;
    const double ap_w = ap_one_weight(sp, w, p);
    const double rhs = mixed * std::pow(1.0 + std::log2(ap_w), 1.0 / p);
    rep.constants["mixed"] = mixed;
    rep.constants["ap_omega"] = ap_w;
    rep.checks.push_back(detail::make_check("||M|| <= budget * mixed (1+log2 Ap)^{1/p}", est.value,
                                            opts.c_budget * rhs, true, opts.tol));
  }

  // Doob's inequality with its clean constant p' on sampled f
  const double pc = p / (p - 1.0);
  std::vector<VecD> samples;
  detail::append_indicator_pool(sp, samples);
  samples.push_back(est.witness_f);
  detail::append_random_pool(sp, samples, opts.seed + 1, opts.trials);
  {
    Rng rng(opts.seed + 2);
    for (int t = 0; t < opts.trials / 4; ++t) {
      VecD f(sp.atom_count());
      for (Index x = 0; x < f.size(); ++x) f[x] = rng.normal();  // signed inputs too
      samples.push_back(std::move(f));
    }
  }
  const VecD ones = VecD::Constant(sp.atom_count(), 1.0);
  double doob_worst = 0.0;
  bool doob_ok = true;
  for (const VecD& f : samples) {
    const double den = lp_norm(sp, f, p, ones);
    if (!(den > 0.0)) continue;
    const double lhs = lp_norm(sp, doob_maximal(sp, f), p, ones);
    if (!le_tol(lhs, pc * den, opts.tol)) doob_ok = false;
    doob_worst = std::max(doob_worst, detail::safe_ratio(lhs, pc * den));
  }
  CheckLine doob;
  doob.name = "||Mf||_p <= p' ||f||_p (all sampled f)";
  doob.lhs = doob_worst;
  doob.rhs = 1.0;
  doob.ratio = doob_worst;
  doob.hard = true;
  doob.pass = doob_ok;
  rep.checks.push_back(doob);
  rep.constants["doob_max_ratio"] = doob_worst;
  return rep;
}

}  // namespace fms
