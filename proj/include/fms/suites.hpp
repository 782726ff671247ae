#pragma once

#include <string>
#include <vector>

#include "fms/constants.hpp"
#include "fms/generator.hpp"
#include "fms/principal.hpp"

namespace fms {

/// Combined outcome of running the principal-set checks (properties,
/// representation, Carleson embedding) over every family of every origin
/// level of one (h, w) pair.
struct FamilyChecks {
  int families = 0;
  int nodes = 0;
  bool properties_ok = true;
  bool representation_ok = true;
  bool carleson_ok = true;
  double max_rep_ratio = 0.0;       // lhs over 4*2^{k2-1}, max over P0
  double max_carleson_ratio = 0.0;  // lhs over rhs
  std::vector<std::string> failures;
};

template <typename S>
FamilyChecks run_family_checks(const FilteredSpace<S>& sp, const Vec<S>& h, const Vec<S>& w,
                               const S& p, Tolerance tol = {}) {
  FamilyChecks out;
  for (int i = 0; i <= sp.last_level(); ++i) {
    for (const PrincipalFamily<S>& fam : principal_cover(sp, h, w, i)) {
      ++out.families;
      out.nodes += static_cast<int>(fam.root.node_count());

      const PropertiesResult props = check_properties(sp, fam, tol);
      if (!props.all()) {
        out.properties_ok = false;
        out.failures.insert(out.failures.end(), props.failures.begin(), props.failures.end());
      }

      const RepresentationResult<S> rep = maximal_representation_check(sp, fam, tol);
      if (!rep.all()) {
        out.representation_ok = false;
        out.failures.push_back("representation failed at level " + std::to_string(i) + ", scale " +
                               std::to_string(fam.origin_scale));
      }
      out.max_rep_ratio = std::max(out.max_rep_ratio, to_double(rep.max_ratio));

      const CarlesonResult<S> car = carleson_check(sp, fam, p, tol);
      if (!car.pass) {
        out.carleson_ok = false;
        out.failures.push_back("carleson failed at level " + std::to_string(i) + ", scale " +
                               std::to_string(fam.origin_scale));
      }
      if (car.rhs > S(0))
        out.max_carleson_ratio =
            std::max(out.max_carleson_ratio, to_double(car.lhs) / to_double(car.rhs));
    }
  }
  return out;
}

/// Weight-class relations: the duality identity between the A_p constants of
/// omega and its dual, the Jensen comparison against the exponential
/// A-infinity constant, and the measured (not asserted) tailed-to-exponential
/// ratio.
struct Remark28Outcome {
  bool duality_ok = true;
  bool jensen_ok = true;
  double ainf_ratio = 0.0;
  std::vector<std::string> failures;
};

inline Remark28Outcome run_remark28_checks(const FilteredSpace<double>& sp,
                                           const Vec<double>& omega, SetMode mode,
                                           Index cap = kDefaultExhaustiveCap, Tolerance tol = {}) {
  Remark28Outcome out;
  const double ae = ainf_exp(sp, omega);
  for (double p : {1.5, 2.0, 3.0}) {
    const double pc = p / (p - 1.0);
    const Vec<double> sigma = dual_weight(sp, omega, p);
    const double lhs = std::pow(ap_one_weight(sp, sigma, pc), 1.0 / pc);
    const double rhs = std::pow(ap_one_weight(sp, omega, p), 1.0 / p);
    if (!close_tol(lhs, rhs, tol)) {
      out.duality_ok = false;
      out.failures.push_back("duality identity off at p=" + std::to_string(p));
    }
    if (!le_tol(ae, ap_one_weight(sp, omega, p), tol)) {
      out.jensen_ok = false;
      out.failures.push_back("ainf_exp above ap at p=" + std::to_string(p));
    }
  }
  out.ainf_ratio = ainf_star(sp, omega, mode, cap).value / ae;
  return out;
}

/// The default corpus a trial index maps to: dyadic spaces of depth 3-5 with
/// lognormal(0,1) weights, deep enough for multi-generation principal trees
/// and small enough for exhaustive set enumeration.
inline Instance default_corpus_instance(std::uint64_t base_seed, int trial) {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::dyadic;
  spec.depth = 3 + (trial % 3);
  spec.branching = 2;
  spec.law = WeightLaw{WeightLaw::Kind::lognormal, 0.0, 1.0};
  spec.seed = base_seed + static_cast<std::uint64_t>(trial) * 0x9e3779b9ULL;
  return generate(spec);
}

}  // namespace fms
