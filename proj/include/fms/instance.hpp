#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "fms/constants.hpp"
#include "fms/operators.hpp"
#include "fms/space.hpp"

namespace fms {

/// A complete problem instance: the space, named weights and functions, the
/// coefficient sequence, and the exponents. Weights are validated strictly
/// positive at the parse boundary; everything here is immutable in use.
template <typename S>
struct InstanceT {
  FilteredSpace<S> space;
  std::map<std::string, Vec<S>> weights;
  std::map<std::string, Vec<S>> functions;
  AlphaSequence<S> alpha;
  S p = S(2);
  S q = S(2);

  const Vec<S>& weight(const std::string& name) const {
    auto it = weights.find(name);
    if (it == weights.end()) throw std::invalid_argument("instance: missing weight \"" + name + "\"");
    return it->second;
  }
  const Vec<S>& function(const std::string& name) const {
    auto it = functions.find(name);
    if (it == functions.end())
      throw std::invalid_argument("instance: missing function \"" + name + "\"");
    return it->second;
  }
  bool has_weight(const std::string& name) const { return weights.count(name) > 0; }
  bool has_function(const std::string& name) const { return functions.count(name) > 0; }

  /// sigma if present, else omega^{-1/(p-1)}.
  Vec<S> sigma_or_dual() const {
    if (has_weight("sigma")) return weight("sigma");
    return dual_weight(space, weight("omega"), p);
  }

  template <typename T>
  InstanceT<T> cast() const {
    InstanceT<T> out{space.template cast<T>(), {}, {}, alpha.template cast<T>(),
                     from_double<T>(to_double(p)), from_double<T>(to_double(q))};
    auto lift = [](const Vec<S>& v) {
      Vec<T> r(v.size());
      for (Index x = 0; x < v.size(); ++x) r[x] = from_double<T>(to_double(v[x]));
      return r;
    };
    for (const auto& [k, v] : weights) out.weights.emplace(k, lift(v));
    for (const auto& [k, v] : functions) out.functions.emplace(k, lift(v));
    return out;
  }
};

using Instance = InstanceT<double>;
using RationalInstance = InstanceT<Rational>;

template <typename S>
void validate_weight(const FilteredSpace<S>& sp, const Vec<S>& w, const std::string& name) {
  if (w.size() != sp.atom_count())
    throw std::invalid_argument("weight \"" + name + "\": wrong length");
  for (Index x = 0; x < sp.atom_count(); ++x)
    if (!(w[x] > S(0)))
      throw std::invalid_argument("weight \"" + name + "\": must be strictly positive (atom " +
                                  sp.atom_name(x) + ")");
}

}  // namespace fms
