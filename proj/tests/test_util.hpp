#pragma once

#include <initializer_list>

#include "fms/space.hpp"

namespace fms::testing {

/// Two atoms a, b of mass 1/2; levels {ab} and discrete.
template <typename S>
FilteredSpace<S> make_s2() {
  Vec<S> mu(2);
  mu << from_double<S>(0.5), from_double<S>(0.5);
  return FilteredSpace<S>({"a", "b"}, mu, {{{0, 1}}, {{0}, {1}}});
}

/// Four atoms of mass 1/4; dyadic levels {abcd}, {ab|cd}, discrete.
template <typename S>
FilteredSpace<S> make_s4() {
  Vec<S> mu(4);
  mu << from_double<S>(0.25), from_double<S>(0.25), from_double<S>(0.25), from_double<S>(0.25);
  return FilteredSpace<S>({"a", "b", "c", "d"}, mu, {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
}

template <typename S>
Vec<S> vec(std::initializer_list<double> xs) {
  Vec<S> out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = from_double<S>(x);
  return out;
}

}  // namespace fms::testing
