#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fms/conditional.hpp"
#include "fms/generator.hpp"
#include "fms/space.hpp"
#include "test_util.hpp"

using namespace fms;
using fms::testing::make_s2;
using fms::testing::make_s4;
using fms::testing::vec;

namespace {

/// Independent evaluation of the defining quotient, plain loops only.
template <typename S>
std::vector<S> oracle_cond_exp(const FilteredSpace<S>& sp, const Vec<S>& f, int i) {
  std::vector<S> out;
  for (Index a = 0; a < sp.level_atom_count(i); ++a) {
    S num(0), den(0);
    for (Index x : sp.members(i, a)) {
      num += f[x] * sp.mu()[x];
      den += sp.mu()[x];
    }
    out.push_back(num / den);
  }
  return out;
}

}  // namespace

TEST_CASE("space construction validates its invariants") {
  Vec<double> mu(2);
  mu << 0.5, 0.5;
  CHECK_THROWS_WITH_AS(FilteredSpace<double>({}, vec<double>({0.0, 1.0}), {{{0, 1}}, {{0}, {1}}}),
                       doctest::Contains("strictly positive"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(FilteredSpace<double>({}, mu, {{{0, 1}}}),
                       doctest::Contains("discrete"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(FilteredSpace<double>({}, mu, {{{0}}, {{0}, {1}}}),
                       doctest::Contains("cover"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(FilteredSpace<double>({}, mu, {{{0}, {1}, {0}}, {{0}, {1}}}),
                       doctest::Contains("twice"), std::invalid_argument);
  // level 1 must refine level 0
  Vec<double> mu4(4);
  mu4 << 0.25, 0.25, 0.25, 0.25;
  CHECK_THROWS_WITH_AS(
      FilteredSpace<double>({}, mu4, {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0}, {1}, {2}, {3}}}),
      doctest::Contains("refine"), std::invalid_argument);
  // coarser masses sum the finest ones
  const auto s4 = make_s4<Rational>();
  CHECK(s4.atom_mass(1, 0) == Rational(1, 2));
  CHECK(s4.atom_mass(0, 0) == Rational(1));
  CHECK(s4.total_mass() == Rational(1));
}

TEST_CASE("cond_exp matches the defining quotient") {
  const auto s2 = make_s2<Rational>();
  const auto f = vec<Rational>({1, 3});

  const auto e0 = cond_exp(s2, f, 0);
  CHECK(e0.values[0] == Rational(2));

  // at the last level the conditional expectation is the function itself
  const auto eL = cond_exp_expanded(s2, f, 1);
  CHECK(eL[0] == f[0]);
  CHECK(eL[1] == f[1]);

  const auto s4 = make_s4<Rational>();
  const auto h = vec<Rational>({1, 1, 1, 13});
  const auto e1 = cond_exp(s4, h, 1);
  const auto expected = oracle_cond_exp(s4, h, 1);
  CHECK(e1.values[0] == expected[0]);
  CHECK(e1.values[1] == expected[1]);
  CHECK(e1.values[0] == Rational(1));
  CHECK(e1.values[1] == Rational(7));

  CHECK_THROWS_AS(cond_exp(s4, h, 3), std::invalid_argument);
  CHECK_THROWS_AS(cond_exp(s4, h, -1), std::invalid_argument);
}

TEST_CASE("weighted_cond_exp") {
  const auto s2 = make_s2<Rational>();
  const auto f = vec<Rational>({1, 3});
  const auto ones = vec<Rational>({1, 1});
  const auto w = vec<Rational>({3, 1});

  CHECK(weighted_cond_exp(s2, f, ones, 0).values[0] == Rational(2));
  CHECK(weighted_cond_exp(s2, f, w, 0).values[0] == Rational(3, 2));
  const auto eL = weighted_cond_exp_expanded(s2, f, w, 1);
  CHECK(eL[0] == f[0]);
  CHECK(eL[1] == f[1]);
}

TEST_CASE("integrate") {
  const auto s2 = make_s2<Rational>();
  const auto ones = vec<Rational>({1, 1});
  CHECK(integrate(s2, ones) == Rational(1));
  const auto f = vec<Rational>({1, 3});
  const auto w = vec<Rational>({2, 5});
  CHECK(integrate(s2, f, MeasurableSet{1, {0}}) == Rational(1, 2));
  CHECK(integrate(s2, vec<Rational>({0, 0}), MeasurableSet{1, {0, 1}}) == Rational(0));
  CHECK(integrate(s2, f, MeasurableSet{0, {0}}, w) == integrate(s2, f, w));
}

TEST_CASE("lp_norm") {
  const auto s2 = make_s2<double>();
  const Vec<double> f = vec<double>({1, 3});
  const Vec<double> ones = vec<double>({1, 1});
  CHECK(lp_norm(s2, vec<double>({5, 5}), 3.7, ones) == doctest::Approx(5.0));
  CHECK(lp_norm(s2, f, 2.0, ones) == doctest::Approx(std::sqrt(5.0)));
  CHECK(lp_norm(s2, f, 1.0, ones) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lp_norm(s2, f, 0.5, ones), std::invalid_argument);
}

TEST_CASE("enumerate_sets") {
  const auto s2 = make_s2<double>();
  CHECK(enumerate_sets(s2, 1, SetMode::atoms).size() == 2);
  CHECK(enumerate_sets(s2, 1, SetMode::exhaustive).size() == 3);
  const auto s4 = make_s4<double>();
  CHECK(enumerate_sets(s4, 1, SetMode::exhaustive).size() == 3);
  CHECK_THROWS_WITH_AS(enumerate_sets(s4, 2, SetMode::exhaustive, 3),
                       doctest::Contains("4 atoms"), std::invalid_argument);
}

TEST_CASE("tower, self-adjointness, positivity, averaging on random spaces") {
  for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
    GeneratorSpec gs;
    gs.kind = GeneratorSpec::Kind::random_tree;
    gs.depth = 4;
    gs.branching = 3;
    gs.seed = seed;
    const Instance inst = generate(gs);
    const auto sp = inst.space.cast<Rational>();
    Vec<Rational> f(sp.atom_count()), g(sp.atom_count()), w(sp.atom_count());
    Rng rng(seed + 100);
    for (Index x = 0; x < sp.atom_count(); ++x) {
      f[x] = from_double<Rational>(rng.normal());
      g[x] = from_double<Rational>(rng.normal());
      w[x] = from_double<Rational>(std::exp(rng.normal()));
    }

    for (int i = 0; i <= sp.last_level(); ++i) {
      // tower property, exact
      for (int j = i; j <= sp.last_level(); ++j) {
        const auto inner = cond_exp_expanded(sp, f, j);
        const auto outer = cond_exp(sp, inner, i);
        const auto direct = cond_exp(sp, f, i);
        for (Index a = 0; a < sp.level_atom_count(i); ++a)
          CHECK(outer.values[a] == direct.values[a]);
      }
      // self-adjointness, exact
      const auto ef = cond_exp_expanded(sp, f, i);
      const auto eg = cond_exp_expanded(sp, g, i);
      CHECK(integrate(sp, Vec<Rational>(ef * g)) == integrate(sp, Vec<Rational>(f * eg)));
      // positivity
      Vec<Rational> fp = f.abs();
      const auto efp = cond_exp_expanded(sp, fp, i);
      for (Index x = 0; x < sp.atom_count(); ++x) CHECK(efp[x] >= Rational(0));
      // averaging identity over every single level atom and one union
      for (Index a = 0; a < sp.level_atom_count(i); ++a) {
        const MeasurableSet e{i, {a}};
        CHECK(integrate(sp, ef, e) == integrate(sp, f, e));
      }
      if (sp.level_atom_count(i) >= 2) {
        const MeasurableSet e{i, {0, 1}};
        CHECK(integrate(sp, ef, e) == integrate(sp, f, e));
      }
      // weighted identity: E^w(f) * E(w) == E(fw), atomwise
      const auto ew = cond_exp(sp, w, i);
      const auto ewf = weighted_cond_exp(sp, f, w, i);
      const auto efw = cond_exp(sp, Vec<Rational>(f * w), i);
      for (Index a = 0; a < sp.level_atom_count(i); ++a)
        CHECK(ewf.values[a] * ew.values[a] == efw.values[a]);
    }

    // float mode honors the same identities within 1e-12 relative
    const auto& spd = inst.space;
    Vec<double> fd(spd.atom_count());
    for (Index x = 0; x < spd.atom_count(); ++x) fd[x] = to_double(f[x]);
    for (int i = 0; i < spd.last_level(); ++i) {
      const auto two_step = cond_exp(spd, cond_exp_expanded(spd, fd, i + 1), i);
      const auto direct = cond_exp(spd, fd, i);
      for (Index a = 0; a < spd.level_atom_count(i); ++a)
        CHECK(close_tol(two_step.values[a], direct.values[a], Tolerance{1e-12, 1e-14}));
    }
  }
}
