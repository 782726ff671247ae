#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fms/principal.hpp"
#include "fms/suites.hpp"
#include "test_util.hpp"

using namespace fms;
using fms::testing::make_s2;
using fms::testing::make_s4;
using fms::testing::vec;

namespace {

template <typename S>
bool same_tree(const PrincipalSet<S>& a, const PrincipalSet<S>& b) {
  if (a.k1 != b.k1 || a.k2 != b.k2 || a.set.atoms != b.set.atoms ||
      a.exceptional != b.exceptional || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_tree(a.children[i], b.children[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("root-only family on S2") {
  const auto s2 = make_s2<Rational>();
  const auto h = vec<Rational>({1, 3});
  const auto ones = vec<Rational>({1, 1});
  const auto fam = build_principal_family(s2, h, ones, 0, 1, whole_space(s2, 0));
  CHECK(fam.root.k1 == 0);
  CHECK(fam.root.k2 == 1);
  CHECK(fam.root.children.empty());
  CHECK(fam.root.exceptional == std::vector<Index>{0, 1});
  const auto props = check_properties(s2, fam);
  CHECK(props.all());
}

TEST_CASE("S4 family has the expected child") {
  const auto s4 = make_s4<Rational>();
  const auto h = vec<Rational>({1, 1, 1, 13});
  const auto ones = vec<Rational>({1, 1, 1, 1});
  const auto fam = build_principal_family(s4, h, ones, 0, 2, whole_space(s4, 0));

  CHECK(fam.root.k1 == 0);
  CHECK(fam.root.k2 == 2);
  CHECK(fam.root.set.atoms == std::vector<Index>{0});
  CHECK(fam.root.exceptional == std::vector<Index>{0, 1, 2});
  REQUIRE(fam.root.children.size() == 1);
  const auto& child = fam.root.children.front();
  CHECK(child.k1 == 2);
  CHECK(child.k2 == 4);
  CHECK(finest_of(s4, child.set) == std::vector<Index>{3});
  CHECK(child.exceptional == std::vector<Index>{3});
  CHECK(child.children.empty());

  const auto props = check_properties(s4, fam);
  CHECK(props.all());

  const auto rep = maximal_representation_check(s4, fam);
  CHECK(rep.localization);
  CHECK(rep.partition);
  CHECK(rep.bound);
  // on the child's exceptional part the tailed maximal is 13 against 4*2^3
  CHECK(tailed_maximal(s4, h, ones, 0)[3] == Rational(13));
  CHECK(rep.max_ratio <= Rational(1));

  const auto car = carleson_check(s4, fam, Rational(2));
  CHECK(car.lhs == Rational(20));
  CHECK(car.rhs == Rational(344));
  CHECK(car.pass);
}

TEST_CASE("constant source yields a single exceptional root") {
  const auto s4 = make_s4<Rational>();
  const auto h = vec<Rational>({3, 3, 3, 3});  // 2 < 3 <= 4 picks k = 2
  const auto ones = vec<Rational>({1, 1, 1, 1});
  const auto fam = build_principal_family(s4, h, ones, 0, 2, whole_space(s4, 0));
  CHECK(fam.root.children.empty());
  CHECK(fam.root.exceptional.size() == 4);
  CHECK(check_properties(s4, fam).all());
  CHECK(carleson_check(s4, fam, Rational(2)).pass);
}

TEST_CASE("empty root shell is an error") {
  const auto s2 = make_s2<Rational>();
  const auto h = vec<Rational>({1, 3});
  const auto ones = vec<Rational>({1, 1});
  CHECK_THROWS_WITH_AS(build_principal_family(s2, h, ones, 0, 5, whole_space(s2, 0)),
                       doctest::Contains("empty principal root"), std::invalid_argument);
  CHECK_THROWS_AS(build_principal_family(s2, h, ones, 0, 1, whole_space(s2, 1)),
                  std::invalid_argument);  // Omega0 at the wrong level
  CHECK_THROWS_AS(build_principal_family(s2, vec<Rational>({-1, 1}), ones, 0, 1,
                                         whole_space(s2, 0)),
                  std::invalid_argument);  // h must be nonnegative
}

TEST_CASE("principal_cover shells") {
  const auto s4 = make_s4<Rational>();
  const auto ones = vec<Rational>({1, 1, 1, 1});

  // constant conditional expectation: exactly one family
  const auto one_fam = principal_cover(s4, vec<Rational>({3, 3, 3, 3}), ones, 0);
  CHECK(one_fam.size() == 1);

  const auto h = vec<Rational>({1, 1, 1, 13});
  const auto fams = principal_cover(s4, h, ones, 1);
  REQUIRE(fams.size() == 2);
  CHECK(fams[0].origin_scale == 0);  // E_1 h = 1 on {a,b}
  CHECK(fams[1].origin_scale == 3);  // E_1 h = 7 on {c,d}

  // the roots partition {E^w_i(h) > 0}
  std::vector<int> covered(4, 0);
  for (const auto& fam : fams)
    for (Index x : finest_of(s4, fam.root.set)) covered[static_cast<std::size_t>(x)] += 1;
  CHECK(covered == std::vector<int>{1, 1, 1, 1});

  CHECK(principal_cover(s4, vec<Rational>({0, 0, 0, 0}), ones, 0).empty());
}

TEST_CASE("random corpus: properties, representation, carleson, termination") {
  int multi_generation = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = default_corpus_instance(42, trial);
    const auto sp = inst.space.cast<Rational>();
    Vec<Rational> h(sp.atom_count()), w(sp.atom_count());
    for (Index x = 0; x < sp.atom_count(); ++x) {
      h[x] = from_double<Rational>(inst.function("h")[x]);
      w[x] = from_double<Rational>(inst.weight("omega")[x]);
    }
    const Vec<Rational> ones = Vec<Rational>::Constant(sp.atom_count(), Rational(1));

    for (const Vec<Rational>* base : std::initializer_list<const Vec<Rational>*>{&ones, &w}) {
      const FamilyChecks checks = run_family_checks(sp, h, *base, Rational(2));
      CHECK(checks.properties_ok);
      CHECK(checks.representation_ok);
      CHECK(checks.carleson_ok);
      CHECK(checks.families > 0);
      CHECK(checks.nodes <=
            static_cast<int>(sp.atom_count()) * (sp.last_level() + 1) * checks.families);
      if (checks.nodes > checks.families) ++multi_generation;

      // tree depth and child index monotonicity
      for (int i = 0; i <= sp.last_level(); ++i) {
        for (const auto& fam : principal_cover(sp, h, *base, i)) {
          fam.root.walk([&](const PrincipalSet<Rational>& node) {
            CHECK(node.k1 <= sp.last_level());
            for (const auto& c : node.children) {
              CHECK(c.k1 > node.k1);
              CHECK(c.k2 >= node.k2 + 2);
            }
          });
        }
      }
    }
  }
  CHECK(multi_generation > 0);  // the corpus must reach second generations
}

TEST_CASE("construction is deterministic") {
  const Instance inst = default_corpus_instance(77, 2);
  const auto sp = inst.space.cast<Rational>();
  Vec<Rational> h(sp.atom_count()), w(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) {
    h[x] = from_double<Rational>(inst.function("h")[x]);
    w[x] = from_double<Rational>(inst.weight("omega")[x]);
  }
  const auto a = principal_cover(sp, h, w, 0);
  const auto b = principal_cover(sp, h, w, 0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_tree(a[i].root, b[i].root));
}
