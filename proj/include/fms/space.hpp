#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fms/scalar.hpp"

namespace fms {

/// A partition of the finest atoms: one entry per block, each block a list of
/// finest-atom indices.
using Partition = std::vector<std::vector<Index>>;

/// How quantifiers over measurable sets are enumerated: single atoms of a
/// level, or every nonempty union of them.
enum class SetMode { atoms, exhaustive };

inline const char* to_string(SetMode m) { return m == SetMode::atoms ? "atoms" : "exhaustive"; }

/// A finite tower of refining partitions carrying a strictly positive measure.
/// Level 0 is the coarsest partition, level L the discrete one. Immutable
/// after construction; all operations on it are pure functions.
template <typename S>
class FilteredSpace {
 public:
  FilteredSpace(std::vector<std::string> atom_names, Vec<S> mu, std::vector<Partition> levels)
      : names_(std::move(atom_names)), mu_(std::move(mu)) {
    const Index n = mu_.size();
    if (n == 0) throw std::invalid_argument("space: needs at least one atom");
    if (!names_.empty() && static_cast<Index>(names_.size()) != n)
      throw std::invalid_argument("space: atom name count does not match mu");
    if (names_.empty())
      for (Index x = 0; x < n; ++x) names_.push_back("a" + std::to_string(x));
    for (Index x = 0; x < n; ++x)
      if (!(mu_[x] > S(0)))
        throw std::invalid_argument("space: mu must be strictly positive (atom " + names_[static_cast<std::size_t>(x)] + ")");
    if (levels.empty()) throw std::invalid_argument("space: needs at least one level");

    levels_.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      Level lvl;
      lvl.atom_of.assign(static_cast<std::size_t>(n), Index(-1));
      lvl.members = std::move(levels[i]);
      for (std::size_t a = 0; a < lvl.members.size(); ++a) {
        if (lvl.members[a].empty())
          throw std::invalid_argument("space: empty block in level " + std::to_string(i));
        S mass(0);
        for (Index x : lvl.members[a]) {
          if (x < 0 || x >= n)
            throw std::invalid_argument("space: atom index out of range in level " + std::to_string(i));
          if (lvl.atom_of[static_cast<std::size_t>(x)] != Index(-1))
            throw std::invalid_argument("space: level " + std::to_string(i) + " assigns atom " +
                                        names_[static_cast<std::size_t>(x)] + " twice");
          lvl.atom_of[static_cast<std::size_t>(x)] = static_cast<Index>(a);
          mass += mu_[x];
        }
        std::sort(lvl.members[a].begin(), lvl.members[a].end());
        lvl.mass.push_back(mass);
      }
      for (Index x = 0; x < n; ++x)
        if (lvl.atom_of[static_cast<std::size_t>(x)] == Index(-1))
          throw std::invalid_argument("space: level " + std::to_string(i) + " does not cover atom " +
                                      names_[static_cast<std::size_t>(x)]);
      // refinement: each block sits inside exactly one block of the previous level
      if (i > 0) {
        const Level& coarse = levels_.back();
        for (const auto& block : lvl.members) {
          const Index parent = coarse.atom_of[static_cast<std::size_t>(block.front())];
          for (Index x : block)
            if (coarse.atom_of[static_cast<std::size_t>(x)] != parent)
              throw std::invalid_argument("space: level " + std::to_string(i) +
                                          " does not refine level " + std::to_string(i - 1));
        }
      }
      levels_.push_back(std::move(lvl));
    }
    if (static_cast<Index>(levels_.back().members.size()) != n)
      throw std::invalid_argument("space: last level must be the discrete partition");
  }

  Index atom_count() const { return mu_.size(); }
  int last_level() const { return static_cast<int>(levels_.size()) - 1; }
  int level_count() const { return static_cast<int>(levels_.size()); }

  const Vec<S>& mu() const { return mu_; }
  S total_mass() const { return mu_.sum(); }
  const std::string& atom_name(Index x) const { return names_[static_cast<std::size_t>(x)]; }
  const std::vector<std::string>& atom_names() const { return names_; }

  void check_level(int i) const {
    if (i < 0 || i > last_level())
      throw std::invalid_argument("level " + std::to_string(i) + " out of range [0, " +
                                  std::to_string(last_level()) + "]");
  }

  Index level_atom_count(int i) const {
    check_level(i);
    return static_cast<Index>(levels_[static_cast<std::size_t>(i)].members.size());
  }
  /// Finest atom -> id of the level-i atom containing it.
  Index level_atom_of(int i, Index x) const {
    return levels_[static_cast<std::size_t>(i)].atom_of[static_cast<std::size_t>(x)];
  }
  const std::vector<Index>& members(int i, Index a) const {
    return levels_[static_cast<std::size_t>(i)].members[static_cast<std::size_t>(a)];
  }
  const S& atom_mass(int i, Index a) const {
    return levels_[static_cast<std::size_t>(i)].mass[static_cast<std::size_t>(a)];
  }
  const Partition& partition(int i) const { return levels_[static_cast<std::size_t>(i)].members; }

  /// Lossless over double -> Rational; lossy the other way.
  template <typename T>
  FilteredSpace<T> cast() const {
    Vec<T> m(mu_.size());
    for (Index x = 0; x < mu_.size(); ++x) m[x] = from_double<T>(to_double(mu_[x]));
    std::vector<Partition> lv;
    lv.reserve(levels_.size());
    for (const auto& l : levels_) lv.push_back(l.members);
    return FilteredSpace<T>(names_, std::move(m), std::move(lv));
  }

 private:
  struct Level {
    std::vector<Index> atom_of;
    std::vector<std::vector<Index>> members;
    std::vector<S> mass;
  };
  std::vector<std::string> names_;
  Vec<S> mu_;
  std::vector<Level> levels_;
};

/// A union of atoms of one level; measurable at that level by construction.
struct MeasurableSet {
  int level = 0;
  std::vector<Index> atoms;  // sorted level atom ids

  void normalize() {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  }
  bool operator==(const MeasurableSet&) const = default;
  /// Lexicographic (level, atoms) order; used to break ties between witnesses.
  bool operator<(const MeasurableSet& o) const {
    if (level != o.level) return level < o.level;
    return atoms < o.atoms;
  }
};

template <typename S>
void check_set(const FilteredSpace<S>& sp, const MeasurableSet& e) {
  sp.check_level(e.level);
  if (e.atoms.empty()) throw std::invalid_argument("measurable set: empty");
  for (Index a : e.atoms)
    if (a < 0 || a >= sp.level_atom_count(e.level))
      throw std::invalid_argument("measurable set: atom id out of range at level " +
                                  std::to_string(e.level));
}

template <typename S>
std::vector<Index> finest_of(const FilteredSpace<S>& sp, const MeasurableSet& e) {
  std::vector<Index> xs;
  for (Index a : e.atoms) {
    const auto& m = sp.members(e.level, a);
    xs.insert(xs.end(), m.begin(), m.end());
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

/// 0/1 function of the set over the finest atoms.
template <typename S>
Vec<S> indicator(const FilteredSpace<S>& sp, const MeasurableSet& e) {
  Vec<S> chi = Vec<S>::Constant(sp.atom_count(), S(0));
  for (Index a : e.atoms)
    for (Index x : sp.members(e.level, a)) chi[x] = S(1);
  return chi;
}

template <typename S>
MeasurableSet whole_space(const FilteredSpace<S>& sp, int level = 0) {
  MeasurableSet e{level, {}};
  e.atoms.resize(static_cast<std::size_t>(sp.level_atom_count(level)));
  std::iota(e.atoms.begin(), e.atoms.end(), Index(0));
  return e;
}

/// A function constant on the atoms of one level (conditional expectations
/// live here).
template <typename S>
struct LevelFunction {
  int level = 0;
  Vec<S> values;  // one entry per level atom
};

template <typename S>
Vec<S> expand(const FilteredSpace<S>& sp, const LevelFunction<S>& f) {
  Vec<S> out(sp.atom_count());
  for (Index x = 0; x < sp.atom_count(); ++x) out[x] = f.values[sp.level_atom_of(f.level, x)];
  return out;
}

}  // namespace fms
