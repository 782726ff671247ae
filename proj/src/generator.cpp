#include "fms/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fms {

namespace {

double draw_weight(const WeightLaw& law, Rng& rng, Index position, Index n) {
  switch (law.kind) {
    case WeightLaw::Kind::lognormal:
      return std::exp(law.a + law.b * rng.normal());
    case WeightLaw::Kind::power: {
      // deterministic power profile over atom positions, the discrete stand-in
      // for |x|^a on the unit interval
      const double t = (static_cast<double>(position) + 1.0) / static_cast<double>(n);
      return std::pow(t, law.a);
    }
    case WeightLaw::Kind::two_point:
      return rng.uniform() < 0.5 ? law.a : law.b;
  }
  throw std::logic_error("unreachable weight law");
}

Eigen::ArrayXd draw_weights(const WeightLaw& law, Rng& rng, Index n) {
  Eigen::ArrayXd w(n);
  for (Index x = 0; x < n; ++x) {
    w[x] = draw_weight(law, rng, x, n);
    if (!(w[x] > 0.0)) throw std::invalid_argument("generator: weight law produced a nonpositive value");
  }
  return w;
}

std::vector<Partition> dyadic_partitions(int depth, int branching, Index n) {
  std::vector<Partition> levels;
  for (int i = 0; i <= depth; ++i) {
    Index blocks = 1;
    for (int d = 0; d < i; ++d) blocks *= branching;
    const Index width = n / blocks;
    Partition part;
    for (Index b = 0; b < blocks; ++b) {
      std::vector<Index> block;
      for (Index x = b * width; x < (b + 1) * width; ++x) block.push_back(x);
      part.push_back(std::move(block));
    }
    levels.push_back(std::move(part));
  }
  return levels;
}

std::vector<Partition> random_tree_partitions(int depth, int branching, Rng& rng, Index& n_out) {
  // grow the tree top-down; a node keeps a contiguous range of leaf slots
  struct Node {
    Index begin, end;
  };
  std::vector<std::vector<Index>> split_counts(static_cast<std::size_t>(depth));
  std::vector<std::vector<Node>> rows(static_cast<std::size_t>(depth) + 1);

  // first decide the split arity of every node, then lay out leaves
  std::vector<Index> widths{1};  // nodes per level so far
  std::vector<std::vector<int>> arity(static_cast<std::size_t>(depth));
  Index nodes = 1;
  for (int i = 0; i < depth; ++i) {
    arity[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(nodes));
    Index next = 0;
    for (Index a = 0; a < nodes; ++a) {
      const int c = rng.uniform_int(1, branching);
      arity[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = c;
      next += c;
    }
    nodes = next;
  }
  const Index n = nodes;
  n_out = n;

  // leaves in order; propagate ranges back up
  rows[static_cast<std::size_t>(depth)].resize(static_cast<std::size_t>(n));
  for (Index x = 0; x < n; ++x) rows[static_cast<std::size_t>(depth)][static_cast<std::size_t>(x)] = {x, x + 1};
  for (int i = depth - 1; i >= 0; --i) {
    const auto& child_row = rows[static_cast<std::size_t>(i) + 1];
    auto& row = rows[static_cast<std::size_t>(i)];
    row.resize(arity[static_cast<std::size_t>(i)].size());
    Index c = 0;
    for (std::size_t a = 0; a < row.size(); ++a) {
      const Index first = c;
      c += arity[static_cast<std::size_t>(i)][a];
      row[a] = {child_row[static_cast<std::size_t>(first)].begin,
                child_row[static_cast<std::size_t>(c - 1)].end};
    }
  }

  std::vector<Partition> levels;
  for (int i = 0; i <= depth; ++i) {
    Partition part;
    for (const Node& nd : rows[static_cast<std::size_t>(i)]) {
      std::vector<Index> block;
      for (Index x = nd.begin; x < nd.end; ++x) block.push_back(x);
      part.push_back(std::move(block));
    }
    levels.push_back(std::move(part));
  }
  return levels;
}

}  // namespace

WeightLaw parse_weight_law(const std::string& name, double a, double b) {
  WeightLaw law;
  law.a = a;
  law.b = b;
  if (name == "lognormal") law.kind = WeightLaw::Kind::lognormal;
  else if (name == "power") law.kind = WeightLaw::Kind::power;
  else if (name == "two-point") law.kind = WeightLaw::Kind::two_point;
  else throw std::invalid_argument("unknown weight law \"" + name + "\" (lognormal|power|two-point)");
  return law;
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.depth < 1 || spec.branching < 2)
    throw std::invalid_argument("generator: depth >= 1 and branching >= 2 required");
  double cap = std::pow(static_cast<double>(spec.branching), spec.depth);
  if (cap > 4096.0)
    throw std::invalid_argument("generator: branching^depth exceeds the 4096-atom cap");

  Rng rng(spec.seed);
  Index n = 0;
  std::vector<Partition> levels;
  Eigen::ArrayXd mu;
  if (spec.kind == GeneratorSpec::Kind::dyadic) {
    n = static_cast<Index>(cap);
    levels = dyadic_partitions(spec.depth, spec.branching, n);
    mu = Eigen::ArrayXd::Constant(n, 1.0 / static_cast<double>(n));
  } else {
    levels = random_tree_partitions(spec.depth, spec.branching, rng, n);
    mu.resize(n);
    for (Index x = 0; x < n; ++x) mu[x] = std::exp(0.7 * rng.normal());
    mu /= mu.sum();
  }

  FilteredSpace<double> space({}, mu, std::move(levels));

  Instance inst{std::move(space), {}, {}, AlphaSequence<double>{}, 2.0, 2.0};
  inst.weights.emplace("omega", draw_weights(spec.law, rng, n));
  inst.weights.emplace("v", draw_weights(spec.law, rng, n));
  Eigen::ArrayXd f(n), h(n);
  for (Index x = 0; x < n; ++x) f[x] = std::exp(rng.normal());
  for (Index x = 0; x < n; ++x) h[x] = std::exp(rng.normal());
  inst.functions.emplace("f", std::move(f));
  inst.functions.emplace("h", std::move(h));

  AlphaSequence<double> alpha;
  for (int i = 0; i <= inst.space.last_level(); ++i) {
    Eigen::ArrayXd lvl(inst.space.level_atom_count(i));
    for (Index a = 0; a < lvl.size(); ++a) {
      const double gate = rng.uniform();
      const double value = std::exp(0.5 * rng.normal());
      lvl[a] = gate < 0.7 ? value : 0.0;  // some levels drop out entirely
    }
    alpha.per_level.push_back(std::move(lvl));
  }
  alpha.validate(inst.space);
  inst.alpha = std::move(alpha);
  return inst;
}

}  // namespace fms
