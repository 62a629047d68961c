#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mcir/box.hpp"
#include "mcir/config.hpp"
#include "mcir/local_opt.hpp"
#include "mcir/objective.hpp"

namespace mcir {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// One node of the search tree, represented by its best sample.
struct TreeNode {
  NodeId id = kNoNode;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;

  std::vector<double> x;  // best sample; empty for the root before the first backup
  double y = std::numeric_limits<double>::infinity();
  /// Stored for the root, learned nodes and expanded nodes. An unexpanded
  /// partition child leaves it empty; SearchTree::box_of rebuilds it from the
  /// parent box and `piece`.
  BoxDomain box;
  std::uint32_t piece = 0;  // index in partition(parent box, num_children)
  double lb = 0.0;          // clamped interval lower bound
  double log_volume = 0.0;  // of the box the current lb comes from
  std::uint64_t visits = 0;
  bool learned = false;

  bool is_leaf() const { return children.empty(); }
};

struct UctWeights {
  double c_lb = 50.0;
  double c_v = 0.5;
  double c_x = 0.5;
};

/// Selection score of a child:
/// -y - c_lb * lb - c_v * V + c_x * sqrt(log(N_parent) / N_child).
/// y is clamped to +-1e12 so a child without a defined sample stays finite.
/// Visit counts below 1 are treated as 1.
double uct_value(const TreeNode& child, double parent_visits, const UctWeights& w);

/// Classical bandit score R/N + C * sqrt(2 ln(N_parent) / N).
double classical_uct(double reward, double visits, double parent_visits, double c);

struct LearnStats {
  std::uint64_t invocations = 0;
  std::uint64_t nodes_created = 0;
  /// All sampled gradients were non-finite, so no node was made.
  std::uint64_t skipped = 0;
  /// Invocations in which no dimension had positive mean curvature.
  std::uint64_t gradient_only = 0;
  std::uint64_t newton_dims = 0;
  std::uint64_t gradient_dims = 0;
};

/// Newton step where the mean curvature is positive, otherwise a gradient
/// step of length at most one box width. The result is clamped into `omega`.
std::vector<double> learned_point(std::span<const double> start, std::span<const double> mean_gradient,
                                  std::span<const double> mean_hessian,
                                  const BoxDomain& start_box, const BoxDomain& omega,
                                  LearnStats* stats = nullptr);

/// The search tree and the four per-step procedures that grow it.
///
/// Node ids index a flat store; ids of pruned subtrees are recycled.
class SearchTree {
 public:
  /// `config` must be valid; `f` must outlive the tree.
  SearchTree(Objective& f, BoxDomain omega, const SearchConfig& config);

  NodeId root_id() const { return 0; }
  const TreeNode& root() const { return nodes_[0]; }
  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  const BoxDomain& domain() const { return omega_; }
  std::size_t dims() const { return omega_.dims(); }
  std::size_t num_children() const { return num_children_; }
  std::size_t live_nodes() const { return nodes_.size() - free_.size(); }
  const LearnStats& learn_stats() const { return learn_; }
  UctWeights weights() const { return {config_.c_lb, config_.c_v, config_.c_x}; }

  /// Descends by highest uct_value (ties: lowest child index), counting a
  /// visit on every node of the path, and returns the first leaf.
  NodeId select();

  /// Partitions the leaf's box into num_children pieces, draws and locally
  /// optimizes one sample per piece and attaches the pieces as children.
  /// A piece that contains the leaf's own best sample keeps it if better.
  std::vector<NodeId> expand(NodeId leaf, Rng& rng);

  /// Builds a node from averaged curvature of `children` and averaged
  /// gradients near the best child, and attaches it to the root.
  std::optional<NodeId> learn(std::span<const NodeId> children, Rng& rng);

  /// Propagates (y, x) by minimum and (lb, V) from the child of lowest lb,
  /// from `node` up to the root.
  void backup(NodeId node);

  /// Removes worst-scoring learned root children (score y + c_lb * lb) while
  /// there are more than root_child_cap of them. The root child holding the
  /// best y is never removed. Returns the number removed.
  std::size_t prune_root();

  /// Recomputes the root's propagated values from its children.
  void refresh_root();

  /// Attaches a hand-made node; for tests and tools that seed the tree.
  NodeId attach(NodeId parent, TreeNode node);

  /// The node's box, rebuilt from its parent when not stored.
  BoxDomain box_of(NodeId id) const;

  /// Calls visit(node) for every node reachable from the root.
  template <class Visit>
  void for_each_node(Visit&& visit) const {
    std::vector<NodeId> stack{root_id()};
    while (!stack.empty()) {
      const TreeNode& n = nodes_[stack.back()];
      stack.pop_back();
      visit(n);
      for (NodeId c : n.children) stack.push_back(c);
    }
  }

 private:
  NodeId allocate();
  void release_subtree(NodeId id);
  void update_from_children(TreeNode& node);

  Objective& f_;
  BoxDomain omega_;
  SearchConfig config_;
  std::size_t num_children_;
  std::size_t grad_samples_;
  LocalOptOptions local_opt_;
  std::vector<TreeNode> nodes_;
  std::vector<NodeId> free_;
  LearnStats learn_;
};

}  // namespace mcir
