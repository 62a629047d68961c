#include "mcir/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mcir/bound.hpp"

namespace mcir {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN samples are stored as +inf so that min/argmin stay well defined.
double sanitize(double y) { return std::isnan(y) ? kInf : y; }

}  // namespace

double uct_value(const TreeNode& child, double parent_visits, const UctWeights& w) {
  const double y = std::clamp(child.y, -kBoundClamp, kBoundClamp);
  const double n_child = static_cast<double>(std::max<std::uint64_t>(child.visits, 1));
  const double n_parent = std::max(parent_visits, 1.0);
  return -y - w.c_lb * child.lb - w.c_v * child.log_volume +
         w.c_x * std::sqrt(std::log(n_parent) / n_child);
}

double classical_uct(double reward, double visits, double parent_visits, double c) {
  return reward / visits + c * std::sqrt(2.0 * std::log(parent_visits) / visits);
}

std::vector<double> learned_point(std::span<const double> start, std::span<const double> mean_gradient,
                                  std::span<const double> mean_hessian,
                                  const BoxDomain& start_box, const BoxDomain& omega,
                                  LearnStats* stats) {
  std::vector<double> x(start.begin(), start.end());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double g = mean_gradient[d];
    const double h = mean_hessian[d];
    if (h > 0.0) {
      x[d] = start[d] - g / h;
      if (stats) ++stats->newton_dims;
    } else {
      const double eta = g == 0.0 ? 0.0 : std::min(1.0, start_box.width(d) / std::fabs(g));
      x[d] = start[d] - eta * g;
      if (stats) ++stats->gradient_dims;
    }
    if (!std::isfinite(x[d])) x[d] = start[d];
  }
  omega.clamp(x);
  return x;
}

SearchTree::SearchTree(Objective& f, BoxDomain omega, const SearchConfig& config)
    : f_(f),
      omega_(std::move(omega)),
      config_(config),
      num_children_(config.children_for(omega_.dims())),
      grad_samples_(config.grad_samples_for(omega_.dims())) {
  config_.validate();
  if (f_.dims() != omega_.dims()) throw std::invalid_argument("SearchTree: dimension mismatch");
  local_opt_.min_relative_improvement = config_.local_opt_min_improvement;

  TreeNode root;
  root.id = 0;
  root.box = omega_;
  root.lb = f_.lower_bound(omega_);
  root.log_volume = mcir::log_volume(omega_);
  nodes_.push_back(std::move(root));
}

NodeId SearchTree::allocate() {
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    return id;
  }
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SearchTree::attach(NodeId parent, TreeNode node) {
  const NodeId id = allocate();
  node.id = id;
  node.parent = parent;
  nodes_[id] = std::move(node);
  nodes_[parent].children.push_back(id);
  return id;
}

void SearchTree::release_subtree(NodeId id) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId current = stack.back();
    stack.pop_back();
    for (NodeId c : nodes_[current].children) stack.push_back(c);
    nodes_[current] = TreeNode{};
    free_.push_back(current);
  }
}

BoxDomain SearchTree::box_of(NodeId id) const {
  const TreeNode& n = nodes_[id];
  if (n.box.dims() != 0) return n.box;
  return partition(nodes_[n.parent].box, num_children_)[n.piece];
}

NodeId SearchTree::select() {
  const UctWeights w = weights();
  NodeId current = root_id();
  ++nodes_[current].visits;
  while (!nodes_[current].is_leaf()) {
    const TreeNode& parent = nodes_[current];
    NodeId best = parent.children.front();
    double best_score = -kInf;
    for (NodeId c : parent.children) {
      const double score = uct_value(nodes_[c], static_cast<double>(parent.visits), w);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    current = best;
    ++nodes_[current].visits;
  }
  return current;
}

std::vector<NodeId> SearchTree::expand(NodeId leaf, Rng& rng) {
  if (!nodes_[leaf].is_leaf()) throw std::logic_error("expand: node already has children");
  if (nodes_[leaf].box.dims() == 0) nodes_[leaf].box = box_of(leaf);
  const BoxDomain parent_box = nodes_[leaf].box;
  const std::vector<double> parent_x = nodes_[leaf].x;
  const double parent_y = nodes_[leaf].y;

  std::vector<NodeId> created;
  created.reserve(num_children_);
  std::vector<double> start(dims());
  std::uint32_t index = 0;
  for (const BoxDomain& piece : partition(parent_box, num_children_)) {
    sample_uniform(piece, rng, start);
    LocalOptReport report = local_opt(f_, start, piece, config_.local_opt_budget, local_opt_);

    TreeNode child;
    child.y = sanitize(report.y);
    child.x = std::move(report.x);
    if (!parent_x.empty() && parent_y < child.y && member_of(piece, parent_box, parent_x)) {
      child.x = parent_x;
      child.y = parent_y;
    }
    child.lb = f_.lower_bound(piece);
    child.log_volume = mcir::log_volume(piece);
    child.visits = 1;
    child.piece = index++;
    created.push_back(attach(leaf, std::move(child)));
  }
  return created;
}

std::optional<NodeId> SearchTree::learn(std::span<const NodeId> children, Rng& rng) {
  if (children.empty()) throw std::invalid_argument("learn: no children");
  ++learn_.invocations;
  const std::size_t n = dims();

  // Mean Hessian diagonal over the children's best samples.
  std::vector<double> h(n);
  std::vector<double> h_sum(n, 0.0);
  std::vector<std::size_t> h_count(n, 0);
  for (NodeId c : children) {
    f_.hessian_diagonal(nodes_[c].x, h);
    for (std::size_t d = 0; d < n; ++d) {
      if (std::isfinite(h[d])) {
        h_sum[d] += h[d];
        ++h_count[d];
      }
    }
  }
  std::vector<double> h_mean(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    if (h_count[d] > 0) h_mean[d] = h_sum[d] / static_cast<double>(h_count[d]);
  }

  // Mean gradient over a small cube around the best child's sample.
  NodeId best = children.front();
  for (NodeId c : children) {
    if (nodes_[c].y < nodes_[best].y) best = c;
  }
  const std::vector<double> center = nodes_[best].x;
  const BoxDomain best_box = box_of(best);
  const double delta = config_.delta_fraction * best_box.min_width();
  std::vector<double> widths(n, 2.0 * delta);
  const BoxDomain neighbourhood = omega_.centered_clip(center, widths);

  std::vector<double> g(n);
  std::vector<double> g_sum(n, 0.0);
  std::vector<double> sample(n);
  std::size_t g_count = 0;
  for (std::size_t k = 0; k < grad_samples_; ++k) {
    sample_uniform(neighbourhood, rng, sample);
    f_.gradient(sample, g);
    if (!std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); })) continue;
    for (std::size_t d = 0; d < n; ++d) g_sum[d] += g[d];
    ++g_count;
  }
  if (g_count == 0) {
    ++learn_.skipped;
    return std::nullopt;
  }
  for (double& v : g_sum) v /= static_cast<double>(g_count);

  const std::uint64_t newton_before = learn_.newton_dims;
  const std::vector<double> target = learned_point(center, g_sum, h_mean, best_box, omega_, &learn_);
  if (learn_.newton_dims == newton_before) ++learn_.gradient_only;

  std::vector<double> side(n);
  for (std::size_t d = 0; d < n; ++d) side[d] = best_box.width(d);
  BoxDomain box = omega_.centered_clip(target, side);

  TreeNode node;
  node.lb = f_.lower_bound(box);
  node.log_volume = mcir::log_volume(box);
  LocalOptReport report = local_opt(f_, target, box, config_.local_opt_budget, local_opt_);
  node.y = sanitize(report.y);
  node.x = std::move(report.x);
  node.box = std::move(box);
  node.visits = 1;
  node.learned = true;
  ++learn_.nodes_created;
  return attach(root_id(), std::move(node));
}

void SearchTree::update_from_children(TreeNode& node) {
  if (node.is_leaf()) return;
  const TreeNode* best_y = &nodes_[node.children.front()];
  const TreeNode* best_lb = best_y;
  for (NodeId c : node.children) {
    const TreeNode& child = nodes_[c];
    if (child.y < best_y->y) best_y = &child;
    if (child.lb < best_lb->lb) best_lb = &child;
  }
  node.y = best_y->y;
  node.x = best_y->x;
  node.lb = best_lb->lb;
  node.log_volume = best_lb->log_volume;
}

void SearchTree::backup(NodeId id) {
  while (id != kNoNode) {
    update_from_children(nodes_[id]);
    id = nodes_[id].parent;
  }
}

void SearchTree::refresh_root() { update_from_children(nodes_[root_id()]); }

std::size_t SearchTree::prune_root() {
  TreeNode& root = nodes_[root_id()];
  std::vector<std::size_t> learned;
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    if (nodes_[root.children[i]].learned) learned.push_back(i);
  }
  if (learned.size() <= config_.root_child_cap) return 0;

  std::size_t protected_index = 0;
  for (std::size_t i = 1; i < root.children.size(); ++i) {
    if (nodes_[root.children[i]].y < nodes_[root.children[protected_index]].y) protected_index = i;
  }

  auto score = [&](std::size_t i) {
    const TreeNode& c = nodes_[root.children[i]];
    return c.y + config_.c_lb * c.lb;
  };
  // Worst first; among equal scores the newest goes first.
  std::stable_sort(learned.begin(), learned.end(), [&](std::size_t a, std::size_t b) {
    const double sa = score(a);
    const double sb = score(b);
    if (sa != sb) return sa > sb;
    return a > b;
  });

  std::size_t excess = learned.size() - config_.root_child_cap;
  std::vector<bool> remove(root.children.size(), false);
  for (std::size_t i : learned) {
    if (excess == 0) break;
    if (i == protected_index) continue;
    remove[i] = true;
    --excess;
  }

  std::vector<NodeId> kept;
  std::vector<NodeId> dropped;
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    (remove[i] ? dropped : kept).push_back(root.children[i]);
  }
  root.children = std::move(kept);
  for (NodeId id : dropped) release_subtree(id);
  if (!dropped.empty()) refresh_root();
  return dropped.size();
}

}  // namespace mcir
