#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hagemu/errors.hpp"

namespace hagemu {

// Node ids are contiguous 1..N. Index into Hag::nodes() with id - 1.
using NodeId = int;

enum class NodeKind { Cyber, Physical };

// Joint security state, one entry per node (index = id - 1), value 0 or 1.
using SecurityVector = std::vector<std::uint8_t>;

// An attack action at a physical node: perturb the node's measured state by
// `magnitude`. The realized reward is scenario-supplied (it depends on the
// resulting physical state); the cost is fixed per action.
struct PhysicalActionSpec {
  std::string label;
  double magnitude = 0.0;
  double cost = 0.0;
};

// Success probability of an exploit: a constant, or a named time function
// resolved through a registry (e.g. "building_decay" for a staircase decay).
class SuccessProb {
 public:
  SuccessProb() = default;

  static SuccessProb constant(double p);
  static SuccessProb named(const std::string& name);

  // Value at time t, clamped to [0, 1].
  double at(int t) const;

  bool is_named() const { return !name_.empty(); }
  const std::string& name() const { return name_; }
  double const_value() const { return const_value_; }

  // Registry of named time functions. Registration replaces any existing
  // entry; lookup of an unknown name fails at SuccessProb::named time.
  static void register_named(const std::string& name,
                             std::function<double(int)> fn);

 private:
  double const_value_ = 0.0;
  std::string name_;
  std::function<double(int)> fn_;
};

struct ExploitEdge {
  NodeId from = 0;
  NodeId to = 0;
  double reward = 0.0;
  double cost = 0.0;
  SuccessProb success_prob;
};

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Cyber;
  bool entry_point = false;
  std::vector<PhysicalActionSpec> physical_actions;  // empty for cyber nodes
};

// One attack action: do-nothing, a cyber exploit along an edge, or a
// physical perturbation at a compromised physical node. Actions carry a
// stable global index (0 = noop, then edges in order, then physical actions
// in node order), used for tie-breaking and for preference-weight rows.
struct Action {
  enum class Kind { Noop, Exploit, Physical };

  Kind kind = Kind::Noop;
  int edge = -1;          // index into Hag::edges() when kind == Exploit
  NodeId node = 0;        // physical node when kind == Physical
  int action = -1;        // index into that node's physical_actions
  int global_index = 0;

  bool is_noop() const { return kind == Kind::Noop; }
  bool is_exploit() const { return kind == Kind::Exploit; }
  bool is_physical() const { return kind == Kind::Physical; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.global_index == b.global_index;
  }
};

// Directed acyclic hybrid attack graph. Immutable after construction; the
// constructor runs full validation (DAG, contiguous ids, probability range,
// physical-sink restriction, at least one entry point and physical root).
class Hag {
 public:
  Hag(std::vector<Node> nodes, std::vector<ExploitEdge> edges,
      double noop_reward = 0.0);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<ExploitEdge>& edges() const { return edges_; }
  const Node& node(NodeId id) const;
  double noop_reward() const { return noop_reward_; }

  const std::vector<NodeId>& physical_nodes() const { return physical_; }
  const std::vector<NodeId>& entry_nodes() const { return entry_; }

  // Slot of a physical node in the per-slot state vectors, or -1.
  int physical_slot(NodeId id) const;

  // Full finite action set (noop first), and lookup by global index.
  const std::vector<Action>& all_actions() const { return actions_; }
  int num_actions() const { return static_cast<int>(actions_.size()); }
  const Action& action(int global_index) const;
  const Action& noop() const { return actions_.front(); }
  Action exploit_action(int edge_index) const;

  // Entry security state: entry-point bits set, everything else clear.
  SecurityVector initial_security() const;

  // Short printable name for an action ("noop", "e1-2", "a+0.500").
  std::string action_label(const Action& a) const;

  // Edges (i,j) with i compromised and j not.
  std::vector<int> available_edges(const SecurityVector& security) const;

  // {noop} + available exploits + actions of compromised physical nodes.
  std::vector<Action> action_space(const SecurityVector& security) const;

  // Probability that at least one available exploit into `target` succeeds
  // at time t: 1 - prod(1 - prob). Zero if the target is compromised or no
  // exploit into it is available.
  double compromise_probability(NodeId target, const SecurityVector& security,
                                int t) const;

  // R_a: exploit actions on any directed path from a's target to any
  // physical root, plus a itself. Returned as sorted edge indices.
  std::vector<int> reachable_actions(const Action& a) const;

 private:
  void validate() const;
  void build_indices();

  std::vector<Node> nodes_;
  std::vector<ExploitEdge> edges_;
  double noop_reward_ = 0.0;

  std::vector<NodeId> physical_;
  std::vector<NodeId> entry_;
  std::vector<int> physical_slot_;          // per node, -1 for cyber
  std::vector<std::vector<int>> out_edges_; // per node, edge indices
  std::vector<std::vector<int>> in_edges_;
  std::vector<Action> actions_;
  std::vector<std::uint8_t> reaches_root_;  // per node: can reach a physical node
};

}  // namespace hagemu
