#include "hagemu/attack_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

namespace hagemu {

namespace {

std::map<std::string, std::function<double(int)>>& named_prob_registry() {
  static std::map<std::string, std::function<double(int)>> registry = {
      // Staircase decay used by the building use case: 0.5 - 0.1*floor(t/10).
      {"building_decay",
       [](int t) { return 0.5 - 0.1 * std::floor(static_cast<double>(t) / 10.0); }},
  };
  return registry;
}

}  // namespace

SuccessProb SuccessProb::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    raise(ErrorCode::BadProbability,
          "constant success probability " + std::to_string(p) + " outside [0,1]");
  SuccessProb sp;
  sp.const_value_ = p;
  return sp;
}

SuccessProb SuccessProb::named(const std::string& name) {
  auto& reg = named_prob_registry();
  auto it = reg.find(name);
  if (it == reg.end())
    raise(ErrorCode::ParseError, "unknown named success probability '" + name + "'");
  SuccessProb sp;
  sp.name_ = name;
  sp.fn_ = it->second;
  return sp;
}

double SuccessProb::at(int t) const {
  double p = fn_ ? fn_(t) : const_value_;
  return std::clamp(p, 0.0, 1.0);
}

void SuccessProb::register_named(const std::string& name,
                                 std::function<double(int)> fn) {
  named_prob_registry()[name] = std::move(fn);
}

Hag::Hag(std::vector<Node> nodes, std::vector<ExploitEdge> edges, double noop_reward)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), noop_reward_(noop_reward) {
  validate();
  build_indices();
}

void Hag::validate() const {
  const int n = num_nodes();
  if (n == 0) raise(ErrorCode::MissingEntryPoint, "graph has no nodes");
  if (n > 64)
    raise(ErrorCode::NonContiguousIds,
          "graphs are limited to 64 nodes (security masks are 64-bit)");

  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const Node& node : nodes_) {
    if (node.id < 1 || node.id > n)
      raise(ErrorCode::NonContiguousIds,
            "node id " + std::to_string(node.id) + " outside 1.." + std::to_string(n));
    if (seen[static_cast<std::size_t>(node.id - 1)]++)
      raise(ErrorCode::NonContiguousIds, "duplicate node id " + std::to_string(node.id));
    if (node.kind == NodeKind::Cyber && !node.physical_actions.empty())
      raise(ErrorCode::BadConfig,
            "cyber node " + std::to_string(node.id) + " declares physical actions");
    if (node.entry_point && node.kind != NodeKind::Cyber)
      raise(ErrorCode::BadConfig,
            "entry point " + std::to_string(node.id) + " must be a cyber node");
  }

  bool has_entry = false, has_physical = false;
  for (const Node& node : nodes_) {
    has_entry |= node.entry_point;
    has_physical |= node.kind == NodeKind::Physical;
  }
  if (!has_entry) raise(ErrorCode::MissingEntryPoint, "no entry-point cyber node");
  if (!has_physical) raise(ErrorCode::MissingPhysicalRoot, "no physical root node");

  std::vector<int> out_degree(static_cast<std::size_t>(n), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const ExploitEdge& edge = edges_[e];
    if (edge.from < 1 || edge.from > n || edge.to < 1 || edge.to > n)
      raise(ErrorCode::DanglingEdge, "edge (" + std::to_string(edge.from) + "," +
                                         std::to_string(edge.to) + ") references unknown node");
    if (edge.from == edge.to)
      raise(ErrorCode::CycleDetected, "self-loop at node " + std::to_string(edge.from));
    if (!edge.success_prob.is_named()) {
      double p = edge.success_prob.const_value();
      if (!(p >= 0.0 && p <= 1.0))
        raise(ErrorCode::BadProbability, "edge (" + std::to_string(edge.from) + "," +
                                             std::to_string(edge.to) +
                                             ") probability outside [0,1]");
    }
    out_degree[static_cast<std::size_t>(edge.from - 1)]++;
  }

  for (const Node& node : nodes_)
    if (node.kind == NodeKind::Physical && out_degree[static_cast<std::size_t>(node.id - 1)] > 0)
      raise(ErrorCode::PhysicalNotSink,
            "physical node " + std::to_string(node.id) + " has outgoing edges");

  // Kahn's algorithm; leftover nodes lie on a cycle.
  std::vector<int> in_degree(static_cast<std::size_t>(n), 0);
  for (const ExploitEdge& edge : edges_) in_degree[static_cast<std::size_t>(edge.to - 1)]++;
  std::vector<NodeId> queue;
  for (NodeId id = 1; id <= n; ++id)
    if (in_degree[static_cast<std::size_t>(id - 1)] == 0) queue.push_back(id);
  int removed = 0;
  while (!queue.empty()) {
    NodeId id = queue.back();
    queue.pop_back();
    ++removed;
    for (const ExploitEdge& edge : edges_)
      if (edge.from == id && --in_degree[static_cast<std::size_t>(edge.to - 1)] == 0)
        queue.push_back(edge.to);
  }
  if (removed != n) {
    std::ostringstream oss;
    oss << "cycle through nodes:";
    for (NodeId id = 1; id <= n; ++id)
      if (in_degree[static_cast<std::size_t>(id - 1)] > 0) oss << ' ' << id;
    raise(ErrorCode::CycleDetected, oss.str());
  }
}

void Hag::build_indices() {
  const int n = num_nodes();
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });

  physical_slot_.assign(static_cast<std::size_t>(n), -1);
  out_edges_.assign(static_cast<std::size_t>(n), {});
  in_edges_.assign(static_cast<std::size_t>(n), {});

  for (const Node& node : nodes_) {
    if (node.entry_point) entry_.push_back(node.id);
    if (node.kind == NodeKind::Physical) {
      physical_slot_[static_cast<std::size_t>(node.id - 1)] =
          static_cast<int>(physical_.size());
      physical_.push_back(node.id);
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    out_edges_[static_cast<std::size_t>(edges_[e].from - 1)].push_back(static_cast<int>(e));
    in_edges_[static_cast<std::size_t>(edges_[e].to - 1)].push_back(static_cast<int>(e));
  }

  actions_.push_back(Action{});  // noop, global index 0
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    Action a;
    a.kind = Action::Kind::Exploit;
    a.edge = static_cast<int>(e);
    a.global_index = static_cast<int>(actions_.size());
    actions_.push_back(a);
  }
  for (NodeId id : physical_) {
    const Node& node = nodes_[static_cast<std::size_t>(id - 1)];
    for (std::size_t k = 0; k < node.physical_actions.size(); ++k) {
      Action a;
      a.kind = Action::Kind::Physical;
      a.node = id;
      a.action = static_cast<int>(k);
      a.global_index = static_cast<int>(actions_.size());
      actions_.push_back(a);
    }
  }

  // Backward reachability from physical roots over reversed edges.
  reaches_root_.assign(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> stack(physical_.begin(), physical_.end());
  for (NodeId id : physical_) reaches_root_[static_cast<std::size_t>(id - 1)] = 1;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (int e : in_edges_[static_cast<std::size_t>(id - 1)]) {
      NodeId src = edges_[static_cast<std::size_t>(e)].from;
      if (!reaches_root_[static_cast<std::size_t>(src - 1)]) {
        reaches_root_[static_cast<std::size_t>(src - 1)] = 1;
        stack.push_back(src);
      }
    }
  }
}

const Node& Hag::node(NodeId id) const {
  if (id < 1 || id > num_nodes())
    raise(ErrorCode::UnknownNode, "unknown node id " + std::to_string(id));
  return nodes_[static_cast<std::size_t>(id - 1)];
}

int Hag::physical_slot(NodeId id) const {
  if (id < 1 || id > num_nodes()) return -1;
  return physical_slot_[static_cast<std::size_t>(id - 1)];
}

const Action& Hag::action(int global_index) const {
  if (global_index < 0 || global_index >= num_actions())
    raise(ErrorCode::UnknownAction, "action index " + std::to_string(global_index));
  return actions_[static_cast<std::size_t>(global_index)];
}

Action Hag::exploit_action(int edge_index) const {
  if (edge_index < 0 || edge_index >= num_edges())
    raise(ErrorCode::UnknownAction, "edge index " + std::to_string(edge_index));
  return actions_[static_cast<std::size_t>(1 + edge_index)];
}

SecurityVector Hag::initial_security() const {
  SecurityVector s(static_cast<std::size_t>(num_nodes()), 0);
  for (NodeId id : entry_) s[static_cast<std::size_t>(id - 1)] = 1;
  return s;
}

std::string Hag::action_label(const Action& a) const {
  switch (a.kind) {
    case Action::Kind::Noop:
      return "noop";
    case Action::Kind::Exploit: {
      const ExploitEdge& e = edges_[static_cast<std::size_t>(a.edge)];
      return "e" + std::to_string(e.from) + "-" + std::to_string(e.to);
    }
    case Action::Kind::Physical: {
      const PhysicalActionSpec& spec =
          node(a.node).physical_actions[static_cast<std::size_t>(a.action)];
      char buf[32];
      std::snprintf(buf, sizeof(buf), "a%+.3f", spec.magnitude);
      return buf;
    }
  }
  return "?";
}

std::vector<int> Hag::available_edges(const SecurityVector& security) const {
  if (static_cast<int>(security.size()) != num_nodes())
    raise(ErrorCode::DimensionMismatch,
          "security vector has " + std::to_string(security.size()) + " bits, graph has " +
              std::to_string(num_nodes()) + " nodes");
  std::vector<int> result;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (security[static_cast<std::size_t>(edges_[e].from - 1)] &&
        !security[static_cast<std::size_t>(edges_[e].to - 1)])
      result.push_back(static_cast<int>(e));
  return result;
}

std::vector<Action> Hag::action_space(const SecurityVector& security) const {
  std::vector<Action> space;
  space.push_back(noop());
  for (int e : available_edges(security)) space.push_back(exploit_action(e));
  for (const Action& a : actions_)
    if (a.is_physical() && security[static_cast<std::size_t>(a.node - 1)]) space.push_back(a);
  return space;
}

double Hag::compromise_probability(NodeId target, const SecurityVector& security,
                                   int t) const {
  if (target < 1 || target > num_nodes())
    raise(ErrorCode::UnknownNode, "unknown node id " + std::to_string(target));
  if (static_cast<int>(security.size()) != num_nodes())
    raise(ErrorCode::DimensionMismatch, "security vector size mismatch");
  if (security[static_cast<std::size_t>(target - 1)]) return 0.0;
  double fail_all = 1.0;
  bool any = false;
  for (int e : in_edges_[static_cast<std::size_t>(target - 1)]) {
    const ExploitEdge& edge = edges_[static_cast<std::size_t>(e)];
    if (security[static_cast<std::size_t>(edge.from - 1)]) {
      any = true;
      fail_all *= 1.0 - edge.success_prob.at(t);
    }
  }
  return any ? 1.0 - fail_all : 0.0;
}

std::vector<int> Hag::reachable_actions(const Action& a) const {
  if (!a.is_exploit() || a.edge < 0 || a.edge >= num_edges())
    raise(ErrorCode::UnknownAction, "reachable_actions requires an exploit action");

  // Forward reachability from the exploit's target node.
  std::vector<std::uint8_t> from_target(static_cast<std::size_t>(num_nodes()), 0);
  NodeId target = edges_[static_cast<std::size_t>(a.edge)].to;
  std::vector<NodeId> stack{target};
  from_target[static_cast<std::size_t>(target - 1)] = 1;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (int e : out_edges_[static_cast<std::size_t>(id - 1)]) {
      NodeId dst = edges_[static_cast<std::size_t>(e)].to;
      if (!from_target[static_cast<std::size_t>(dst - 1)]) {
        from_target[static_cast<std::size_t>(dst - 1)] = 1;
        stack.push_back(dst);
      }
    }
  }

  // An edge (u,v) lies on a target->root path iff u is reachable from the
  // target and v can still reach a root.
  std::vector<int> result{a.edge};
  for (int e = 0; e < num_edges(); ++e) {
    const ExploitEdge& edge = edges_[static_cast<std::size_t>(e)];
    if (from_target[static_cast<std::size_t>(edge.from - 1)] &&
        reaches_root_[static_cast<std::size_t>(edge.to - 1)] && e != a.edge)
      result.push_back(e);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace hagemu
