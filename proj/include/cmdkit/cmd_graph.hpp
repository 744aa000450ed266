#ifndef CMDKIT_CMD_GRAPH_HPP
#define CMDKIT_CMD_GRAPH_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdkit/model.hpp"

namespace cmdkit {

enum class NodeKind { Method, Data };

struct CmdNode {
  NodeKind kind = NodeKind::Method;
  std::string cls;
  std::string member;  // selector for Method, variable name for Data

  auto operator<=>(const CmdNode&) const = default;

  std::string label() const { return cls + "." + member; }
};

inline CmdNode method_node(std::string cls, std::string selector) {
  return {NodeKind::Method, std::move(cls), std::move(selector)};
}
inline CmdNode data_node(std::string cls, std::string var) {
  return {NodeKind::Data, std::move(cls), std::move(var)};
}

// Identifies the syntactic position a message emerges from.
struct SiteId {
  std::string cls;
  std::string selector;
  int ordinal = 0;

  auto operator<=>(const SiteId&) const = default;
};

enum class EdgeLabel { Message, Self, Super, Inheritance, Uses, Def };

struct CmdEdge {
  CmdNode src;
  CmdNode dst;
  EdgeLabel label = EdgeLabel::Message;
  std::optional<SiteId> site;   // Message/Self/Super only
  std::string duplicated_for;   // nonempty: polymorphic duplicate for subclass

  auto operator<=>(const CmdEdge&) const = default;
};

struct ClassMessageDiagram {
  std::string source_model_id;
  std::set<CmdNode> nodes;
  std::vector<CmdEdge> edges;  // multiset; kept sorted by build_cmd
};

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the diagram from a validated model with constructors synthesized.
// Message edges of typed sites are duplicated toward every transitive
// subclass of the receiver that redeclares the selector; untyped sites fan
// out to every implementation in the model. Constructors are statically
// bound: no inheritance edges between them and no polymorphic duplication.
ClassMessageDiagram build_cmd(const ProgramModel& model);

ClassMessageDiagram strip_inheritance(const ClassMessageDiagram& cmd);

struct SimpleDigraph {
  std::set<CmdNode> nodes;
  std::map<CmdNode, std::set<CmdNode>> adj;

  void add_node(const CmdNode& n) { nodes.insert(n); }
  void add_edge(const CmdNode& u, const CmdNode& v) {
    nodes.insert(u);
    nodes.insert(v);
    adj[u].insert(v);
  }
  bool has_edge(const CmdNode& u, const CmdNode& v) const {
    auto it = adj.find(u);
    return it != adj.end() && it->second.count(v) > 0;
  }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [u, vs] : adj) n += vs.size();
    return n;
  }
  const std::set<CmdNode>& successors(const CmdNode& u) const {
    static const std::set<CmdNode> kEmpty;
    auto it = adj.find(u);
    return it == adj.end() ? kEmpty : it->second;
  }
};

SimpleDigraph collapse_parallel(const ClassMessageDiagram& cmd);
SimpleDigraph transpose(const SimpleDigraph& g);

// Nontrivial strongly connected components: size >= 2, or a single node
// with a self-loop. Sorted by smallest member node.
std::vector<std::set<CmdNode>> strong_components(const SimpleDigraph& g);

struct Condensation {
  std::vector<std::vector<CmdNode>> comps;  // members sorted
  std::map<CmdNode, int> comp_of;
  std::vector<std::set<int>> adj;  // component DAG, no self-edges
  std::vector<bool> nontrivial;    // cyclic component (incl. self-loop)
};

Condensation condense(const SimpleDigraph& g);

// Levels of the condensation: level(n) = longest path from n to a sink;
// level 0 (the sinks) comes first. Within a level components are ordered
// constructors-first, then lexicographically by (class, member) of their
// smallest node. Throws CycleError if the condensation is cyclic.
std::vector<std::vector<int>> topological_levels(const SimpleDigraph& g,
                                                 const Condensation& c);

std::string export_dot(const ClassMessageDiagram& cmd);

}  // namespace cmdkit

#endif
