#ifndef CMDKIT_CHANGE_ANALYSIS_HPP
#define CMDKIT_CHANGE_ANALYSIS_HPP

#include <set>
#include <string>
#include <vector>

#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/model.hpp"

namespace cmdkit {

enum class Granularity { Variable, Method, Class };
enum class ChangeKind { Added, Deleted, Modified };

struct ChangeEntry {
  Granularity granularity = Granularity::Method;
  ChangeKind kind = ChangeKind::Modified;
  std::string subject;  // Class, Class.selector or Class.var

  auto operator<=>(const ChangeEntry&) const = default;
};

struct ChangeSet {
  std::vector<ChangeEntry> entries;
  std::set<CmdNode> marked_nodes;  // nodes of the NEW diagram
  std::set<CmdEdge> marked_edges;  // edge symmetric difference, new endpoints

  bool empty() const { return entries.empty(); }
};

struct ImpactSet {
  std::set<CmdNode> methods;
  std::set<CmdNode> variables;
};

// Classifies every difference between the two (validated, constructor-
// synthesized) models and marks the corresponding nodes on the new
// diagram. Deleted elements are carried by marking their surviving
// dependents.
ChangeSet diff_models(const ProgramModel& old_model,
                      const ProgramModel& new_model);

// Reachability in the transposed, collapsed, inheritance-free diagram from
// the marked nodes (plus surviving endpoints of marked edges): everything
// that can reach a change.
ImpactSet impact(const ClassMessageDiagram& cmd_new, const ChangeSet& changes);

// Class-dependency digraph: C -> D when any method of C has a diagram edge
// into a member of D; inheritance counts in both directions. Self-loops
// are dropped.
SimpleDigraph class_dependency_graph(const ProgramModel& model,
                                     const ClassMessageDiagram& cmd);

// Coarse baseline: class reachability on the transposed class-dependency
// digraph seeded by the classes owning changed elements.
std::set<std::string> class_level_impact(const ProgramModel& new_model,
                                         const ClassMessageDiagram& cmd_new,
                                         const ChangeSet& changes);

// 1 - impacted / total, 0 when total is 0.
double reduction_ratio(std::size_t impacted_methods,
                       std::size_t total_methods_in_impacted_classes);

std::string format_change_set(const ChangeSet& changes);

}  // namespace cmdkit

#endif
