#include "cmdkit/test_strategy.hpp"

#include <algorithm>
#include <sstream>

namespace cmdkit {

namespace {

// Number of edges lying inside cyclic strong components (self-loops count).
std::size_t cycle_participation(const SimpleDigraph& g) {
  Condensation c = condense(g);
  std::size_t n = 0;
  for (const auto& [u, vs] : g.adj) {
    int cu = c.comp_of.at(u);
    for (const auto& v : vs)
      if (c.comp_of.at(v) == cu) ++n;
  }
  return n;
}

SimpleDigraph without_edge(const SimpleDigraph& g, const CmdNode& u,
                           const CmdNode& v) {
  SimpleDigraph out = g;
  out.adj[u].erase(v);
  return out;
}

std::optional<SiteId> smallest_site(const ClassMessageDiagram& cmd,
                                    const CmdNode& u, const CmdNode& v) {
  std::optional<SiteId> best;
  for (const auto& e : cmd.edges) {
    if (e.src != u || e.dst != v || !e.site) continue;
    if (e.label != EdgeLabel::Message && e.label != EdgeLabel::Self &&
        e.label != EdgeLabel::Super)
      continue;
    if (!best || *e.site < *best) best = e.site;
  }
  return best;
}

// Dependencies-first order of an acyclic graph: topological levels, sinks
// emitted first, flattened.
std::vector<CmdNode> dependency_order(const SimpleDigraph& g) {
  Condensation c = condense(g);
  std::vector<CmdNode> out;
  for (const auto& level : topological_levels(g, c))
    for (int comp : level)
      for (const auto& n : c.comps[comp]) out.push_back(n);
  return out;
}

SimpleDigraph induced(const SimpleDigraph& g, const std::set<CmdNode>& keep) {
  SimpleDigraph out;
  for (const auto& n : g.nodes)
    if (keep.count(n)) out.add_node(n);
  for (const auto& [u, vs] : g.adj) {
    if (!keep.count(u)) continue;
    for (const auto& v : vs)
      if (keep.count(v)) out.add_edge(u, v);
  }
  return out;
}

}  // namespace

StubPlan plan_stubs(const SimpleDigraph& component,
                    const ClassMessageDiagram& cmd) {
  SimpleDigraph g = component;
  std::vector<StubEdge> removed;

  while (cycle_participation(g) > 0) {
    Condensation c = condense(g);
    std::optional<StubEdge> best_edge;
    std::size_t best_participation = 0;
    for (const auto& [u, vs] : g.adj) {
      for (const auto& v : vs) {
        if (c.comp_of.at(u) != c.comp_of.at(v)) continue;  // not in a cycle
        std::size_t p = cycle_participation(without_edge(g, u, v));
        StubEdge cand{u, smallest_site(cmd, u, v), v};
        if (!best_edge || p < best_participation ||
            (p == best_participation && cand < *best_edge)) {
          best_edge = cand;
          best_participation = p;
        }
      }
    }
    g.adj[best_edge->caller].erase(best_edge->callee);
    removed.push_back(*best_edge);
  }

  // Restore any edge whose removal turned out to be unnecessary.
  std::sort(removed.begin(), removed.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = removed.begin(); it != removed.end(); ++it) {
      SimpleDigraph trial = g;
      trial.add_edge(it->caller, it->callee);
      if (cycle_participation(trial) == 0) {
        g = trial;
        removed.erase(it);
        changed = true;
        break;
      }
    }
  }

  StubPlan plan;
  plan.edges_to_stub = std::move(removed);
  for (const auto& n : dependency_order(g))
    if (n.kind == NodeKind::Method) plan.order.push_back(n);
  return plan;
}

TestStrategy generate_strategy(const ClassMessageDiagram& cmd,
                               const ImpactSet* scope, bool top_down) {
  SimpleDigraph g = collapse_parallel(cmd);
  if (scope) {
    std::set<CmdNode> keep = scope->methods;
    keep.insert(scope->variables.begin(), scope->variables.end());
    g = induced(g, keep);
  }

  Condensation c = condense(g);
  TestStrategy strategy;
  strategy.top_down = top_down;

  for (const auto& level : topological_levels(g, c)) {
    std::vector<StrategyItem> items;
    for (int comp : level) {
      StrategyItem item;
      for (const auto& n : c.comps[comp])
        if (n.kind == NodeKind::Method) item.methods.push_back(n);
      if (item.methods.empty()) continue;  // data-only component
      if (c.nontrivial[comp]) {
        std::set<CmdNode> members(c.comps[comp].begin(), c.comps[comp].end());
        item.stubs = plan_stubs(induced(g, members), cmd);
      }
      items.push_back(std::move(item));
    }
    if (!items.empty()) strategy.levels.push_back(std::move(items));
  }

  if (top_down) std::reverse(strategy.levels.begin(), strategy.levels.end());
  return strategy;
}

std::string format_strategy(const TestStrategy& strategy) {
  std::ostringstream out;
  for (std::size_t k = 0; k < strategy.levels.size(); ++k) {
    for (const auto& item : strategy.levels[k]) {
      out << "level " << k << ": ";
      if (!item.is_component()) {
        out << item.methods.front().label() << "\n";
        continue;
      }
      out << "component {";
      for (const auto& m : item.methods) out << " " << m.label();
      out << " }\n";
      if (item.stubs) {
        for (const auto& s : item.stubs->edges_to_stub) {
          out << "  stub " << s.caller.label();
          if (s.site) out << "#" << s.site->ordinal;
          out << " -> " << s.callee.label() << "\n";
        }
        out << "  order";
        for (const auto& m : item.stubs->order) out << " " << m.label();
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace cmdkit
