#include "cmdkit/cmd_graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <tuple>

namespace cmdkit {

namespace {

CmdNode impl_node(const ProgramModel& model, const std::string& from_class,
                  const std::string& selector, bool include_self,
                  const std::string& context) {
  const ClassDef* impl = model.resolve_method(from_class, selector, include_self);
  if (!impl)
    throw ResolutionError(context + ": no implementation of '" + selector +
                          "' reachable from class '" + from_class + "'");
  return method_node(impl->name, selector);
}

}  // namespace

ClassMessageDiagram build_cmd(const ProgramModel& model) {
  ClassMessageDiagram cmd;
  cmd.source_model_id = model.model_id;

  for (const auto& cls : model.classes) {
    for (const auto& m : cls.methods)
      cmd.nodes.insert(method_node(cls.name, m.selector));
    for (const auto& v : cls.instance_vars)
      cmd.nodes.insert(data_node(cls.name, v.name));
  }

  for (const auto& cls : model.classes) {
    for (const auto& m : cls.methods) {
      CmdNode src = method_node(cls.name, m.selector);
      const std::string context = src.label();

      for (const auto& site : m.call_sites) {
        SiteId sid{cls.name, m.selector, site.ordinal};
        switch (site.dispatch) {
          case Dispatch::Self:
            cmd.edges.push_back(
                {src, impl_node(model, cls.name, site.target_selector, true, context),
                 EdgeLabel::Self, sid, ""});
            break;
          case Dispatch::Super:
            cmd.edges.push_back(
                {src, impl_node(model, cls.name, site.target_selector, false, context),
                 EdgeLabel::Super, sid, ""});
            break;
          case Dispatch::Typed: {
            CmdNode primary = impl_node(model, site.receiver_class,
                                        site.target_selector, true, context);
            cmd.edges.push_back({src, primary, EdgeLabel::Message, sid, ""});
            if (site.target_selector != kConstructorName) {
              for (const ClassDef* sub : model.subclasses_of(site.receiver_class)) {
                if (sub->find_method(site.target_selector)) {
                  cmd.edges.push_back(
                      {src, method_node(sub->name, site.target_selector),
                       EdgeLabel::Message, sid, sub->name});
                }
              }
            }
            break;
          }
          case Dispatch::Untyped:
            for (const auto& c : model.classes) {
              if (c.find_method(site.target_selector))
                cmd.edges.push_back(
                    {src, method_node(c.name, site.target_selector),
                     EdgeLabel::Message, sid, ""});
            }
            break;
        }
      }

      // Inheritance edge to the nearest ancestor implementation.
      if (!m.is_constructor && !cls.superclass.empty()) {
        const ClassDef* above =
            model.resolve_method(cls.name, m.selector, false);
        if (above)
          cmd.edges.push_back({src, method_node(above->name, m.selector),
                               EdgeLabel::Inheritance, std::nullopt, ""});
      }

      auto owning_class = [&](const VarRef& r) -> const ClassDef* {
        const ClassDef* owner = model.resolve_var(r.owner_class, r.var_name);
        if (!owner)
          throw ResolutionError(context + ": variable '" + r.var_name +
                                "' does not resolve from class '" +
                                r.owner_class + "'");
        return owner;
      };
      for (const auto& r : m.var_uses) {
        cmd.edges.push_back({src, data_node(owning_class(r)->name, r.var_name),
                             EdgeLabel::Uses, std::nullopt, ""});
      }
      for (const auto& r : m.var_defs) {
        cmd.edges.push_back({data_node(owning_class(r)->name, r.var_name), src,
                             EdgeLabel::Def, std::nullopt, ""});
      }
    }
  }

  std::sort(cmd.edges.begin(), cmd.edges.end());
  return cmd;
}

ClassMessageDiagram strip_inheritance(const ClassMessageDiagram& cmd) {
  ClassMessageDiagram out;
  out.source_model_id = cmd.source_model_id;
  out.nodes = cmd.nodes;
  for (const auto& e : cmd.edges)
    if (e.label != EdgeLabel::Inheritance) out.edges.push_back(e);
  return out;
}

SimpleDigraph collapse_parallel(const ClassMessageDiagram& cmd) {
  SimpleDigraph g;
  for (const auto& n : cmd.nodes) g.add_node(n);
  for (const auto& e : cmd.edges) g.add_edge(e.src, e.dst);
  return g;
}

SimpleDigraph transpose(const SimpleDigraph& g) {
  SimpleDigraph t;
  for (const auto& n : g.nodes) t.add_node(n);
  for (const auto& [u, vs] : g.adj)
    for (const auto& v : vs) t.add_edge(v, u);
  return t;
}

namespace {

// Iterative Tarjan over the ordered node set (deterministic).
struct TarjanState {
  const SimpleDigraph& g;
  std::map<CmdNode, int> index, low;
  std::map<CmdNode, bool> on_stack;
  std::vector<CmdNode> stack;
  int next = 0;
  std::vector<std::vector<CmdNode>> comps;

  explicit TarjanState(const SimpleDigraph& graph) : g(graph) {}

  void run() {
    for (const auto& n : g.nodes)
      if (!index.count(n)) visit(n);
  }

  void visit(const CmdNode& root) {
    struct Frame {
      CmdNode node;
      std::set<CmdNode>::const_iterator it, end;
    };
    std::vector<Frame> frames;
    auto push = [&](const CmdNode& n) {
      index[n] = low[n] = next++;
      stack.push_back(n);
      on_stack[n] = true;
      const auto& succ = g.successors(n);
      frames.push_back({n, succ.begin(), succ.end()});
    };
    push(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.it != f.end) {
        const CmdNode& w = *f.it++;
        if (!index.count(w)) {
          push(w);
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
      } else {
        if (low[f.node] == index[f.node]) {
          std::vector<CmdNode> comp;
          CmdNode w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
          } while (w != f.node);
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
        CmdNode done = f.node;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().node] =
              std::min(low[frames.back().node], low[done]);
      }
    }
  }
};

}  // namespace

Condensation condense(const SimpleDigraph& g) {
  TarjanState t(g);
  t.run();

  Condensation c;
  c.comps = std::move(t.comps);
  std::sort(c.comps.begin(), c.comps.end());
  for (std::size_t i = 0; i < c.comps.size(); ++i)
    for (const auto& n : c.comps[i]) c.comp_of[n] = static_cast<int>(i);

  c.adj.resize(c.comps.size());
  c.nontrivial.assign(c.comps.size(), false);
  for (std::size_t i = 0; i < c.comps.size(); ++i)
    if (c.comps[i].size() >= 2) c.nontrivial[i] = true;
  for (const auto& [u, vs] : g.adj) {
    int cu = c.comp_of.at(u);
    for (const auto& v : vs) {
      int cv = c.comp_of.at(v);
      if (cu == cv) {
        if (c.comps[cu].size() == 1) c.nontrivial[cu] = true;  // self-loop
      } else {
        c.adj[cu].insert(cv);
      }
    }
  }
  return c;
}

std::vector<std::set<CmdNode>> strong_components(const SimpleDigraph& g) {
  Condensation c = condense(g);
  std::vector<std::set<CmdNode>> out;
  for (std::size_t i = 0; i < c.comps.size(); ++i)
    if (c.nontrivial[i])
      out.emplace_back(c.comps[i].begin(), c.comps[i].end());
  return out;
}

namespace {

// Constructors first, then (class, member). Data nodes sort after methods
// of the same name only via the selector text; ordering just has to be
// total and stable.
bool node_order_key_less(const CmdNode& a, const CmdNode& b) {
  bool actor = a.kind == NodeKind::Method && a.member == kConstructorName;
  bool bctor = b.kind == NodeKind::Method && b.member == kConstructorName;
  if (actor != bctor) return actor;
  return std::tie(a.cls, a.member, a.kind) < std::tie(b.cls, b.member, b.kind);
}

}  // namespace

std::vector<std::vector<int>> topological_levels(const SimpleDigraph& g,
                                                 const Condensation& c) {
  (void)g;
  const std::size_t n = c.comps.size();
  std::vector<int> level(n, -1);

  // level = longest path to a sink; DFS with memoization.
  std::vector<int> state(n, 0);  // 0 unvisited, 1 in progress, 2 done
  std::function<int(int)> eval = [&](int i) -> int {
    if (state[i] == 1) throw CycleError("condensation is cyclic");
    if (state[i] == 2) return level[i];
    state[i] = 1;
    int best = 0;
    for (int j : c.adj[i]) best = std::max(best, eval(j) + 1);
    state[i] = 2;
    level[i] = best;
    return best;
  };
  for (std::size_t i = 0; i < n; ++i) eval(static_cast<int>(i));

  int max_level = -1;
  for (std::size_t i = 0; i < n; ++i) max_level = std::max(max_level, level[i]);
  std::vector<std::vector<int>> levels(max_level + 1);
  for (std::size_t i = 0; i < n; ++i)
    levels[level[i]].push_back(static_cast<int>(i));
  for (auto& lv : levels) {
    std::sort(lv.begin(), lv.end(), [&](int a, int b) {
      return node_order_key_less(c.comps[a].front(), c.comps[b].front());
    });
  }
  return levels;
}

namespace {

std::string dot_id(const CmdNode& n) {
  std::string s = (n.kind == NodeKind::Method ? "m_" : "d_") + n.label();
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  return s;
}

}  // namespace

std::string export_dot(const ClassMessageDiagram& cmd) {
  std::ostringstream out;
  out << "digraph cmd {\n";
  for (const auto& n : cmd.nodes) {
    out << "  " << dot_id(n) << " [label=\"" << n.label() << "\", shape="
        << (n.kind == NodeKind::Method ? "box" : "ellipse") << "];\n";
  }
  for (const auto& e : cmd.edges) {
    out << "  " << dot_id(e.src) << " -> " << dot_id(e.dst);
    std::string label;
    switch (e.label) {
      case EdgeLabel::Message: break;
      case EdgeLabel::Self: label = "self"; break;
      case EdgeLabel::Super: label = "super"; break;
      case EdgeLabel::Inheritance: label = "inh"; break;
      case EdgeLabel::Uses: label = "uses"; break;
      case EdgeLabel::Def: label = "def"; break;
    }
    std::string attrs;
    if (!label.empty()) attrs = "label=\"" + label + "\"";
    if (!e.duplicated_for.empty())
      attrs += std::string(attrs.empty() ? "" : ", ") + "style=dashed";
    if (!attrs.empty()) out << " [" << attrs << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace cmdkit
