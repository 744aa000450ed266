#include "cmdkit/change_analysis.hpp"

#include <algorithm>
#include <sstream>

namespace cmdkit {

namespace {

void mark_methods_touching_var(const ClassMessageDiagram& old_cmd,
                               const ProgramModel& new_model,
                               const CmdNode& var, ChangeSet& cs) {
  for (const auto& e : old_cmd.edges) {
    CmdNode m;
    if (e.label == EdgeLabel::Uses && e.dst == var)
      m = e.src;
    else if (e.label == EdgeLabel::Def && e.src == var)
      m = e.dst;
    else
      continue;
    const ClassDef* cls = new_model.find_class(m.cls);
    if (cls && cls->find_method(m.member)) {
      if (cs.marked_nodes.insert(m).second)
        cs.entries.push_back({Granularity::Method, ChangeKind::Modified, m.label()});
    }
  }
}

// Callers (in the old diagram) of a method that no longer exists; marked
// MODIFIED on the new diagram so the search runs on one graph version.
void mark_surviving_callers(const ClassMessageDiagram& old_cmd,
                            const ProgramModel& new_model,
                            const CmdNode& deleted, ChangeSet& cs) {
  for (const auto& e : old_cmd.edges) {
    if (e.dst != deleted) continue;
    if (e.label != EdgeLabel::Message && e.label != EdgeLabel::Self &&
        e.label != EdgeLabel::Super)
      continue;
    const ClassDef* cls = new_model.find_class(e.src.cls);
    if (cls && cls->find_method(e.src.member)) cs.marked_nodes.insert(e.src);
  }
}

}  // namespace

ChangeSet diff_models(const ProgramModel& old_model,
                      const ProgramModel& new_model) {
  ChangeSet cs;
  ClassMessageDiagram old_cmd = build_cmd(old_model);
  ClassMessageDiagram new_cmd = build_cmd(new_model);

  auto mark_class = [&](const ClassDef& cls) {
    for (const auto& m : cls.methods)
      cs.marked_nodes.insert(method_node(cls.name, m.selector));
    for (const auto& v : cls.instance_vars)
      cs.marked_nodes.insert(data_node(cls.name, v.name));
  };

  for (const auto& nc : new_model.classes) {
    const ClassDef* oc = old_model.find_class(nc.name);
    if (!oc) {
      cs.entries.push_back({Granularity::Class, ChangeKind::Added, nc.name});
      mark_class(nc);
      continue;
    }

    bool superclass_changed = oc->superclass != nc.superclass;
    if (superclass_changed)
      cs.entries.push_back({Granularity::Class, ChangeKind::Modified, nc.name});

    for (const auto& nv : nc.instance_vars) {
      const VarDecl* ov = oc->find_var(nv.name);
      std::string subject = nc.name + "." + nv.name;
      if (!ov) {
        cs.entries.push_back({Granularity::Variable, ChangeKind::Added, subject});
        cs.marked_nodes.insert(data_node(nc.name, nv.name));
      } else if (ov->declared_type != nv.declared_type) {
        cs.entries.push_back({Granularity::Variable, ChangeKind::Modified, subject});
        cs.marked_nodes.insert(data_node(nc.name, nv.name));
        mark_methods_touching_var(old_cmd, new_model,
                                  data_node(nc.name, nv.name), cs);
      }
    }
    for (const auto& ov : oc->instance_vars) {
      if (!nc.find_var(ov.name)) {
        cs.entries.push_back(
            {Granularity::Variable, ChangeKind::Deleted, nc.name + "." + ov.name});
        mark_methods_touching_var(old_cmd, new_model,
                                  data_node(nc.name, ov.name), cs);
      }
    }

    for (const auto& nm : nc.methods) {
      const MethodDef* om = oc->find_method(nm.selector);
      CmdNode node = method_node(nc.name, nm.selector);
      std::string subject = node.label();
      if (!om) {
        cs.entries.push_back({Granularity::Method, ChangeKind::Added, subject});
        cs.marked_nodes.insert(node);
      } else if (!(*om == nm) || superclass_changed) {
        if (cs.marked_nodes.insert(node).second)
          cs.entries.push_back(
              {Granularity::Method, ChangeKind::Modified, subject});
      }
    }
    for (const auto& om : oc->methods) {
      if (!nc.find_method(om.selector)) {
        cs.entries.push_back({Granularity::Method, ChangeKind::Deleted,
                              nc.name + "." + om.selector});
        mark_surviving_callers(old_cmd, new_model,
                               method_node(nc.name, om.selector), cs);
      }
    }
  }

  for (const auto& oc : old_model.classes) {
    if (new_model.find_class(oc.name)) continue;
    cs.entries.push_back({Granularity::Class, ChangeKind::Deleted, oc.name});
    for (const auto& om : oc.methods)
      mark_surviving_callers(old_cmd, new_model,
                             method_node(oc.name, om.selector), cs);
    for (const auto& ov : oc.instance_vars)
      mark_methods_touching_var(old_cmd, new_model,
                                data_node(oc.name, ov.name), cs);
  }

  // Changed edges: symmetric difference restricted to edges whose endpoints
  // still exist. The search later seeds from their endpoint nodes.
  std::set<CmdEdge> old_edges(old_cmd.edges.begin(), old_cmd.edges.end());
  std::set<CmdEdge> new_edges(new_cmd.edges.begin(), new_cmd.edges.end());
  for (const auto& e : new_cmd.edges)
    if (!old_edges.count(e)) cs.marked_edges.insert(e);
  for (const auto& e : old_cmd.edges)
    if (!new_edges.count(e) && new_cmd.nodes.count(e.src) &&
        new_cmd.nodes.count(e.dst))
      cs.marked_edges.insert(e);

  std::sort(cs.entries.begin(), cs.entries.end());
  cs.entries.erase(std::unique(cs.entries.begin(), cs.entries.end()),
                   cs.entries.end());
  return cs;
}

ImpactSet impact(const ClassMessageDiagram& cmd_new, const ChangeSet& changes) {
  SimpleDigraph search =
      transpose(collapse_parallel(strip_inheritance(cmd_new)));

  std::vector<CmdNode> seeds;
  for (const auto& n : changes.marked_nodes)
    if (search.nodes.count(n)) seeds.push_back(n);
  for (const auto& e : changes.marked_edges) {
    if (search.nodes.count(e.src)) seeds.push_back(e.src);
    if (search.nodes.count(e.dst)) seeds.push_back(e.dst);
  }

  std::set<CmdNode> reached;
  std::vector<CmdNode> stack;
  for (const auto& s : seeds)
    if (reached.insert(s).second) stack.push_back(s);
  while (!stack.empty()) {
    CmdNode u = stack.back();
    stack.pop_back();
    for (const auto& v : search.successors(u))
      if (reached.insert(v).second) stack.push_back(v);
  }

  ImpactSet out;
  for (const auto& n : reached)
    (n.kind == NodeKind::Method ? out.methods : out.variables).insert(n);
  return out;
}

SimpleDigraph class_dependency_graph(const ProgramModel& model,
                                     const ClassMessageDiagram& cmd) {
  SimpleDigraph g;
  auto cnode = [](const std::string& name) { return method_node(name, ""); };
  for (const auto& c : model.classes) g.add_node(cnode(c.name));
  for (const auto& e : cmd.edges) {
    if (e.label == EdgeLabel::Inheritance) continue;
    if (e.src.cls != e.dst.cls) g.add_edge(cnode(e.src.cls), cnode(e.dst.cls));
  }
  for (const auto& c : model.classes) {
    if (c.superclass.empty()) continue;
    g.add_edge(cnode(c.name), cnode(c.superclass));
    g.add_edge(cnode(c.superclass), cnode(c.name));
  }
  return g;
}

std::set<std::string> class_level_impact(const ProgramModel& new_model,
                                         const ClassMessageDiagram& cmd_new,
                                         const ChangeSet& changes) {
  SimpleDigraph g = transpose(class_dependency_graph(new_model, cmd_new));
  auto cnode = [](const std::string& name) { return method_node(name, ""); };

  std::set<CmdNode> reached;
  std::vector<CmdNode> stack;
  auto seed = [&](const std::string& cls) {
    CmdNode n = cnode(cls);
    if (g.nodes.count(n) && reached.insert(n).second) stack.push_back(n);
  };
  for (const auto& n : changes.marked_nodes) seed(n.cls);
  for (const auto& e : changes.marked_edges) {
    seed(e.src.cls);
    seed(e.dst.cls);
  }
  while (!stack.empty()) {
    CmdNode u = stack.back();
    stack.pop_back();
    for (const auto& v : g.successors(u))
      if (reached.insert(v).second) stack.push_back(v);
  }
  std::set<std::string> out;
  for (const auto& n : reached) out.insert(n.cls);
  return out;
}

double reduction_ratio(std::size_t impacted_methods,
                       std::size_t total_methods_in_impacted_classes) {
  if (total_methods_in_impacted_classes == 0) return 0.0;
  return 1.0 - static_cast<double>(impacted_methods) /
                   static_cast<double>(total_methods_in_impacted_classes);
}

std::string format_change_set(const ChangeSet& changes) {
  std::ostringstream out;
  for (const auto& e : changes.entries) {
    const char* kind = e.kind == ChangeKind::Added     ? "ADDED"
                       : e.kind == ChangeKind::Deleted ? "DELETED"
                                                       : "MODIFIED";
    const char* gran = e.granularity == Granularity::Variable ? "VARIABLE"
                       : e.granularity == Granularity::Method ? "METHOD"
                                                              : "CLASS";
    out << kind << " " << gran << " " << e.subject << "\n";
  }
  return out.str();
}

}  // namespace cmdkit
