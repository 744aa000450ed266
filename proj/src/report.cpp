#include "cmdkit/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "cmdkit/change_analysis.hpp"

namespace cmdkit {

namespace {

void degrees(const SimpleDigraph& g, std::size_t& max_in, std::size_t& max_out) {
  std::map<CmdNode, std::size_t> in;
  max_in = max_out = 0;
  for (const auto& [u, vs] : g.adj) {
    max_out = std::max(max_out, vs.size());
    for (const auto& v : vs) ++in[v];
  }
  for (const auto& [n, d] : in) max_in = std::max(max_in, d);
}

}  // namespace

GraphStats stats(const ProgramModel& model, const ClassMessageDiagram& cmd) {
  GraphStats s;
  s.multigraph_edges = cmd.edges.size();

  // Class diagram column.
  SimpleDigraph cg = class_dependency_graph(model, cmd);
  s.class_level.nodes = cg.nodes.size();
  s.class_level.edges = cg.edge_count();
  degrees(cg, s.class_level.max_in_degree, s.class_level.max_out_degree);
  auto class_sccs = strong_components(cg);
  s.class_level.strong_components = class_sccs.size();
  for (const auto& scc : class_sccs) {
    s.class_level.classes_in_sccs += scc.size();
    for (const auto& n : scc) {
      const ClassDef* cls = model.find_class(n.cls);
      if (cls) s.class_level.methods_in_sccs += cls->methods.size();
    }
  }

  // Method-level column: collapsed message graph (data nodes separate).
  SimpleDigraph mg;
  for (const auto& n : cmd.nodes) {
    if (n.kind == NodeKind::Method)
      mg.add_node(n);
    else
      ++s.data_nodes;
  }
  for (const auto& e : cmd.edges)
    if (e.label == EdgeLabel::Message || e.label == EdgeLabel::Self ||
        e.label == EdgeLabel::Super)
      mg.add_edge(e.src, e.dst);
  s.cmd_level.nodes = mg.nodes.size();
  s.cmd_level.edges = mg.edge_count();
  degrees(mg, s.cmd_level.max_in_degree, s.cmd_level.max_out_degree);
  auto method_sccs = strong_components(mg);
  s.cmd_level.strong_components = method_sccs.size();
  std::set<std::string> scc_classes;
  for (const auto& scc : method_sccs) {
    s.cmd_level.methods_in_sccs += scc.size();
    for (const auto& n : scc) scc_classes.insert(n.cls);
  }
  s.cmd_level.classes_in_sccs = scc_classes.size();
  return s;
}

std::string format_stats(const GraphStats& s, bool tsv) {
  struct Row {
    const char* name;
    std::size_t class_col;
    std::size_t cmd_col;
  };
  const Row rows[] = {
      {"Nodes", s.class_level.nodes, s.cmd_level.nodes},
      {"Edges", s.class_level.edges, s.cmd_level.edges},
      {"Max in-degree", s.class_level.max_in_degree, s.cmd_level.max_in_degree},
      {"Max out-degree", s.class_level.max_out_degree, s.cmd_level.max_out_degree},
      {"Strong components", s.class_level.strong_components,
       s.cmd_level.strong_components},
      {"Classes in strong components", s.class_level.classes_in_sccs,
       s.cmd_level.classes_in_sccs},
      {"Methods in strong components", s.class_level.methods_in_sccs,
       s.cmd_level.methods_in_sccs},
      {"Data nodes", 0, s.data_nodes},
      {"Diagram edges (all labels)", 0, s.multigraph_edges},
  };

  std::ostringstream out;
  if (tsv) {
    out << "metric\tclass_diagram\tclass_message_diagram\n";
    for (const auto& r : rows)
      out << r.name << "\t" << r.class_col << "\t" << r.cmd_col << "\n";
  } else {
    out << std::left << std::setw(32) << "" << std::setw(16) << "Class diagram"
        << "Class message diagram\n";
    for (const auto& r : rows)
      out << std::left << std::setw(32) << r.name << std::setw(16)
          << r.class_col << r.cmd_col << "\n";
  }
  return out.str();
}

}  // namespace cmdkit
