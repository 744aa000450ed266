#ifndef CMDKIT_REPORT_HPP
#define CMDKIT_REPORT_HPP

#include <string>

#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/model.hpp"

namespace cmdkit {

struct DiagramStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t max_in_degree = 0;
  std::size_t max_out_degree = 0;
  std::size_t strong_components = 0;
  std::size_t classes_in_sccs = 0;
  std::size_t methods_in_sccs = 0;
};

struct GraphStats {
  DiagramStats class_level;  // class-dependency digraph
  DiagramStats cmd_level;    // collapsed message graph over method nodes
  std::size_t data_nodes = 0;
  std::size_t multigraph_edges = 0;  // all diagram edges, every label
};

GraphStats stats(const ProgramModel& model, const ClassMessageDiagram& cmd);

std::string format_stats(const GraphStats& s, bool tsv = false);

}  // namespace cmdkit

#endif
