#include "cmdkit/coverage.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace cmdkit {

namespace {

bool is_message_label(EdgeLabel l) {
  return l == EdgeLabel::Message || l == EdgeLabel::Self ||
         l == EdgeLabel::Super;
}

// Collapsed digraph of message/self/super edges over method nodes.
SimpleDigraph message_digraph(const ClassMessageDiagram& cmd) {
  SimpleDigraph g;
  for (const auto& n : cmd.nodes)
    if (n.kind == NodeKind::Method) g.add_node(n);
  for (const auto& e : cmd.edges)
    if (is_message_label(e.label)) g.add_edge(e.src, e.dst);
  return g;
}

std::string edge_descriptor(const CmdEdge& e) {
  std::ostringstream out;
  out << e.src.label();
  if (e.site) out << "#" << e.site->ordinal;
  out << " -> " << e.dst.label();
  switch (e.label) {
    case EdgeLabel::Self: out << " [self]"; break;
    case EdgeLabel::Super: out << " [super]"; break;
    default: break;
  }
  if (!e.duplicated_for.empty()) out << " [dup " << e.duplicated_for << "]";
  return out.str();
}

std::string cycle_descriptor(const std::vector<CmdNode>& cycle) {
  std::ostringstream out;
  out << "cycle";
  for (const auto& n : cycle) out << " " << n.label();
  return out.str();
}

// Per-test sequence of collapsed (caller, callee) message steps, in call
// order.
std::vector<std::pair<CmdNode, CmdNode>> call_sequence(const TestRecord& rec) {
  std::vector<std::pair<CmdNode, CmdNode>> seq;
  seq.reserve(rec.calls.size());
  for (const auto& c : rec.calls) seq.emplace_back(c.caller, c.callee);
  return seq;
}

// Greedy count of complete traversals of `cycle` (given as node sequence
// n0..nk-1, edges ni->n(i+1 mod k)) within a test's call sequence.
int traversal_count(const std::vector<CmdNode>& cycle,
                    const std::vector<std::pair<CmdNode, CmdNode>>& seq) {
  const std::size_t k = cycle.size();
  int count = 0;
  std::size_t next = 0;  // next cycle edge to match
  for (const auto& [u, v] : seq) {
    const CmdNode& eu = cycle[next];
    const CmdNode& ev = cycle[(next + 1) % k];
    if (u == eu && v == ev) {
      if (++next == k) {
        ++count;
        next = 0;
      }
    }
  }
  return count;
}

// Simple cycles of g (Johnson-style DFS with blocking), each rotated to
// start at its smallest node. Throws past the cap.
std::vector<std::vector<CmdNode>> simple_cycles(const SimpleDigraph& g,
                                                std::size_t cap) {
  std::vector<CmdNode> nodes(g.nodes.begin(), g.nodes.end());
  std::map<CmdNode, int> idx;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    idx[nodes[i]] = static_cast<int>(i);

  std::vector<std::vector<CmdNode>> cycles;
  std::vector<CmdNode> path;
  std::set<CmdNode> on_path;

  // Cycles are enumerated with their smallest node first by only exploring
  // nodes with index >= the start node.
  std::function<void(int, const CmdNode&)> dfs = [&](int start,
                                                     const CmdNode& u) {
    path.push_back(u);
    on_path.insert(u);
    for (const auto& v : g.successors(u)) {
      if (idx.at(v) < start) continue;
      if (v == nodes[start]) {
        if (cycles.size() >= cap)
          throw CycleCapExceeded("more than " + std::to_string(cap) +
                                 " simple cycles in the message graph");
        cycles.push_back(path);
      } else if (!on_path.count(v)) {
        dfs(start, v);
      }
    }
    on_path.erase(u);
    path.pop_back();
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    path.clear();
    on_path.clear();
    dfs(static_cast<int>(i), nodes[i]);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Method: return "method";
    case Criterion::Message: return "message";
    case Criterion::PolyMessage: return "poly-message";
    case Criterion::BoundaryInterior: return "boundary-interior";
    case Criterion::CompletePath: return "complete-path";
  }
  return "?";
}

CoveredElements map_traces(const ClassMessageDiagram& cmd,
                           const TraceStore& traces) {
  CoveredElements out;
  for (const auto& [id, rec] : traces.records) {
    out.methods.insert(rec.touched.begin(), rec.touched.end());
    for (const auto& call : rec.calls) {
      bool matched = false;
      for (const auto& e : cmd.edges) {
        if (!is_message_label(e.label)) continue;
        if (e.src != call.caller || e.dst != call.callee) continue;
        if (call.site && e.site->ordinal != *call.site) continue;
        out.edges.insert(e);
        matched = true;
      }
      if (!matched)
        throw TraceMismatch("test '" + id + "': call " + call.caller.label() +
                            " -> " + call.callee.label() +
                            " has no corresponding diagram edge");
    }
  }
  return out;
}

CoverageReport method_coverage(const ClassMessageDiagram& cmd,
                               const CoveredElements& covered) {
  CoverageReport report;
  report.criterion = Criterion::Method;
  for (const auto& n : cmd.nodes) {
    if (n.kind != NodeKind::Method) continue;
    ++report.required;
    if (covered.methods.count(n))
      ++report.covered;
    else
      report.uncovered.push_back(n.label());
  }
  return report;
}

CoverageReport message_coverage(const ClassMessageDiagram& cmd,
                                const CoveredElements& covered) {
  CoverageReport report;
  report.criterion = Criterion::Message;
  std::map<SiteId, bool> fired;  // unlabelled message sites only
  for (const auto& e : cmd.edges) {
    if (e.label != EdgeLabel::Message) continue;
    bool hit = covered.edges.count(e) > 0;
    auto [it, inserted] = fired.emplace(*e.site, hit);
    if (!inserted) it->second = it->second || hit;
  }
  report.required = fired.size();
  for (const auto& [site, hit] : fired) {
    if (hit)
      ++report.covered;
    else
      report.uncovered.push_back("site " + site.cls + "." + site.selector +
                                 "#" + std::to_string(site.ordinal));
  }
  return report;
}

CoverageReport poly_message_coverage(const ClassMessageDiagram& cmd,
                                     const CoveredElements& covered) {
  CoverageReport report;
  report.criterion = Criterion::PolyMessage;
  for (const auto& e : cmd.edges) {
    if (!is_message_label(e.label)) continue;
    ++report.required;
    if (covered.edges.count(e))
      ++report.covered;
    else
      report.uncovered.push_back(edge_descriptor(e));
  }
  return report;
}

CoverageReport boundary_interior(const ClassMessageDiagram& cmd,
                                 const TraceStore& traces,
                                 std::size_t cycle_cap) {
  CoveredElements covered = map_traces(cmd, traces);
  CoverageReport report = poly_message_coverage(cmd, covered);
  report.criterion = Criterion::BoundaryInterior;

  SimpleDigraph g = message_digraph(cmd);
  Condensation comps = condense(g);

  for (const auto& cycle : simple_cycles(g, cycle_cap)) {
    int comp = comps.comp_of.at(cycle.front());
    bool met0 = false, met1 = false, met_many = false;
    for (const auto& [id, rec] : traces.records) {
      int count = traversal_count(cycle, call_sequence(rec));
      if (count == 0) {
        // "Zero" only counts for tests that exercise the cycle's component.
        bool touches = std::any_of(
            rec.touched.begin(), rec.touched.end(), [&](const CmdNode& n) {
              auto it = comps.comp_of.find(n);
              return it != comps.comp_of.end() && it->second == comp;
            });
        met0 = met0 || touches;
      } else if (count == 1) {
        met1 = true;
      } else {
        met_many = true;
      }
    }
    report.required += 3;
    std::string desc = cycle_descriptor(cycle);
    if (met0) ++report.covered; else report.uncovered.push_back(desc + " [0 times]");
    if (met1) ++report.covered; else report.uncovered.push_back(desc + " [1 time]");
    if (met_many) ++report.covered; else report.uncovered.push_back(desc + " [>1 times]");
  }
  return report;
}

CoverageReport complete_path_coverage(const ClassMessageDiagram& cmd,
                                      const TraceStore& traces,
                                      std::size_t path_cap) {
  SimpleDigraph g = message_digraph(cmd);
  auto sccs = strong_components(g);
  if (!sccs.empty()) {
    std::string members;
    for (const auto& n : *sccs.begin()) members += " " + n.label();
    throw CyclicCmdError("message graph is cyclic; strong component:" + members);
  }

  // Maximal source-to-sink paths.
  std::map<CmdNode, int> in_degree;
  for (const auto& n : g.nodes) in_degree[n] = 0;
  for (const auto& [u, vs] : g.adj)
    for (const auto& v : vs) ++in_degree[v];

  std::vector<std::vector<CmdNode>> paths;
  std::vector<CmdNode> path;
  std::function<void(const CmdNode&)> extend = [&](const CmdNode& u) {
    path.push_back(u);
    const auto& succ = g.successors(u);
    if (succ.empty()) {
      if (paths.size() >= path_cap)
        throw CycleCapExceeded("more than " + std::to_string(path_cap) +
                               " maximal paths in the message graph");
      paths.push_back(path);
    } else {
      for (const auto& v : succ) extend(v);
    }
    path.pop_back();
  };
  for (const auto& n : g.nodes)
    if (in_degree[n] == 0 && !g.successors(n).empty()) extend(n);

  std::vector<std::vector<std::pair<CmdNode, CmdNode>>> sequences;
  for (const auto& [id, rec] : traces.records) {
    (void)id;
    sequences.push_back(call_sequence(rec));
  }

  CoverageReport report;
  report.criterion = Criterion::CompletePath;
  report.required = paths.size();
  for (const auto& p : paths) {
    bool hit = false;
    for (const auto& seq : sequences) {
      std::size_t next = 0;  // next path edge (p[next] -> p[next+1])
      for (const auto& [u, v] : seq) {
        if (next + 1 >= p.size()) break;
        if (u == p[next] && v == p[next + 1]) ++next;
      }
      if (next + 1 >= p.size()) {
        hit = true;
        break;
      }
    }
    if (hit) {
      ++report.covered;
    } else {
      std::string desc = "path";
      for (const auto& n : p) desc += " " + n.label();
      report.uncovered.push_back(desc);
    }
  }
  return report;
}

std::string format_report(const CoverageReport& report) {
  std::ostringstream out;
  out << criterion_name(report.criterion) << " " << report.covered << "/"
      << report.required << " " << std::fixed << std::setprecision(4)
      << report.ratio() << "\n";
  for (const auto& u : report.uncovered) out << "uncovered " << u << "\n";
  return out.str();
}

}  // namespace cmdkit
