#ifndef CMDKIT_COVERAGE_HPP
#define CMDKIT_COVERAGE_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/trace.hpp"

namespace cmdkit {

class TraceMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CyclicCmdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Criterion { Method, Message, PolyMessage, BoundaryInterior, CompletePath };

std::string criterion_name(Criterion c);

struct CoverageReport {
  Criterion criterion = Criterion::Method;
  std::size_t covered = 0;
  std::size_t required = 0;
  std::vector<std::string> uncovered;

  double ratio() const {
    return required == 0 ? 1.0
                         : static_cast<double>(covered) /
                               static_cast<double>(required);
  }
};

struct CoveredElements {
  std::set<CmdNode> methods;  // visited method nodes
  std::set<CmdEdge> edges;    // traversed message/self/super edges
};

// Attributes reconstructed calls to diagram edges. A call with a recorded
// site covers the unique edge of that site ending at the callee; a siteless
// call conservatively covers every edge from the caller to the callee.
// Throws TraceMismatch when a call has no corresponding edge.
CoveredElements map_traces(const ClassMessageDiagram& cmd,
                           const TraceStore& traces);

CoverageReport method_coverage(const ClassMessageDiagram& cmd,
                               const CoveredElements& covered);

// One requirement per call site owning unlabelled message edges; satisfied
// when any of the site's edges fired.
CoverageReport message_coverage(const ClassMessageDiagram& cmd,
                                const CoveredElements& covered);

// One requirement per message/self/super edge (every polymorphic binding).
CoverageReport poly_message_coverage(const ClassMessageDiagram& cmd,
                                     const CoveredElements& covered);

// Poly-message requirements plus, for every simple cycle of the collapsed
// message subgraph, the obligations to traverse it 0, exactly 1, and >1
// times in some test. Throws CycleCapExceeded past `cycle_cap` cycles.
CoverageReport boundary_interior(const ClassMessageDiagram& cmd,
                                 const TraceStore& traces,
                                 std::size_t cycle_cap = 10000);

// Every maximal source-to-sink path of the collapsed message subgraph must
// appear, in order, in some test's call sequence. Only defined for acyclic
// message subgraphs (CyclicCmdError otherwise).
CoverageReport complete_path_coverage(const ClassMessageDiagram& cmd,
                                      const TraceStore& traces,
                                      std::size_t path_cap = 100000);

std::string format_report(const CoverageReport& report);

}  // namespace cmdkit

#endif
