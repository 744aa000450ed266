#ifndef CMDKIT_TRACE_HPP
#define CMDKIT_TRACE_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/model.hpp"

namespace cmdkit {

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One reconstructed call: the caller is the frame beneath the entered
// method. Nodes are the implementations actually executed (dynamic receiver
// class resolved upward).
struct Call {
  CmdNode caller;
  CmdNode callee;
  std::optional<int> site;  // caller call-site ordinal, when recorded
};

struct TestRecord {
  std::string test_id;
  std::string spec_tag;
  int criticality = 3;
  std::vector<CmdNode> roots;      // top-level entries, in order
  std::vector<Call> calls;         // chronological (enter order)
  std::set<CmdNode> touched;       // every method entered
  int depth = 0;                   // max nesting depth
};

struct TraceStore {
  std::string model_id;  // model version the traces were captured against
  std::map<std::string, TestRecord> records;
};

// Line-oriented format:
//   model <id>                                   (optional, once)
//   test <id> [spec=<tag>] [criticality=<1..5>]
//   enter <Class>.<selector> [site=<ordinal>]
//   exit
// enter/exit must balance within each test. Methods are resolved against
// `model`; a site ordinal must index a call site of the calling frame's
// method.
TraceStore parse_traces(const std::string& text, const ProgramModel& model);

}  // namespace cmdkit

#endif
