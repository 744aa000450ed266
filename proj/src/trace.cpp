#include "cmdkit/trace.hpp"

#include <sstream>

namespace cmdkit {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Frame {
  CmdNode node;          // executed implementation
  std::string impl_cls;  // class declaring the implementation
};

}  // namespace

TraceStore parse_traces(const std::string& text, const ProgramModel& model) {
  TraceStore store;
  TestRecord* current = nullptr;
  std::vector<Frame> stack;
  int line_no = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw TraceFormatError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto finish_test = [&]() {
    if (current && !stack.empty())
      fail("test '" + current->test_id + "' has " +
           std::to_string(stack.size()) + " unbalanced enter event(s)");
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;

    if (toks[0] == "model") {
      if (toks.size() != 2) fail("'model' takes exactly one argument");
      store.model_id = toks[1];
    } else if (toks[0] == "test") {
      if (toks.size() < 2) fail("'test' requires a test id");
      finish_test();
      stack.clear();
      TestRecord rec;
      rec.test_id = toks[1];
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].rfind("spec=", 0) == 0) {
          rec.spec_tag = toks[i].substr(5);
        } else if (toks[i].rfind("criticality=", 0) == 0) {
          int c = std::stoi(toks[i].substr(12));
          if (c < 1 || c > 5) fail("criticality must be in 1..5");
          rec.criticality = c;
        } else {
          fail("unknown test attribute '" + toks[i] + "'");
        }
      }
      if (store.records.count(rec.test_id))
        fail("duplicate test id '" + rec.test_id + "'");
      current = &store.records.emplace(rec.test_id, std::move(rec)).first->second;
    } else if (toks[0] == "enter") {
      if (!current) fail("'enter' before any 'test' line");
      if (toks.size() < 2) fail("'enter' requires Class.selector");
      auto dot = toks[1].find('.');
      if (dot == std::string::npos) fail("expected Class.selector");
      std::string dyn_cls = toks[1].substr(0, dot);
      std::string selector = toks[1].substr(dot + 1);
      std::optional<int> site;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].rfind("site=", 0) == 0)
          site = std::stoi(toks[i].substr(5));
        else
          fail("unknown enter attribute '" + toks[i] + "'");
      }

      if (!model.find_class(dyn_cls))
        fail("unknown class '" + dyn_cls + "'");
      const ClassDef* impl = model.resolve_method(dyn_cls, selector, true);
      if (!impl)
        fail("no implementation of '" + selector + "' at or above class '" +
             dyn_cls + "'");
      CmdNode callee = method_node(impl->name, selector);

      if (!stack.empty()) {
        const Frame& caller = stack.back();
        if (site) {
          const ClassDef* ccls = model.find_class(caller.impl_cls);
          const MethodDef* cm = ccls->find_method(caller.node.member);
          if (*site < 0 || *site >= static_cast<int>(cm->call_sites.size()))
            fail("site ordinal " + std::to_string(*site) +
                 " out of range for " + caller.node.label());
        }
        current->calls.push_back({caller.node, callee, site});
      } else {
        current->roots.push_back(callee);
      }
      stack.push_back({callee, impl->name});
      current->touched.insert(callee);
      current->depth =
          std::max(current->depth, static_cast<int>(stack.size()));
    } else if (toks[0] == "exit") {
      if (toks.size() != 1) fail("'exit' takes no arguments");
      if (!current || stack.empty()) fail("'exit' with empty call stack");
      stack.pop_back();
    } else {
      fail("unknown directive '" + toks[0] + "'");
    }
  }
  finish_test();
  return store;
}

}  // namespace cmdkit
