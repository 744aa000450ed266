// Shared test helpers: fixture loading, independent oracles, and a random
// model/trace generator. The oracles deliberately use different algorithms
// than the library (matrix closure, pairwise BFS) so they can check it.
#ifndef CMDKIT_TESTS_SUPPORT_HPP
#define CMDKIT_TESTS_SUPPORT_HPP

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmdkit/change_analysis.hpp"
#include "cmdkit/cmd_graph.hpp"
#include "cmdkit/dsl.hpp"
#include "cmdkit/model.hpp"
#include "cmdkit/trace.hpp"

namespace cmdkit::testing {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURES_DIR) + "/" + name, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ProgramModel load_fixture_model(const std::string& name) {
  ProgramModel m = parse_model(read_fixture(name), name);
  m.model_id = name.substr(0, name.find('.'));
  return synthesize_default_constructors(m);
}

inline TraceStore load_fixture_traces(const std::string& name,
                                      const ProgramModel& model) {
  return parse_traces(read_fixture(name), model);
}

// ---------------------------------------------------------------------------
// Oracles

// Boolean-matrix transitive closure (Floyd-Warshall), forward reachability:
// closure[i][j] == true iff i reaches j (i != j, or via a cycle).
inline std::vector<std::vector<bool>> closure_matrix(
    const SimpleDigraph& g, std::vector<CmdNode>& nodes_out) {
  nodes_out.assign(g.nodes.begin(), g.nodes.end());
  std::map<CmdNode, std::size_t> idx;
  for (std::size_t i = 0; i < nodes_out.size(); ++i) idx[nodes_out[i]] = i;
  const std::size_t n = nodes_out.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [u, vs] : g.adj)
    for (const auto& v : vs) reach[idx[u]][idx[v]] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }
  return reach;
}

// Impact oracle: every node with a forward path to a seed, plus the seeds.
inline std::set<CmdNode> impact_oracle(const ClassMessageDiagram& cmd_new,
                                       const std::set<CmdNode>& seeds) {
  SimpleDigraph g = collapse_parallel(strip_inheritance(cmd_new));
  std::vector<CmdNode> nodes;
  auto reach = closure_matrix(g, nodes);
  std::set<CmdNode> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (seeds.count(nodes[i])) {
      out.insert(nodes[i]);
      continue;
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (reach[i][j] && seeds.count(nodes[j])) {
        out.insert(nodes[i]);
        break;
      }
    }
  }
  return out;
}

// SCC oracle by pairwise mutual reachability on the closure matrix.
// Returns only cyclic components (size >= 2 or a self-loop), ordered by
// smallest member, matching strong_components().
inline std::vector<std::set<CmdNode>> scc_oracle(const SimpleDigraph& g) {
  std::vector<CmdNode> nodes;
  auto reach = closure_matrix(g, nodes);
  const std::size_t n = nodes.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::set<CmdNode>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    assigned[i] = true;
    std::set<CmdNode> comp{nodes[i]};
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!assigned[j] && reach[i][j] && reach[j][i]) {
        comp.insert(nodes[j]);
        assigned[j] = true;
      }
    }
    if (comp.size() >= 2 || reach[i][i]) out.push_back(std::move(comp));
  }
  return out;
}

inline bool is_acyclic(const SimpleDigraph& g) {
  // Kahn's algorithm; self-loops never reach in-degree zero.
  std::map<CmdNode, std::size_t> in_degree;
  for (const auto& n : g.nodes) in_degree[n] = 0;
  for (const auto& [u, vs] : g.adj)
    for (const auto& v : vs) ++in_degree[v];
  std::vector<CmdNode> queue;
  for (const auto& [n, d] : in_degree)
    if (d == 0) queue.push_back(n);
  std::size_t removed = 0;
  while (!queue.empty()) {
    CmdNode u = queue.back();
    queue.pop_back();
    ++removed;
    if (g.has_edge(u, u)) return false;
    for (const auto& v : g.successors(u))
      if (--in_degree[v] == 0) queue.push_back(v);
  }
  return removed == g.nodes.size();
}

// ---------------------------------------------------------------------------
// Random model generator (always yields a valid model).

inline ProgramModel random_model(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  ProgramModel model;
  model.model_id = "random";
  const int n_classes = pick(1, 12);
  int methods_left = 45;

  for (int i = 0; i < n_classes; ++i) {
    ClassDef cls;
    cls.name = "C" + std::to_string(i);
    if (i > 0 && pick(0, 1) == 1)
      cls.superclass = "C" + std::to_string(pick(0, i - 1));
    int n_vars = pick(0, 2);
    for (int v = 0; v < n_vars; ++v) {
      VarDecl decl;
      decl.name = "v" + std::to_string(v);
      if (pick(0, 2) == 0) decl.declared_type = "C" + std::to_string(pick(0, i));
      cls.instance_vars.push_back(decl);
    }
    int n_methods = std::min(pick(0, 3), methods_left);
    methods_left -= n_methods;
    std::set<std::string> used;
    for (int m = 0; m < n_methods; ++m) {
      MethodDef method;
      method.selector = "m" + std::to_string(pick(0, 7));
      if (!used.insert(method.selector).second) continue;
      if (pick(0, 1)) method.body_fingerprint = "f" + std::to_string(pick(0, 99));
      cls.methods.push_back(method);
    }
    model.classes.push_back(cls);
  }

  // Second pass: call sites and variable references against the finished
  // skeleton, choosing only resolvable targets.
  auto selectors_from = [&](const std::string& cls, bool include_self) {
    std::set<std::string> out;
    const ClassDef* c = model.find_class(cls);
    if (c && !include_self) c = model.superclass_of(*c);
    while (c) {
      for (const auto& m : c->methods)
        if (!m.is_constructor) out.insert(m.selector);
      c = model.superclass_of(*c);
    }
    return std::vector<std::string>(out.begin(), out.end());
  };
  std::vector<std::string> all_selectors;
  {
    std::set<std::string> s;
    for (const auto& c : model.classes)
      for (const auto& m : c.methods) s.insert(m.selector);
    all_selectors.assign(s.begin(), s.end());
  }
  auto vars_from = [&](const std::string& cls) {
    std::vector<std::pair<std::string, std::string>> out;  // (owner, name)
    const ClassDef* c = model.find_class(cls);
    while (c) {
      for (const auto& v : c->instance_vars) out.emplace_back(c->name, v.name);
      c = model.superclass_of(*c);
    }
    return out;
  };

  for (auto& cls : model.classes) {
    for (auto& method : cls.methods) {
      int n_sites = pick(0, 3);
      for (int s = 0; s < n_sites; ++s) {
        CallSite site;
        site.ordinal = static_cast<int>(method.call_sites.size());
        switch (pick(0, 3)) {
          case 0: {
            auto cands = selectors_from(cls.name, true);
            if (cands.empty()) continue;
            site.dispatch = Dispatch::Self;
            site.target_selector = cands[pick(0, (int)cands.size() - 1)];
            break;
          }
          case 1: {
            auto cands = selectors_from(cls.name, false);
            if (cands.empty()) continue;
            site.dispatch = Dispatch::Super;
            site.target_selector = cands[pick(0, (int)cands.size() - 1)];
            break;
          }
          case 2: {
            const ClassDef& recv = model.classes[pick(0, n_classes - 1)];
            auto cands = selectors_from(recv.name, true);
            if (cands.empty()) continue;
            site.dispatch = Dispatch::Typed;
            site.receiver_class = recv.name;
            site.target_selector = cands[pick(0, (int)cands.size() - 1)];
            break;
          }
          default: {
            if (all_selectors.empty()) continue;
            site.dispatch = Dispatch::Untyped;
            site.target_selector =
                all_selectors[pick(0, (int)all_selectors.size() - 1)];
            break;
          }
        }
        method.call_sites.push_back(site);
      }
      auto vars = vars_from(cls.name);
      if (!vars.empty()) {
        for (int k = pick(0, 2); k > 0; --k) {
          auto [owner, name] = vars[pick(0, (int)vars.size() - 1)];
          // Lexical default: reference through the enclosing class.
          std::string ref_owner = pick(0, 1) ? cls.name : owner;
          if (!model.resolve_var(ref_owner, name)) ref_owner = owner;
          (pick(0, 1) ? method.var_uses : method.var_defs)
              .insert(VarRef{ref_owner, name});
        }
      }
    }
  }
  return synthesize_default_constructors(model);
}

// Simple fingerprint/structure mutations that keep the model valid.
inline ProgramModel mutate_model(const ProgramModel& model, std::mt19937& rng) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  ProgramModel out = model;
  int mutations = pick(1, 3);
  for (int i = 0; i < mutations; ++i) {
    ClassDef& cls = out.classes[pick(0, (int)out.classes.size() - 1)];
    switch (pick(0, 3)) {
      case 0: {  // touch a fingerprint
        if (cls.methods.empty()) break;
        cls.methods[pick(0, (int)cls.methods.size() - 1)].body_fingerprint +=
            "'";
        break;
      }
      case 1: {  // add a fresh method
        MethodDef m;
        m.selector = "added" + std::to_string(pick(0, 999));
        if (cls.find_method(m.selector)) break;
        m.body_fingerprint = "new";
        cls.methods.push_back(m);
        break;
      }
      case 2: {  // add an instance variable
        VarDecl v;
        v.name = "w" + std::to_string(pick(0, 999));
        if (cls.find_var(v.name)) break;
        cls.instance_vars.push_back(v);
        break;
      }
      default: {  // drop the last call site of some method
        for (auto& m : cls.methods) {
          if (!m.call_sites.empty()) {
            m.call_sites.pop_back();
            break;
          }
        }
        break;
      }
    }
  }
  return out;
}

// Random trace text generated by walking the diagram's message edges, so
// every reconstructed call maps to an edge.
inline std::string random_traces(const ClassMessageDiagram& cmd,
                                 std::mt19937& rng, int n_tests) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::map<CmdNode, std::vector<const CmdEdge*>> out_edges;
  std::vector<CmdNode> methods;
  for (const auto& n : cmd.nodes)
    if (n.kind == NodeKind::Method) methods.push_back(n);
  for (const auto& e : cmd.edges)
    if (e.label == EdgeLabel::Message || e.label == EdgeLabel::Self ||
        e.label == EdgeLabel::Super)
      out_edges[e.src].push_back(&e);

  std::ostringstream out;
  out << "model " << cmd.source_model_id << "\n";
  for (int t = 0; t < n_tests; ++t) {
    out << "test t" << t << " spec=s" << pick(0, 3) << " criticality="
        << pick(1, 5) << "\n";
    if (methods.empty()) continue;
    int budget = pick(1, 12);
    std::function<void(const CmdNode&, int)> walk = [&](const CmdNode& node,
                                                        int depth) {
      out << "enter " << node.cls << "." << node.member << "\n";
      if (depth < 4) {
        auto it = out_edges.find(node);
        if (it != out_edges.end()) {
          int calls = pick(0, 2);
          for (int c = 0; c < calls && budget > 0; ++c) {
            const CmdEdge* e =
                it->second[pick(0, (int)it->second.size() - 1)];
            --budget;
            // Half the time record the originating site.
            if (pick(0, 1)) {
              out << "enter " << e->dst.cls << "." << e->dst.member
                  << " site=" << e->site->ordinal << "\n";
              out << "exit\n";
            } else {
              walk(e->dst, depth + 1);
            }
          }
        }
      }
      out << "exit\n";
    };
    walk(methods[pick(0, (int)methods.size() - 1)], 0);
  }
  return out.str();
}

}  // namespace cmdkit::testing

#endif
