#include "cmdkit/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cmdkit {

const MethodDef* ClassDef::find_method(const std::string& selector) const {
  for (const auto& m : methods)
    if (m.selector == selector) return &m;
  return nullptr;
}

const VarDecl* ClassDef::find_var(const std::string& name) const {
  for (const auto& v : instance_vars)
    if (v.name == name) return &v;
  return nullptr;
}

bool ClassDef::has_constructor() const {
  return std::any_of(methods.begin(), methods.end(),
                     [](const MethodDef& m) { return m.is_constructor; });
}

const ClassDef* ProgramModel::find_class(const std::string& name) const {
  for (const auto& c : classes)
    if (c.name == name) return &c;
  return nullptr;
}

const ClassDef* ProgramModel::superclass_of(const ClassDef& cls) const {
  if (cls.superclass.empty()) return nullptr;
  return find_class(cls.superclass);
}

const ClassDef* ProgramModel::resolve_method(const std::string& class_name,
                                             const std::string& selector,
                                             bool include_self) const {
  const ClassDef* c = find_class(class_name);
  if (c && !include_self) c = superclass_of(*c);
  // Bounded walk guards against inheritance cycles in unvalidated models.
  for (std::size_t steps = 0; c && steps <= classes.size(); ++steps) {
    if (c->find_method(selector)) return c;
    c = superclass_of(*c);
  }
  return nullptr;
}

const ClassDef* ProgramModel::resolve_var(const std::string& class_name,
                                          const std::string& var) const {
  const ClassDef* c = find_class(class_name);
  for (std::size_t steps = 0; c && steps <= classes.size(); ++steps) {
    if (c->find_var(var)) return c;
    c = superclass_of(*c);
  }
  return nullptr;
}

std::vector<const ClassDef*> ProgramModel::subclasses_of(
    const std::string& class_name) const {
  std::vector<const ClassDef*> out;
  std::vector<std::string> frontier{class_name};
  while (!frontier.empty()) {
    std::string cur = frontier.back();
    frontier.pop_back();
    for (const auto& c : classes) {
      if (c.superclass == cur) {
        out.push_back(&c);
        frontier.push_back(c.name);
      }
    }
  }
  return out;
}

namespace {

bool selector_has_impl(const ProgramModel& model, const std::string& selector) {
  for (const auto& c : model.classes)
    if (c.find_method(selector)) return true;
  return false;
}

void add(ValidationReport& report, std::string code, std::string message) {
  report.push_back({std::move(code), std::move(message)});
}

}  // namespace

ValidationReport validate(const ProgramModel& model) {
  ValidationReport report;

  std::map<std::string, int> class_count;
  for (const auto& c : model.classes) ++class_count[c.name];
  for (const auto& [name, n] : class_count)
    if (n > 1) add(report, "DUPLICATE_CLASS", "class '" + name + "' declared " +
                                                  std::to_string(n) + " times");

  // Inheritance resolution and acyclicity.
  for (const auto& c : model.classes) {
    if (c.superclass.empty()) continue;
    if (!model.find_class(c.superclass)) {
      add(report, "UNKNOWN_SUPERCLASS",
          "class '" + c.name + "' extends unknown class '" + c.superclass + "'");
      continue;
    }
    const ClassDef* cur = model.superclass_of(c);
    std::size_t steps = 0;
    bool cyclic = false;
    while (cur) {
      if (cur->name == c.name || ++steps > model.classes.size()) {
        cyclic = true;
        break;
      }
      cur = model.superclass_of(*cur);
    }
    if (cyclic)
      add(report, "INHERITANCE_CYCLE",
          "inheritance chain of class '" + c.name + "' is cyclic");
  }
  if (!report.empty()) {
    // Member checks below assume a resolvable, acyclic hierarchy.
    return report;
  }

  for (const auto& c : model.classes) {
    std::map<std::string, int> sel_count, var_count;
    for (const auto& m : c.methods) ++sel_count[m.selector];
    for (const auto& v : c.instance_vars) ++var_count[v.name];
    for (const auto& [sel, n] : sel_count)
      if (n > 1)
        add(report, "DUPLICATE_METHOD",
            "selector '" + sel + "' declared " + std::to_string(n) +
                " times in class '" + c.name + "'");
    for (const auto& [var, n] : var_count)
      if (n > 1)
        add(report, "DUPLICATE_VAR", "instance variable '" + var +
                                         "' declared " + std::to_string(n) +
                                         " times in class '" + c.name + "'");

    for (const auto& v : c.instance_vars) {
      if (!v.declared_type.empty() && !model.find_class(v.declared_type))
        add(report, "UNKNOWN_TYPE", "variable '" + c.name + "." + v.name +
                                        "' has unknown type '" +
                                        v.declared_type + "'");
    }

    for (const auto& m : c.methods) {
      const std::string where = c.name + "." + m.selector;
      for (const auto& site : m.call_sites) {
        switch (site.dispatch) {
          case Dispatch::Self:
            if (!model.resolve_method(c.name, site.target_selector, true))
              add(report, "UNRESOLVED_SELECTOR",
                  where + ": self call to unresolved selector '" +
                      site.target_selector + "'");
            break;
          case Dispatch::Super:
            if (!model.resolve_method(c.name, site.target_selector, false))
              add(report, "BAD_SUPER_CALL",
                  where + ": super call to '" + site.target_selector +
                      "' has no implementation above class '" + c.name + "'");
            break;
          case Dispatch::Typed:
            if (!model.find_class(site.receiver_class)) {
              add(report, "UNKNOWN_RECEIVER_CLASS",
                  where + ": call receiver class '" + site.receiver_class +
                      "' is not declared");
            } else if (!model.resolve_method(site.receiver_class,
                                             site.target_selector, true)) {
              add(report, "UNRESOLVED_SELECTOR",
                  where + ": selector '" + site.target_selector +
                      "' has no implementation at or above class '" +
                      site.receiver_class + "'");
            }
            break;
          case Dispatch::Untyped:
            if (!selector_has_impl(model, site.target_selector))
              add(report, "UNRESOLVED_SELECTOR",
                  where + ": selector '" + site.target_selector +
                      "' has no implementation anywhere in the model");
            break;
        }
      }
      auto check_refs = [&](const std::set<VarRef>& refs, const char* what) {
        for (const auto& r : refs) {
          if (!model.find_class(r.owner_class)) {
            add(report, "UNRESOLVED_VAR",
                where + ": " + what + " of '" + r.owner_class + "." +
                    r.var_name + "' names an unknown class");
          } else if (!model.resolve_var(r.owner_class, r.var_name)) {
            add(report, "UNRESOLVED_VAR",
                where + ": " + what + " of '" + r.var_name +
                    "' does not resolve at or above class '" + r.owner_class +
                    "'");
          }
        }
      };
      check_refs(m.var_uses, "use");
      check_refs(m.var_defs, "def");
    }
  }
  return report;
}

ProgramModel synthesize_default_constructors(const ProgramModel& model) {
  ProgramModel out = model;
  for (auto& c : out.classes) {
    if (c.has_constructor()) continue;
    MethodDef ctor;
    ctor.selector = kConstructorName;
    ctor.is_constructor = true;
    for (const auto& v : c.instance_vars)
      ctor.var_defs.insert(VarRef{c.name, v.name});
    c.methods.push_back(std::move(ctor));
  }
  return out;
}

}  // namespace cmdkit
