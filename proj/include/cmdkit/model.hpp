#ifndef CMDKIT_MODEL_HPP
#define CMDKIT_MODEL_HPP

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmdkit {

// Name given to synthesized (and explicit) constructors.
inline constexpr const char* kConstructorName = "<init>";

enum class Dispatch { Self, Super, Typed, Untyped };

struct CallSite {
  int ordinal = 0;
  Dispatch dispatch = Dispatch::Untyped;
  std::string receiver_class;  // only meaningful for Typed
  std::string target_selector;

  auto operator<=>(const CallSite&) const = default;
};

struct VarRef {
  std::string owner_class;
  std::string var_name;

  auto operator<=>(const VarRef&) const = default;
};

struct VarDecl {
  std::string name;
  std::string declared_type;  // empty = untyped

  auto operator<=>(const VarDecl&) const = default;
};

struct MethodDef {
  std::string selector;
  bool is_constructor = false;
  std::string body_fingerprint;  // empty = absent
  std::vector<CallSite> call_sites;
  std::set<VarRef> var_uses;
  std::set<VarRef> var_defs;

  bool operator==(const MethodDef&) const = default;
};

struct ClassDef {
  std::string name;
  std::string superclass;  // empty = root class
  bool is_abstract = false;
  std::vector<VarDecl> instance_vars;
  std::vector<MethodDef> methods;

  bool operator==(const ClassDef&) const = default;

  const MethodDef* find_method(const std::string& selector) const;
  const VarDecl* find_var(const std::string& name) const;
  bool has_constructor() const;
};

struct ProgramModel {
  std::string model_id;
  std::vector<ClassDef> classes;

  const ClassDef* find_class(const std::string& name) const;
  const ClassDef* superclass_of(const ClassDef& cls) const;

  // Walks the inheritance chain from `class_name` upward and returns the
  // first class declaring `selector`, or nullptr. When include_self is
  // false the walk starts at the superclass.
  const ClassDef* resolve_method(const std::string& class_name,
                                 const std::string& selector,
                                 bool include_self = true) const;

  // First class at or above `class_name` declaring instance variable `var`.
  const ClassDef* resolve_var(const std::string& class_name,
                              const std::string& var) const;

  // All classes strictly below `class_name` in the hierarchy (transitive).
  std::vector<const ClassDef*> subclasses_of(const std::string& class_name) const;

  // Structural equality ignores model_id (provenance, not content).
  bool structurally_equal(const ProgramModel& other) const {
    return classes == other.classes;
  }
};

struct Violation {
  std::string code;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate(const ProgramModel& model);

// Adds an empty `<init>` constructor (var_defs = own instance vars) to every
// class that lacks one. Idempotent.
ProgramModel synthesize_default_constructors(const ProgramModel& model);

}  // namespace cmdkit

#endif
