//===-- merge.hpp - Joint constraint problems over rule pairs ---*- C++ -*-===//
//
// Rules are extracted independently, so their symbols must be renamed before
// they can share a problem. Locals become "<rule>:x", inputs "<app>:x".
// Attributes that observe an environment feature collapse onto one
// "env.<feature>" variable (unless unification is off); other attributes
// become "dev:<device>.<attr>". On the post side of a joint problem, every
// variable an action changed carries a trailing "'".
//
//===----------------------------------------------------------------------===//
#pragma once

#include "hg/catalog.hpp"
#include "hg/rules.hpp"
#include "hg/solver.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hg {

struct MergeOptions {
  bool unifyEnvironment = true;
};

enum class Side { Pre, Post };

/// Finite domain of a catalog feature.
inline Domain feature_domain(const FeatureSpec& f) {
  if (!f.numeric()) return Domain::enumeration(f.values);
  return Domain::range(f.lo, f.hi);
}

/// Domain of an attribute that observes no feature, or nullopt for open strings.
inline std::optional<Domain> attribute_domain(const AttributeSpec& a) {
  switch (a.sort) {
    case Sort::Bool: return Domain::boolean();
    case Sort::Int:
      if (a.range) return Domain::range(a.range->first, a.range->second);
      return Domain::range(-kDefaultIntBound, kDefaultIntBound);
    case Sort::Str:
      if (a.values.empty()) return std::nullopt;
      return Domain::enumeration(a.values);
  }
  return std::nullopt;
}

class ProblemBuilder {
 public:
  explicit ProblemBuilder(const Catalog& cat, MergeOptions opts = {}) : cat_(cat), opts_(opts) {}

  /// Base name of an attribute variable, before any post-side prime.
  std::string attr_name(const Rule& r, const std::string& device, const std::string& attribute) {
    const AttributeSpec* spec = attr_spec(r, device, attribute);
    if (opts_.unifyEnvironment && spec && !spec->feature.empty()) {
      if (const auto* f = cat_.feature(spec->feature)) {
        std::string name = "env." + f->name;
        declare(name, spec->sort, feature_domain(*f));
        return name;
      }
    }
    std::string id = r.device_id(device);
    if (id.empty()) id = r.app + ":" + device;
    std::string name = "dev:" + id + "." + attribute;
    declare(name, spec ? spec->sort : Sort::Str, spec ? attribute_domain(*spec) : std::nullopt);
    return name;
  }

  /// The feature variable for `feature`, declaring it if needed.
  std::string feature_name(const std::string& feature) {
    const auto* f = cat_.feature(feature);
    if (!f) throw Error("DanglingFeature", "unknown feature '" + feature + "'");
    std::string name = "env." + feature;
    declare(name, f->numeric() ? Sort::Int : Sort::Str, feature_domain(*f));
    return name;
  }

  /// Marks a variable as changed between the pre and post states.
  void affect(const std::string& base) { affected_.insert(base); }
  bool affected(const std::string& base) const { return affected_.count(base) != 0; }

  /// Post-side name of `base`: primed when an action changed it.
  std::string at(const std::string& base, Side side) {
    if (side == Side::Pre || !affected_.count(base)) return base;
    std::string primed = base + "'";
    if (!pending_.count(primed)) pending_[primed] = pending_.at(base);
    order(primed);
    return primed;
  }

  Term rename(const Rule& r, const Term& t, Side side) {
    return substitute(t, [&](const Term& v) -> std::optional<Term> {
      switch (v.kind) {
        case Term::Kind::Local: {
          std::string n = r.id + ":" + v.text;
          declare(n, v.sort, std::nullopt);
          return Term::local(n, v.sort);
        }
        case Term::Kind::Input: {
          // Configured values go in as constants so products with them stay linear.
          if (auto c = bound_value(r, v.text)) return Term::constant(*c);
          std::string n = r.app + ":" + v.text;
          declare(n, v.sort, std::nullopt);
          return Term::local(n, v.sort);
        }
        case Term::Kind::Attr:
          return Term::local(at(attr_name(r, v.text, v.attr), side), v.sort);
        case Term::Kind::Event:
          return Term::local(at(attr_name(r, r.trigger.subject, r.trigger.attribute), side), v.sort);
        default: return std::nullopt;
      }
    });
  }

  void add(const Rule& r, const ConstraintLit& l, Side side) {
    ConstraintLit renamed{rename(r, l.lhs, side), l.op, rename(r, l.rhs, side)};
    note_constants(renamed);
    constraints_.push_back(std::move(renamed));
    provenance_.push_back(r.id);
  }

  /// A literal over already-renamed variables, e.g. an action's effect.
  void add_raw(const ConstraintLit& l, const std::string& origin) {
    note_constants(l);
    constraints_.push_back(l);
    provenance_.push_back(origin);
  }

  void add_trigger(const Rule& r, Side side) {
    for (const auto& l : r.trigger.constraint) add(r, l, side);
  }

  void add_condition(const Rule& r, Side side) {
    for (const auto& d : r.condition.data) add(r, d.as_literal(), side);
    for (const auto& l : r.condition.predicates) add(r, l, side);
  }

  void add_action_data(const Rule& r, Side side) {
    for (const auto& d : r.action.data) add(r, d.as_literal(), side);
  }

  Problem build() const {
    Problem p;
    std::size_t open = 0;
    for (const auto& name : order_)
      if (!pending_.at(name).domain && pending_.at(name).sort == Sort::Str) ++open;
    std::vector<std::string> strs(strings_.begin(), strings_.end());
    for (std::size_t i = 1; i <= std::max<std::size_t>(open, 1); ++i) strs.push_back("#other" + std::to_string(i));
    for (const auto& name : order_) {
      const auto& v = pending_.at(name);
      Domain d;
      if (v.domain)
        d = *v.domain;
      else if (v.sort == Sort::Int)
        d = Domain::range(-kDefaultIntBound, kDefaultIntBound);
      else if (v.sort == Sort::Bool)
        d = Domain::boolean();
      else
        d = Domain::enumeration(strs);
      p.vars.push_back({name, std::move(d)});
    }
    p.constraints = constraints_;
    p.provenance = provenance_;
    return p;
  }

 private:
  static std::optional<Value> bound_value(const Rule& r, const std::string& input) {
    for (const auto* data : {&r.condition.data, &r.action.data})
      for (const auto& d : *data)
        if (d.target.kind == Term::Kind::Input && d.target.text == input)
          if (auto c = d.source.const_value()) return c;
    return std::nullopt;
  }

  struct PendingVar {
    Sort sort = Sort::Int;
    std::optional<Domain> domain;
  };

  const AttributeSpec* attr_spec(const Rule& r, const std::string& device, const std::string& attribute) const {
    auto it = r.capabilities.find(device);
    if (it == r.capabilities.end()) return nullptr;
    const auto* cap = cat_.capability(it->second);
    return cap ? cap->attribute(attribute) : nullptr;
  }

  void declare(const std::string& name, Sort sort, std::optional<Domain> domain) {
    if (pending_.count(name)) return;
    pending_[name] = {sort, std::move(domain)};
    order(name);
  }

  void order(const std::string& name) {
    if (std::find(order_.begin(), order_.end(), name) == order_.end()) order_.push_back(name);
  }

  void note_constants(const ConstraintLit& l) {
    auto visit = [&](const Term& t, auto&& self) -> void {
      if (t.kind == Term::Kind::StrConst) strings_.insert(t.text);
      for (const auto& a : t.args) self(a, self);
    };
    visit(l.lhs, visit);
    visit(l.rhs, visit);
  }

  const Catalog& cat_;
  MergeOptions opts_;
  std::map<std::string, PendingVar> pending_;
  std::vector<std::string> order_;
  std::set<std::string> affected_;
  std::set<std::string> strings_;
  std::vector<ConstraintLit> constraints_;
  std::vector<std::string> provenance_;
};

}  // namespace hg
