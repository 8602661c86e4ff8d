#include "hammer/fof.hpp"

#include <algorithm>
#include <set>

namespace hammer {

const FofAnnotated* FofProblem::conjecture() const {
  for (const auto& f : formulas)
    if (f.role == "conjecture") return &f;
  return nullptr;
}

std::vector<std::string> FofProblem::axiom_names() const {
  std::vector<std::string> out;
  for (const auto& f : formulas)
    if (f.role != "conjecture") out.push_back(f.name);
  return out;
}

namespace {

void note(SymbolReport& r, const std::string& name, SymbolUse use) {
  auto [it, inserted] = r.symbols.try_emplace(name, use);
  if (!inserted && !(it->second == use)) {
    std::string msg = name + " used as " + (use.predicate ? "predicate" : "function") + "/" +
                      std::to_string(use.arity) + " and " + (it->second.predicate ? "predicate" : "function") +
                      "/" + std::to_string(it->second.arity);
    if (std::find(r.conflicts.begin(), r.conflicts.end(), msg) == r.conflicts.end()) r.conflicts.push_back(msg);
  }
}

void scan_term(SymbolReport& r, const FofTerm& t) {
  if (t.is_var()) return;
  note(r, t.name, {false, t.args.size()});
  for (const auto& a : t.args) scan_term(r, a);
}

void scan_formula(SymbolReport& r, const FofFormula& f) {
  if (f.kind == FofFormula::Kind::Pred) note(r, f.name, {true, f.args.size()});
  for (const auto& a : f.args) scan_term(r, a);
  for (const auto& s : f.subs) scan_formula(r, s);
}

void term_vars(const FofTerm& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.is_var()) {
    if (!bound.count(t.name)) out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) term_vars(a, bound, out);
}

void formula_vars(const FofFormula& f, std::set<std::string> bound, std::set<std::string>& out) {
  for (const auto& a : f.args) term_vars(a, bound, out);
  bound.insert(f.vars.begin(), f.vars.end());
  for (const auto& s : f.subs) formula_vars(s, bound, out);
}

}  // namespace

SymbolReport scan_symbols(const FofProblem& p) {
  SymbolReport r;
  for (const auto& f : p.formulas) scan_formula(r, f.formula);
  return r;
}

std::vector<std::string> free_vars(const FofFormula& f) {
  std::set<std::string> out;
  formula_vars(f, {}, out);
  return {out.begin(), out.end()};
}

const std::set<std::string>& encoding_symbols() {
  static const std::set<std::string> r = {"s", "ap", "bool", "fn", "bool1"};
  return r;
}

FofFormula miniscope(const FofFormula& f) {
  using K = FofFormula::Kind;
  if (!f.is_quant()) {
    FofFormula out = f;
    for (auto& sub : out.subs) sub = miniscope(sub);
    return out;
  }
  FofFormula body = miniscope(f.subs[0]);
  K spread = f.kind == K::Forall ? K::And : K::Or;
  if (body.kind == spread) {
    FofFormula l = FofFormula::quant(f.kind, f.vars, body.subs[0]);
    FofFormula r = FofFormula::quant(f.kind, f.vars, body.subs[1]);
    return FofFormula::binary(spread, miniscope(l), miniscope(r));
  }
  auto fv = free_vars(body);
  std::vector<std::string> vars;
  for (const auto& v : f.vars)
    if (std::binary_search(fv.begin(), fv.end(), v) && std::find(vars.begin(), vars.end(), v) == vars.end())
      vars.push_back(v);
  if (body.kind == f.kind) {
    vars.insert(vars.end(), body.vars.begin(), body.vars.end());
    body = FofFormula(body.subs[0]);
  }
  return FofFormula::quant(f.kind, std::move(vars), std::move(body));
}

}  // namespace hammer
