#include "hammer/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hammer {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
  out << text;
}

// Splits `NAME_cK` into {NAME, K}.
std::optional<std::pair<std::string, std::size_t>> split_conjunct_suffix(const std::string& name) {
  auto pos = name.rfind("_c");
  if (pos == std::string::npos || pos == 0 || pos + 2 >= name.size()) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = pos + 2; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    k = k * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  return std::make_pair(name.substr(0, pos), k);
}

std::vector<std::string> atom_list(const Fact::Arg& arg, int line) {
  if (!arg.is_list()) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected a list");
  std::vector<std::string> out;
  for (const auto& item : arg.items) {
    if (!item.is_atom()) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected an atom");
    out.push_back(item.text);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> TheoremEntry::theorem_deps() const {
  std::set<std::size_t> ids;
  for (const auto& d : deps)
    for (const auto& r : d) ids.insert(r.theorem);
  return {ids.begin(), ids.end()};
}

const char* relation_name(AccessRelation r) {
  switch (r) {
    case AccessRelation::ExactDeps: return "exact";
    case AccessRelation::TransitiveDeps: return "transitive";
    case AccessRelation::LoadedTheories: return "loaded";
    case AccessRelation::LinearOrder: return "linear";
  }
  return "?";
}

std::optional<AccessRelation> parse_relation(std::string_view text) {
  for (auto r : {AccessRelation::ExactDeps, AccessRelation::TransitiveDeps, AccessRelation::LoadedTheories,
                 AccessRelation::LinearOrder})
    if (text == relation_name(r)) return r;
  return std::nullopt;
}

// --- Corpus ------------------------------------------------------------------

void Corpus::add_theory(const std::string& name, const std::vector<std::string>& parents) {
  if (parents_.count(name)) throw Error(Errc::ParseError, "duplicate theory " + name);
  for (const auto& p : parents)
    if (!parents_.count(p))
      throw Error(Errc::CycleDetected, "theory " + name + " is built before its ancestor " + p);
  theory_order_.push_back(name);
  parents_[name] = parents;
}

const std::vector<std::string>& Corpus::parents(const std::string& theory) const {
  auto it = parents_.find(theory);
  if (it == parents_.end()) throw Error(Errc::UnknownIdentifier, "unknown theory " + theory);
  return it->second;
}

void Corpus::load_tt(const std::string& theory, std::string_view text) {
  if (!parents_.count(theory)) throw Error(Errc::UnknownIdentifier, "unknown theory " + theory);
  std::size_t offset = objects_.size();
  for (auto& e : parse_tt(text, sig, theory)) {
    e.seq += offset;
    if (e.role == Role::Theorem) {
      add_theorem(theory, e.name, e.statement(), e.definition);
    } else if (e.role == Role::Conjecture) {
      conjectures_.push_back(std::move(e));
    } else {
      objects_.push_back(std::move(e));
      object_theorem_.push_back(SIZE_MAX);
    }
  }
}

void Corpus::add_declaration(ObjectEntry entry) {
  if (auto* ty = std::get_if<TypeDeclInfo>(&entry.formula)) sig.add_type(entry.name, ty->arity);
  else if (auto* c = std::get_if<ConstInfo>(&entry.formula)) sig.add_const(entry.name, *c);
  else throw Error(Errc::Usage, entry.name + " is not a declaration");
  objects_.push_back(std::move(entry));
  object_theorem_.push_back(SIZE_MAX);
}

void Corpus::add_conjecture(ObjectEntry entry) { conjectures_.push_back(std::move(entry)); }

std::size_t Corpus::add_theorem(const std::string& theory, const std::string& name, const Term& statement,
                                bool definition) {
  if (!parents_.count(theory)) throw Error(Errc::UnknownIdentifier, "unknown theory " + theory);
  if (!typecheck(statement, sig).is_bool()) throw Error(Errc::NotBoolean, name + " is not a boolean formula");
  std::size_t pos = theorems_.size();
  TheoremEntry t;
  t.id = {theory, theory_counts_[theory]++};
  t.name = name;
  t.original_name = name;
  t.statement = statement;
  t.definition = definition;
  t.conjuncts = split_conjuncts(statement);
  t.deps.resize(t.conjuncts.size());

  // The previous bearer of the name loses it.
  auto& bearers = by_original_[name];
  if (!bearers.empty()) {
    auto& prev = theorems_[bearers.back()];
    by_name_.erase(prev.name);
    prev.name = name + "~" + std::to_string(bearers.size());
    by_name_[prev.name] = bearers.back();
  }
  bearers.push_back(pos);
  by_name_[name] = pos;

  ObjectEntry obj;
  obj.name = name;
  obj.role = Role::Theorem;
  obj.formula = statement;
  obj.theory = theory;
  obj.seq = objects_.size();
  obj.definition = definition;
  objects_.push_back(std::move(obj));
  object_theorem_.push_back(pos);
  theorems_.push_back(std::move(t));
  return pos;
}

void Corpus::set_deps(std::size_t theorem, std::size_t conjunct, std::set<ConjunctRef> deps) {
  auto& t = theorems_.at(theorem);
  if (conjunct < 1 || conjunct > t.conjuncts.size())
    throw Error(Errc::UnknownIdentifier, t.name + " has no conjunct " + std::to_string(conjunct));
  for (const auto& d : deps) {
    if (d.theorem >= theorem)
      throw Error(Errc::CycleDetected, t.name + " depends on " + conjunct_name(d) + " which is not earlier");
    if (d.conjunct < 1 || d.conjunct > theorems_[d.theorem].conjuncts.size())
      throw Error(Errc::UnknownIdentifier, "no conjunct " + std::to_string(d.conjunct) + " in " +
                                               theorems_[d.theorem].name);
  }
  t.deps[conjunct - 1] = std::move(deps);
}

std::optional<std::size_t> Corpus::find(const std::string& name, std::size_t before) const {
  if (auto it = by_name_.find(name); it != by_name_.end() && it->second < before) return it->second;
  if (auto it = by_original_.find(name); it != by_original_.end()) {
    for (auto p = it->second.rbegin(); p != it->second.rend(); ++p)
      if (*p < before) return *p;
  }
  return std::nullopt;
}

std::vector<ConjunctRef> Corpus::resolve(const std::string& name, std::size_t before) const {
  std::vector<ConjunctRef> out;
  if (auto i = find(name, before)) {
    for (std::size_t k = 1; k <= theorems_[*i].conjuncts.size(); ++k) out.push_back({*i, k});
    return out;
  }
  if (auto split = split_conjunct_suffix(name)) {
    if (auto i = find(split->first, before)) {
      if (split->second < 1 || split->second > theorems_[*i].conjuncts.size())
        throw Error(Errc::UnknownIdentifier, name + ": " + split->first + " has " +
                                                 std::to_string(theorems_[*i].conjuncts.size()) + " conjuncts");
      out.push_back({*i, split->second});
      return out;
    }
  }
  throw Error(Errc::UnknownIdentifier, "unknown theorem " + name);
}

std::string Corpus::conjunct_name(const ConjunctRef& ref) const {
  return theorems_.at(ref.theorem).name + "_c" + std::to_string(ref.conjunct);
}

void Corpus::load_deps(const std::string& theory, std::string_view text) {
  for (const auto& f : parse_facts(text)) {
    if (f.functor != "deps" || f.args.size() != 2 || !f.args[0].is_atom())
      throw Error(Errc::ParseError, "line " + std::to_string(f.line) + ": expected deps(NAME, [...])");
    auto targets = resolve(f.args[0].text);
    std::set<ConjunctRef> deps;
    for (const auto& d : atom_list(f.args[1], f.line))
      for (const auto& r : resolve(d, targets.front().theorem)) deps.insert(r);
    for (const auto& t : targets) {
      if (theorems_[t.theorem].id.theory != theory)
        throw Error(Errc::UnknownIdentifier, f.args[0].text + " is not a theorem of " + theory);
      set_deps(t.theorem, t.conjunct, deps);
    }
  }
}

std::string Corpus::deps_text(const std::string& theory) const {
  std::string out;
  for (std::size_t i = 0; i < theorems_.size(); ++i) {
    const auto& t = theorems_[i];
    if (t.id.theory != theory) continue;
    for (std::size_t k = 1; k <= t.deps.size(); ++k) {
      const auto& d = t.deps[k - 1];
      if (d.empty()) continue;
      out += "deps(" + print_fact_atom(conjunct_name({i, k})) + ", [";
      bool first = true;
      for (const auto& r : d) {
        if (!first) out += ", ";
        first = false;
        out += print_fact_atom(conjunct_name(r));
      }
      out += "]).\n";
    }
  }
  return out;
}

std::string Corpus::thy_text() const {
  std::string out;
  for (const auto& th : theory_order_) {
    out += "theory(" + print_fact_atom(th) + ", [";
    const auto& ps = parents_.at(th);
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + print_fact_atom(ps[i]);
    out += "]).\n";
  }
  return out;
}

std::string Corpus::tt_text(const std::string& theory) const {
  std::string out;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].theory != theory) continue;
    if (object_theorem_[i] != SIZE_MAX) {
      ObjectEntry e = objects_[i];
      e.name = theorems_[object_theorem_[i]].name;
      out += print_tt(e) + "\n";
    } else {
      out += print_tt(objects_[i]) + "\n";
    }
  }
  for (const auto& c : conjectures_)
    if (c.theory == theory) out += print_tt(c) + "\n";
  return out;
}

Corpus load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::Io, dir.string() + " is not a directory");
  std::vector<fs::path> thy;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".thy") thy.push_back(e.path());
  if (thy.size() != 1)
    throw Error(Errc::Io, dir.string() + ": expected exactly one .thy file, found " + std::to_string(thy.size()));

  Corpus c;
  for (const auto& f : parse_facts(read_file(thy[0]))) {
    if (f.functor != "theory" || f.args.empty() || f.args.size() > 2 || !f.args[0].is_atom())
      throw Error(Errc::ParseError, thy[0].string() + ":" + std::to_string(f.line) + ": expected theory(NAME, [...])");
    c.add_theory(f.args[0].text, f.args.size() == 2 ? atom_list(f.args[1], f.line) : std::vector<std::string>{});
  }
  for (const auto& th : c.theories()) {
    fs::path tt = dir / (th + ".tt");
    try {
      c.load_tt(th, read_file(tt));
    } catch (const Error& e) {
      throw Error(e.code(), tt.string() + ": " + e.what());
    }
  }
  // Dependencies may point into later-loaded files only if they were
  // misordered; every theory is loaded before any sidecar is read.
  for (const auto& th : c.theories()) {
    fs::path deps = dir / (th + ".deps");
    if (!fs::exists(deps)) continue;
    try {
      c.load_deps(th, read_file(deps));
    } catch (const Error& e) {
      throw Error(e.code(), deps.string() + ": " + e.what());
    }
  }
  return c;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "corpus.thy", corpus.thy_text());
  for (const auto& th : corpus.theories()) {
    write_file(dir / (th + ".tt"), corpus.tt_text(th));
    std::string deps = corpus.deps_text(th);
    if (!deps.empty()) write_file(dir / (th + ".deps"), deps);
  }
}

std::map<TheoremId, std::string> rename_overwritten(const std::vector<std::pair<std::string, TheoremId>>& events) {
  std::map<std::string, std::size_t> total;
  for (const auto& [name, id] : events) ++total[name];
  std::map<std::string, std::size_t> seen;
  std::map<TheoremId, std::string> out;
  for (const auto& [name, id] : events) {
    std::size_t gen = ++seen[name];
    out[id] = gen == total[name] ? name : name + "~" + std::to_string(gen);
  }
  return out;
}

// --- qualification -----------------------------------------------------------

namespace {

struct Renaming {
  std::map<std::string, std::string> types;
  std::map<std::string, std::string> consts;

  Type type(const Type& ty) const {
    if (ty.is_var()) return ty;
    std::vector<Type> args;
    for (const auto& a : ty.args()) args.push_back(type(a));
    if (ty.is_fun()) return Type::fun(args[0], args[1]);
    auto it = types.find(ty.name());
    return Type::app(it == types.end() ? ty.name() : it->second, std::move(args));
  }

  Term term(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Var: return Term::var(t.name(), type(t.type()));
      case Term::Kind::Const: {
        std::vector<Type> inst;
        for (const auto& i : t.inst()) inst.push_back(type(i));
        auto it = consts.find(t.name());
        return Term::constant(it == consts.end() ? t.name() : it->second, std::move(inst), type(t.type()));
      }
      case Term::Kind::App: return Term::app(term(t.fun()), term(t.arg()));
      case Term::Kind::Abs: return Term::abs(term(t.bvar()), term(t.body()));
    }
    return t;
  }
};

std::string qualified(const std::string& ns, const std::string& theory, const std::string& name) {
  std::string prefix = ns + "/" + theory + "/";
  return name.rfind(prefix, 0) == 0 ? name : prefix + name;
}

}  // namespace

Corpus qualify(const Corpus& corpus, const std::string& ns) {
  Renaming ren;
  for (const auto& o : corpus.objects()) {
    if (std::holds_alternative<TypeDeclInfo>(o.formula) && !corpus.sig.is_builtin_type(o.name))
      ren.types[o.name] = qualified(ns, o.theory, o.name);
    else if (std::holds_alternative<ConstInfo>(o.formula) && !corpus.sig.is_builtin_const(o.name))
      ren.consts[o.name] = qualified(ns, o.theory, o.name);
  }

  // Overwrites count within a theory only; the prefix separates theories.
  std::map<std::string, std::vector<std::pair<std::string, TheoremId>>> events;
  for (const auto& t : corpus.theorems()) events[t.id.theory].push_back({t.original_name, t.id});
  std::map<TheoremId, std::string> local;
  for (const auto& [th, ev] : events) local.merge(rename_overwritten(ev));

  Corpus out;
  for (const auto& th : corpus.theories()) out.add_theory(th, corpus.parents(th));
  std::size_t next_theorem = 0;
  for (const auto& o : corpus.objects()) {
    if (o.role == Role::Theorem) {
      const auto& t = corpus.theorem(next_theorem++);
      out.add_theorem(t.id.theory, qualified(ns, t.id.theory, local.at(t.id)), ren.term(t.statement), t.definition);
      continue;
    }
    ObjectEntry e = o;
    e.name = qualified(ns, o.theory, o.name);
    if (auto* c = std::get_if<ConstInfo>(&e.formula)) c->type = ren.type(c->type);
    out.add_declaration(std::move(e));
  }
  for (const auto& c : corpus.conjectures()) {
    ObjectEntry e = c;
    e.name = qualified(ns, c.theory, c.name);
    e.formula = ren.term(c.statement());
    out.add_conjecture(std::move(e));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t k = 1; k <= corpus.theorem(i).deps.size(); ++k)
      out.set_deps(i, k, corpus.theorem(i).deps[k - 1]);
  return out;
}

// --- accessibility -----------------------------------------------------------

std::vector<std::size_t> accessible_set(const Corpus& corpus, std::size_t target, AccessRelation relation) {
  if (target >= corpus.size()) throw Error(Errc::UnknownTheorem, "no theorem at position " + std::to_string(target));
  switch (relation) {
    case AccessRelation::ExactDeps: return corpus.theorem(target).theorem_deps();
    case AccessRelation::TransitiveDeps: {
      std::vector<char> seen(target, 0);
      std::vector<std::size_t> stack = corpus.theorem(target).theorem_deps();
      while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        if (seen[i]) continue;
        seen[i] = 1;
        for (std::size_t d : corpus.theorem(i).theorem_deps()) stack.push_back(d);
      }
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < target; ++i)
        if (seen[i]) out.push_back(i);
      return out;
    }
    case AccessRelation::LoadedTheories: {
      std::set<std::string> loaded;
      std::vector<std::string> stack = {corpus.theorem(target).id.theory};
      while (!stack.empty()) {
        std::string th = stack.back();
        stack.pop_back();
        if (!loaded.insert(th).second) continue;
        for (const auto& p : corpus.parents(th)) stack.push_back(p);
      }
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < target; ++i)
        if (loaded.count(corpus.theorem(i).id.theory)) out.push_back(i);
      return out;
    }
    case AccessRelation::LinearOrder: {
      std::vector<std::size_t> out(target);
      for (std::size_t i = 0; i < target; ++i) out[i] = i;
      return out;
    }
  }
  return {};
}

std::vector<std::size_t> linear_order(const Corpus& corpus) {
  std::map<std::string, std::size_t> theory_pos;
  for (std::size_t i = 0; i < corpus.theories().size(); ++i) theory_pos[corpus.theories()[i]] = i;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& t = corpus.theorem(i);
    if (i > 0 && theory_pos.at(corpus.theorem(i - 1).id.theory) > theory_pos.at(t.id.theory))
      throw Error(Errc::CycleDetected, t.name + " appears after a theory built later");
    for (std::size_t d : t.theorem_deps())
      if (d >= i) throw Error(Errc::CycleDetected, t.name + " depends on the later theorem " + corpus.theorem(d).name);
    order.push_back(i);
  }
  return order;
}

}  // namespace hammer
