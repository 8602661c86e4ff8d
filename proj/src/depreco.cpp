#include "hammer/depreco.hpp"

#include <fstream>
#include <sstream>

namespace hammer {

std::string dep_id_str(const DepId& id) {
  std::string s = id.theorem.theory + ":" + std::to_string(id.theorem.seq);
  if (!id.path.empty()) s += "." + path_str(id.path);
  return s;
}

DepTree DepTree::node(DepTree l, DepTree r) {
  DepTree t;
  t.children.push_back(std::move(l));
  t.children.push_back(std::move(r));
  return t;
}

std::string tree_str(const DepTree& t) {
  if (!t.is_leaf()) return "Tree(" + tree_str(t.children[0]) + "," + tree_str(t.children[1]) + ")";
  std::string s = "[";
  bool first = true;
  for (const auto& id : t.ids) {
    if (!first) s += ",";
    first = false;
    s += dep_id_str(id);
  }
  return s + "]";
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Thm: return "THM";
    case Rule::Axiom: return "AXIOM";
    case Rule::Oracle: return "ORACLE";
    case Rule::Conj: return "CONJ";
    case Rule::Conjunct1: return "CONJUNCT1";
    case Rule::Conjunct2: return "CONJUNCT2";
    case Rule::Gen: return "GEN";
    case Rule::Spec: return "SPEC";
    case Rule::Subst: return "SUBST";
    case Rule::Other: return "OTHER";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view text) {
  for (auto r : {Rule::Thm, Rule::Axiom, Rule::Oracle, Rule::Conj, Rule::Conjunct1, Rule::Conjunct2, Rule::Gen,
                 Rule::Spec, Rule::Subst, Rule::Other})
    if (text == rule_name(r)) return r;
  return std::nullopt;
}

DepTree passed_deps(const Tag& tag) {
  if (tag.dependency_id) return DepTree::leaf({*tag.dependency_id});
  return tag.deps;
}

namespace {

void collect_ids(const DepTree& t, std::set<DepId>& out) {
  out.insert(t.ids.begin(), t.ids.end());
  for (const auto& c : t.children) collect_ids(c, out);
}

DepTree add_to_leaves(const DepTree& t, const std::set<DepId>& ids) {
  if (t.is_leaf()) {
    DepTree l = t;
    l.ids.insert(ids.begin(), ids.end());
    return l;
  }
  return DepTree::node(add_to_leaves(t.children[0], ids), add_to_leaves(t.children[1], ids));
}

void check_arity(Rule rule, const std::vector<Tag>& premises, std::size_t n) {
  if (premises.size() != n)
    throw Error(Errc::Usage, std::string(rule_name(rule)) + " expects " + std::to_string(n) + " premise(s), got " +
                                 std::to_string(premises.size()));
}

}  // namespace

std::set<DepId> all_ids(const DepTree& tree) {
  std::set<DepId> out;
  collect_ids(tree, out);
  return out;
}

DepTree flatten(const DepTree& tree) { return DepTree::leaf(all_ids(tree)); }

Tag step_tag(Rule rule, const std::vector<Tag>& premises, const std::vector<SubstVar>& subst,
             bool* branch_missing) {
  Tag out;
  for (const auto& p : premises) {
    out.oracles.insert(p.oracles.begin(), p.oracles.end());
    out.axioms.insert(p.axioms.begin(), p.axioms.end());
  }
  switch (rule) {
    case Rule::Conj:
      check_arity(rule, premises, 2);
      out.deps = DepTree::node(passed_deps(premises[0]), passed_deps(premises[1]));
      return out;
    case Rule::Conjunct1:
    case Rule::Conjunct2: {
      check_arity(rule, premises, 1);
      const Tag& p = premises[0];
      Side side = rule == Rule::Conjunct1 ? Side::Left : Side::Right;
      if (p.dependency_id) {
        DepId id = *p.dependency_id;
        id.path.push_back(side);
        out.dependency_id = id;
        out.deps = p.deps.is_leaf() ? p.deps : p.deps.children[side == Side::Left ? 0 : 1];
      } else if (!p.deps.is_leaf()) {
        out.deps = p.deps.children[side == Side::Left ? 0 : 1];
      } else {
        if (branch_missing) *branch_missing = true;
        out.deps = flatten(p.deps);
      }
      return out;
    }
    case Rule::Gen:
    case Rule::Spec:
      check_arity(rule, premises, 1);
      return premises[0];
    case Rule::Subst: {
      if (premises.empty() || premises.size() != subst.size() + 1)
        throw Error(Errc::Usage, "SUBST expects a theorem plus one equation per template variable");
      std::set<DepId> eq_ids;
      bool predicate = false;
      for (std::size_t i = 1; i < premises.size(); ++i) {
        auto ids = all_ids(passed_deps(premises[i]));
        eq_ids.insert(ids.begin(), ids.end());
        predicate = predicate || subst[i - 1].predicate;
      }
      DepTree base = passed_deps(premises[0]);
      if (predicate) {
        auto ids = all_ids(base);
        ids.insert(eq_ids.begin(), eq_ids.end());
        out.deps = DepTree::leaf(std::move(ids));
      } else {
        out.deps = add_to_leaves(base, eq_ids);
      }
      return out;
    }
    case Rule::Thm:
    case Rule::Axiom:
    case Rule::Oracle:
    case Rule::Other: {
      std::set<DepId> ids;
      for (const auto& p : premises) {
        auto s = all_ids(passed_deps(p));
        ids.insert(s.begin(), s.end());
      }
      out.deps = DepTree::leaf(std::move(ids));
      return out;
    }
  }
  return out;
}

std::vector<std::set<ConjunctId>> recover_conjunct_deps(const Term& statement, const DepTree& tree,
                                                       const ConjunctLookup& lookup) {
  auto expand = [&](const DepId& id, std::set<ConjunctId>& out) {
    auto it = lookup.find(id.theorem);
    if (it == lookup.end()) throw Error(Errc::UnknownIdentifier, "unknown theorem identifier " + dep_id_str(id));
    const auto& addrs = it->second;
    bool any = false;
    for (const auto& a : addrs) {
      if (a.path.size() >= id.path.size() && std::equal(id.path.begin(), id.path.end(), a.path.begin())) {
        out.insert({id.theorem, a.index});
        any = true;
      }
    }
    if (any) return;
    // Virtual conjunction: the conjunct whose address is a prefix of the path.
    for (const auto& a : addrs) {
      if (a.path.size() <= id.path.size() && std::equal(a.path.begin(), a.path.end(), id.path.begin())) {
        out.insert({id.theorem, a.index});
        return;
      }
    }
    throw Error(Errc::UnknownIdentifier, "no conjunct of " + dep_id_str(id));
  };

  std::vector<std::set<ConjunctId>> out;
  for (const auto& c : split_conjuncts(statement)) {
    const DepTree* t = &tree;
    for (Side s : c.address.path) {
      if (t->is_leaf()) break;
      t = &t->children[s == Side::Left ? 0 : 1];
    }
    std::set<ConjunctId> deps;
    for (const auto& id : all_ids(*t)) expand(id, deps);
    out.push_back(std::move(deps));
  }
  return out;
}

// --- traces ------------------------------------------------------------------

std::vector<TraceStep> parse_trace(std::string_view text, const std::string& default_theory) {
  std::vector<TraceStep> out;
  std::string theory = default_theory;
  for (const auto& f : parse_facts(text)) {
    auto bad = [&](const std::string& msg) {
      return Error(Errc::ParseError, "line " + std::to_string(f.line) + ": " + msg);
    };
    if (f.functor == "theory") {
      if (f.args.size() != 1 || !f.args[0].is_atom()) throw bad("expected theory(NAME)");
      theory = f.args[0].text;
      continue;
    }
    if (f.functor != "step" || f.args.size() < 4 || f.args.size() > 5) throw bad("expected step(LABEL, RULE, [...], PAYLOAD[, NAME])");
    TraceStep s;
    s.line = f.line;
    s.theory = theory;
    if (!f.args[0].is_atom() || !f.args[1].is_atom()) throw bad("label and rule must be atoms");
    s.label = f.args[0].text;
    auto rule = parse_rule(f.args[1].text);
    if (!rule) throw bad("unknown rule " + f.args[1].text);
    s.rule = *rule;
    if (!f.args[2].is_list()) throw bad("premises must be a list");
    for (const auto& p : f.args[2].items) {
      if (!p.is_atom()) throw bad("premise labels must be atoms");
      s.premises.push_back(p.text);
    }
    const auto& payload = f.args[3];
    if (s.rule == Rule::Subst) {
      if (!payload.is_list()) throw bad("SUBST payload must be a list of VAR:term or VAR:pred");
      for (const auto& item : payload.items) {
        auto colon = item.text.rfind(':');
        if (!item.is_atom() || colon == std::string::npos) throw bad("bad SUBST variable " + item.text);
        std::string kind = item.text.substr(colon + 1);
        if (kind != "term" && kind != "pred") throw bad("SUBST variable kind must be term or pred");
        s.subst.push_back({item.text.substr(0, colon), kind == "pred"});
      }
    } else {
      if (!payload.is_atom()) throw bad("payload must be an atom");
      s.payload = payload.text;
    }
    if (f.args.size() == 5) {
      if (!f.args[4].is_atom()) throw bad("theorem name must be an atom");
      s.name = f.args[4].text;
    }
    out.push_back(std::move(s));
  }
  return out;
}

const Tag& Replayer::tag(const std::string& label) const {
  auto it = labels_.find(label);
  if (it == labels_.end()) throw Error(Errc::UnknownIdentifier, "undefined label " + label);
  return it->second;
}

void Replayer::run(const std::vector<TraceStep>& steps) {
  for (const auto& s : steps) {
    auto where = [&] { return "line " + std::to_string(s.line) + " (" + s.label + "): "; };
    std::vector<Tag> premises;
    for (const auto& p : s.premises) {
      auto it = labels_.find(p);
      if (it == labels_.end()) throw Error(Errc::UnknownIdentifier, where() + "undefined label " + p);
      premises.push_back(it->second);
    }
    Tag result;
    if (s.rule == Rule::Thm) {
      if (auto it = names_.find(s.payload); it != names_.end()) {
        for (const auto& r : named_)
          if (r.id == it->second) result = {DepId{r.id, {}}, r.tree, r.oracles, r.axioms};
      } else if (auto pos = corpus_ ? corpus_->find(s.payload) : std::nullopt) {
        result.dependency_id = DepId{corpus_->theorem(*pos).id, {}};
      } else {
        throw Error(Errc::UnknownIdentifier, where() + "unknown theorem " + s.payload);
      }
    } else if (s.rule == Rule::Axiom) {
      result.axioms.insert(s.payload);
    } else if (s.rule == Rule::Oracle) {
      result.oracles.insert(s.payload);
    } else {
      bool missing = false;
      try {
        result = step_tag(s.rule, premises, s.subst, &missing);
      } catch (const Error& e) {
        throw Error(e.code(), where() + e.what());
      }
      if (missing) warnings_.push_back(where() + rule_name(s.rule) + " on an unnamed leaf; flattened");
    }
    if (s.name) {
      TheoremId id{s.theory, counts_[s.theory]++};
      NamedRecord rec{id, *s.name, passed_deps(result), result.oracles, result.axioms};
      result = {DepId{id, {}}, rec.tree, rec.oracles, rec.axioms};
      names_[*s.name] = id;
      named_.push_back(std::move(rec));
    }
    labels_[s.label] = std::move(result);
  }
}

std::size_t apply_recovered(Corpus& corpus, const Replayer& replay) {
  std::map<TheoremId, std::size_t> by_id;
  ConjunctLookup lookup;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& t = corpus.theorem(i);
    by_id[t.id] = i;
    auto& addrs = lookup[t.id];
    for (const auto& c : t.conjuncts) addrs.push_back(c.address);
  }
  std::size_t updated = 0;
  for (const auto& rec : replay.named()) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end() || corpus.theorem(it->second).original_name != rec.name)
      throw Error(Errc::UnknownIdentifier, "named theorem " + rec.name + " (" + rec.id.theory + ":" +
                                               std::to_string(rec.id.seq) + ") does not match the corpus");
    std::size_t pos = it->second;
    auto recovered = recover_conjunct_deps(corpus.theorem(pos).statement, rec.tree, lookup);
    for (std::size_t k = 0; k < recovered.size(); ++k) {
      std::set<ConjunctRef> refs;
      for (const auto& c : recovered[k]) refs.insert({by_id.at(c.theorem), c.conjunct});
      corpus.set_deps(pos, k + 1, std::move(refs));
    }
    ++updated;
  }
  return updated;
}

std::size_t replay_corpus_traces(Corpus& corpus, const std::filesystem::path& dir) {
  Replayer replay(&corpus);
  std::size_t read = 0;
  for (const auto& th : corpus.theories()) {
    auto path = dir / (th + ".trace");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      replay.run(parse_trace(ss.str(), th));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
    ++read;
  }
  apply_recovered(corpus, replay);
  return read;
}

}  // namespace hammer
