#include "hammer/features.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hammer/syntax.hpp"

namespace hammer {

namespace {

class NormPrinter {
 public:
  explicit NormPrinter(NormScheme scheme) : scheme_(scheme) {}

  std::string term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: return var(t);
      case Term::Kind::Const: return t.name();
      case Term::Kind::Abs: {
        std::string head = "(^";
        if (scheme_ == NormScheme::OneVar) head += " X.";
        else if (scheme_ == NormScheme::TypeOfVar) head += " " + type(t.bvar().type()) + ".";
        bound_.push_back(t.bvar());
        std::string body = term(t.body());
        bound_.pop_back();
        return head + " " + body + ")";
      }
      case Term::Kind::App: {
        auto [head, args] = strip_comb(t);
        std::string s = "(" + term(head);
        for (const auto& a : args) s += " " + term(a);
        return s + ")";
      }
    }
    return {};
  }

 private:
  std::string var(const Term& v) {
    switch (scheme_) {
      case NormScheme::OneVar: return "X";
      case NormScheme::TypeOfVar: return type(v.type());
      case NormScheme::DeBruijn: {
        for (std::size_t i = bound_.size(); i-- > 0;)
          if (bound_[i] == v) return "#" + std::to_string(bound_.size() - 1 - i);
        auto it = std::find(free_.begin(), free_.end(), v);
        std::size_t idx = static_cast<std::size_t>(it - free_.begin());
        if (it == free_.end()) free_.push_back(v);
        return "#" + std::to_string(bound_.size() + idx);
      }
    }
    return {};
  }

  std::string type(const Type& ty) {
    if (ty.is_var()) {
      auto it = tyvars_.find(ty.name());
      if (it == tyvars_.end()) it = tyvars_.emplace(ty.name(), type_var_name(tyvars_.size())).first;
      return it->second;
    }
    if (ty.args().empty()) return ty.name();
    std::string s = "(" + ty.name();
    for (const auto& a : ty.args()) s += " " + type(a);
    return s + ")";
  }

  static std::string type_var_name(std::size_t i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    return s;
  }

  NormScheme scheme_;
  std::vector<Term> bound_;
  std::vector<Term> free_;
  std::map<std::string, std::string> tyvars_;
};

void collect_symbols(const Term& t, std::set<std::string>& consts, std::set<std::string>& ctors) {
  auto add_type = [&](const Type& ty) {
    std::vector<std::string> cs;
    collect_type_ctors(ty, cs);
    ctors.insert(cs.begin(), cs.end());
  };
  switch (t.kind()) {
    case Term::Kind::Var: add_type(t.type()); break;
    case Term::Kind::Const:
      consts.insert(t.name());
      add_type(t.type());
      break;
    case Term::Kind::App:
      collect_symbols(t.fun(), consts, ctors);
      collect_symbols(t.arg(), consts, ctors);
      break;
    case Term::Kind::Abs:
      collect_symbols(t.bvar(), consts, ctors);
      collect_symbols(t.body(), consts, ctors);
      break;
  }
}

FeatureSet extract_schemes(const Term& statement, std::initializer_list<NormScheme> schemes) {
  std::set<std::string> consts, ctors;
  collect_symbols(statement, consts, ctors);
  std::set<std::string> out;
  for (const auto& c : ctors) out.insert("t:" + c);
  for (const auto& c : consts) out.insert("c:" + c);
  std::vector<std::string> tvs;
  collect_type_vars(statement, tvs);
  for (std::size_t i = 0; i < tvs.size(); ++i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    out.insert("v:" + s);
  }
  for (const auto& u : subterms(statement))
    for (auto scheme : schemes) out.insert("s:" + NormPrinter(scheme).term(u));
  return {out.begin(), out.end()};
}

}  // namespace

std::string normalize_print(const Term& t, NormScheme scheme) { return NormPrinter(scheme).term(t); }

FeatureSet extract(const Term& statement) {
  return extract_schemes(statement, {NormScheme::OneVar, NormScheme::DeBruijn, NormScheme::TypeOfVar});
}

FeatureSet extract(const Term& statement, NormScheme scheme) { return extract_schemes(statement, {scheme}); }

std::vector<FeatureSet> extract_all(const std::vector<Term>& statements) {
  std::vector<FeatureSet> out(statements.size());
  const long n = static_cast<long>(statements.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = extract(statements[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<FeatureSet> extract_all_serial(const std::vector<Term>& statements) {
  std::vector<FeatureSet> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(extract(s));
  return out;
}

std::string print_fea(const std::vector<std::string>& names, const std::vector<FeatureSet>& features) {
  std::string out;
  for (std::size_t i = 0; i < names.size() && i < features.size(); ++i) {
    out += "fea(" + print_fact_atom(names[i]) + ", [";
    for (std::size_t j = 0; j < features[i].size(); ++j) out += (j ? ", " : "") + print_fact_atom(features[i][j]);
    out += "]).\n";
  }
  return out;
}

std::vector<std::pair<std::string, FeatureSet>> parse_fea(std::string_view text) {
  std::vector<std::pair<std::string, FeatureSet>> out;
  for (const auto& f : parse_facts(text)) {
    if (f.functor != "fea" || f.args.size() != 2 || !f.args[0].is_atom() || !f.args[1].is_list())
      throw Error(Errc::ParseError, "line " + std::to_string(f.line) + ": expected fea(NAME, [...])");
    FeatureSet fs;
    for (const auto& item : f.args[1].items) fs.push_back(item.text);
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    out.emplace_back(f.args[0].text, std::move(fs));
  }
  return out;
}

}  // namespace hammer
