#include <cctype>

#include "hammer/syntax.hpp"

namespace hammer {

namespace {

bool atom_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '[' && c != ']' &&
         c != ',' && c != '\'' && c != '%';
}

class FactReader {
 public:
  explicit FactReader(std::string_view src) : src_(src) {}

  std::vector<Fact> run() {
    std::vector<Fact> out;
    for (;;) {
      skip();
      if (pos_ >= src_.size()) return out;
      Fact f;
      f.line = line_;
      Fact::Arg head = term();
      if (head.kind == Fact::Arg::Kind::List) fail("expected a fact");
      f.functor = head.text;
      f.args = std::move(head.items);
      skip();
      if (pos_ >= src_.size() || src_[pos_] != '.') fail("expected '.'");
      ++pos_;
      out.push_back(std::move(f));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, "line " + std::to_string(line_) + ": " + msg);
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<Fact::Arg> sequence(char close) {
    std::vector<Fact::Arg> items;
    if (eat(close)) return items;
    do {
      items.push_back(term());
    } while (eat(','));
    if (!eat(close)) fail(std::string("expected '") + close + "'");
    return items;
  }

  std::string atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (src_[pos_] == '\'') {
      ++pos_;
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '\'') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
        if (src_[pos_] == '\n') ++line_;
        s += src_[pos_++];
      }
      if (pos_ >= src_.size()) fail("unterminated quoted atom");
      ++pos_;
      return s;
    }
    std::size_t start = pos_;
    while (pos_ < src_.size() && atom_char(src_[pos_])) ++pos_;
    // A final '.' belongs to the fact terminator.
    while (pos_ > start && src_[pos_ - 1] == '.' && (pos_ == src_.size() || !atom_char(src_[pos_]))) --pos_;
    if (pos_ == start) fail("expected an atom");
    return std::string(src_.substr(start, pos_ - start));
  }

  Fact::Arg term() {
    Fact::Arg a;
    if (eat('[')) {
      a.kind = Fact::Arg::Kind::List;
      a.items = sequence(']');
      return a;
    }
    a.text = atom();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      ++pos_;
      a.kind = Fact::Arg::Kind::Compound;
      a.items = sequence(')');
    }
    return a;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::vector<Fact> parse_facts(std::string_view text) { return FactReader(text).run(); }

std::string print_fact_atom(std::string_view atom) {
  bool bare = !atom.empty() && atom.back() != '.';
  for (char c : atom) bare = bare && atom_char(c);
  if (bare) return std::string(atom);
  std::string out = "'";
  for (char c : atom) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace hammer
