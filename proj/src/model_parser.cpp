#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vpn/error.hpp"
#include "vpn/model_io.hpp"

namespace vpn {

std::string Diagnostic::to_string() const {
  if (line == 0) return message;
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

namespace {

struct Fail {
  std::size_t column;
  std::string message;
};

struct Tok {
  enum Kind { Ident, Number, Punct, End } kind;
  std::string text;
  std::size_t col;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Tok> lex(std::string_view line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (ident_char(c)) {
      std::size_t j = i;
      bool digits = true;
      while (j < line.size() && ident_char(line[j])) {
        digits = digits && std::isdigit(static_cast<unsigned char>(line[j]));
        ++j;
      }
      out.push_back({digits ? Tok::Number : Tok::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (i + 1 < line.size()) {
      std::string_view two = line.substr(i, 2);
      if (two == "->" || two == "!=") {
        out.push_back({Tok::Punct, std::string(two), col});
        i += 2;
        continue;
      }
    }
    if (std::string_view("<>,{}()=*+-:").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), col});
      ++i;
      continue;
    }
    throw Fail{col, std::string("unexpected character '") + c + "'"};
  }
  out.push_back({Tok::End, "", line.size() + 1});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  const Tok& peek() const { return toks_[pos_]; }
  const Tok& next() {
    const Tok& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text) const {
    return (peek().kind == Tok::Punct || peek().kind == Tok::Ident) && peek().text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail("expected '" + std::string(text) + "'");
  }
  const Tok& expect_ident(const char* what = "identifier") {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next();
  }
  std::uint32_t expect_number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    const Tok& t = next();
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) throw Fail{t.col, "number out of range"};
    return v;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(std::string msg) const {
    std::string got = at_end() ? "end of line" : "'" + peek().text + "'";
    throw Fail{peek().col, msg + ", got " + got};
  }

 private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

// Term resolution against the universe. `eps` is implicitly a constant.
Term resolve_term(Net* mut, const Net& net, const Tok& t) {
  Symbol s = Symbol::intern(t.text);
  if (net.is_variable(s)) return Term::variable(s);
  if (net.is_constant(s)) return Term::constant(s);
  if (s == epsilon()) {
    if (mut) mut->declare_constant(s);
    return Term::constant(s);
  }
  throw Fail{t.col, "unresolved reference '" + t.text + "'"};
}

Symbol resolve_constant(Net* mut, const Net& net, const Tok& t) {
  Term term = resolve_term(mut, net, t);
  if (term.is_var) throw Fail{t.col, "'" + t.text + "' is a variable, expected a constant"};
  return term.sym;
}

Guard parse_or(Cursor& c, Net* mut, const Net& net);

Guard parse_primary(Cursor& c, Net* mut, const Net& net) {
  if (c.accept("not")) return Guard::negate(parse_primary(c, mut, net));
  if (c.accept("(")) {
    Guard g = parse_or(c, mut, net);
    c.expect(")");
    return g;
  }
  if (c.accept("true")) return Guard::truth();
  const Tok& a = c.expect_ident("guard term");
  Term lhs = resolve_term(mut, net, a);
  bool eq;
  if (c.accept("=")) {
    eq = true;
  } else if (c.accept("!=")) {
    eq = false;
  } else {
    c.fail("expected '=' or '!='");
  }
  Term rhs = resolve_term(mut, net, c.expect_ident("guard term"));
  return eq ? Guard::eq(lhs, rhs) : Guard::neq(lhs, rhs);
}

Guard parse_and(Cursor& c, Net* mut, const Net& net) {
  Guard g = parse_primary(c, mut, net);
  while (c.accept("and")) g = Guard::conj(std::move(g), parse_primary(c, mut, net));
  return g;
}

Guard parse_or(Cursor& c, Net* mut, const Net& net) {
  Guard g = parse_and(c, mut, net);
  while (c.accept("or")) g = Guard::disj(std::move(g), parse_and(c, mut, net));
  return g;
}

std::uint32_t parse_multiplicity(Cursor& c) {
  if (c.peek().kind != Tok::Number) return 1;
  std::uint32_t k = c.expect_number();
  c.expect("*");
  if (k == 0) c.fail("multiplicity must be positive");
  return k;
}

// `{}` or item (+ item)*, item = [k*] <t, ...>
ArcExpr parse_expr(Cursor& c, Net* mut, const Net& net, std::optional<std::uint32_t> arity) {
  ArcExpr e;
  if (c.accept("{")) {
    c.expect("}");
    return e;
  }
  do {
    const std::size_t col = c.peek().col;
    std::uint32_t k = parse_multiplicity(c);
    c.expect("<");
    TermTuple tt;
    if (!c.is(">")) {
      do {
        tt.push_back(resolve_term(mut, net, c.expect_ident("term")));
      } while (c.accept(","));
    }
    c.expect(">");
    if (arity && tt.size() != *arity) {
      throw Fail{col, "arity mismatch: tuple of length " + std::to_string(tt.size()) +
                          " for place of arity " + std::to_string(*arity)};
    }
    e.add(tt, k);
  } while (c.accept("+"));
  return e;
}

constexpr std::array<std::string_view, 9> kSections = {
    "universe", "places", "transitions", "arcs", "gamma", "marking", "interfaces", "components", "finals"};

struct Line {
  std::size_t number;
  std::vector<Tok> toks;
};

class Parser {
 public:
  ParseResult run(std::string_view text) {
    split(text);
    for (std::size_t s = 0; s < kSections.size(); ++s) {
      for (auto& line : sections_[s]) {
        Cursor c(line.toks);
        try {
          handle(s, c);
        } catch (const Fail& f) {
          diag(line.number, f.column, f.message);
        } catch (const Error& e) {
          diag(line.number, 1, e.what());
        }
      }
    }
    ParseResult r;
    if (diags_.empty()) {
      r.document = std::move(doc_);
    } else {
      r.diagnostics = std::move(diags_);
    }
    return r;
  }

 private:
  void diag(std::size_t line, std::size_t col, std::string msg) {
    diags_.push_back({line, col, std::move(msg)});
  }

  void split(std::string_view text) {
    std::optional<std::size_t> current;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      ++number;
      start = end + 1;
      std::vector<Tok> toks;
      try {
        toks = lex(raw);
      } catch (const Fail& f) {
        diag(number, f.column, f.message);
        continue;
      }
      if (toks.size() == 1) continue;  // blank or comment
      if (toks.size() == 2 && toks[0].kind == Tok::Ident) {
        auto it = std::find(kSections.begin(), kSections.end(), toks[0].text);
        if (it != kSections.end()) {
          current = static_cast<std::size_t>(it - kSections.begin());
          continue;
        }
      }
      if (!current) {
        diag(number, toks[0].col, "content before any section header");
        continue;
      }
      sections_[*current].push_back({number, std::move(toks)});
    }
  }

  void handle(std::size_t section, Cursor& c) {
    switch (section) {
      case 0: return universe(c);
      case 1: return place(c);
      case 2: return transition(c);
      case 3: return arc(c);
      case 4: return gamma(c);
      case 5: return marking(c);
      case 6: return interfaces(c);
      case 7: return components(c);
      case 8: return finals(c);
    }
  }

  Net& net() { return doc_.net; }

  void universe(Cursor& c) {
    if (c.accept("constants")) {
      while (!c.at_end()) {
        const Tok& t = c.expect_ident("constant name");
        std::optional<std::uint32_t> arity;
        if (c.accept(":")) arity = c.expect_number();
        net().declare_constant(Symbol::intern(t.text), arity);
      }
    } else if (c.accept("variables")) {
      while (!c.at_end()) net().declare_variable(Symbol::intern(c.expect_ident("variable name").text));
    } else {
      c.fail("expected 'constants' or 'variables'");
    }
  }

  void place(Cursor& c) {
    const Tok& name = c.expect_ident("place name");
    std::uint32_t arity = c.expect_number();
    PlaceClass cls = PlaceClass::Process;
    if (!c.at_end()) {
      const Tok& k = c.expect_ident("place class");
      auto parsed = place_class_from(k.text);
      if (!parsed) throw Fail{k.col, "unknown place class '" + k.text + "'"};
      cls = *parsed;
    }
    c.expect_end();
    Symbol p = Symbol::intern(name.text);
    if (net().is_variable(p)) throw Fail{name.col, "'" + name.text + "' is a variable"};
    if (net().place(p)) throw Fail{name.col, "duplicate place '" + name.text + "'"};
    net().add_place(p, arity, cls);
  }

  void transition(Cursor& c) {
    const Tok& name = c.expect_ident("transition name");
    TransClass cls = TransClass::Process;
    if (c.peek().kind == Tok::Ident) {
      if (auto parsed = trans_class_from(c.peek().text)) {
        cls = *parsed;
        c.next();
      }
    }
    Guard guard;
    LinkRule rule;
    if (c.accept("guard")) guard = parse_or(c, &net(), net());
    if (c.accept("rho")) {
      if (c.accept("if")) {
        rule.condition = parse_or(c, &net(), net());
        c.expect("then");
      }
      while (!c.at_end()) {
        LinkOp op;
        if (c.accept("+")) {
          op = LinkOp::Add;
        } else if (c.accept("-")) {
          op = LinkOp::Remove;
        } else {
          c.fail("expected '+' or '-'");
        }
        const Tok& v = c.expect_ident("variable");
        Symbol s = Symbol::intern(v.text);
        if (!net().is_variable(s)) throw Fail{v.col, "'" + v.text + "' is not a variable"};
        rule.actions.push_back({s, op});
      }
    }
    c.expect_end();
    if (net().place(Symbol::intern(name.text)) || net().is_variable(Symbol::intern(name.text))) {
      throw Fail{name.col, "'" + name.text + "' is already a place or variable"};
    }
    if (net().find_transition(name.text)) throw Fail{name.col, "duplicate transition '" + name.text + "'"};
    net().add_transition(name.text, std::move(guard), std::move(rule), cls);
  }

  void arc(Cursor& c) {
    const Tok& a = c.expect_ident("arc source");
    c.expect("->");
    const Tok& b = c.expect_ident("arc target");
    c.expect(":");
    auto ta = net().find_transition(a.text);
    auto tb = net().find_transition(b.text);
    const Tok& node_tok = ta ? b : a;
    std::optional<TransitionId> t = ta ? ta : tb;
    if (!t || (ta && tb)) throw Fail{a.col, "an arc joins one transition and one place or variable"};
    Symbol node = Symbol::intern(node_tok.text);
    std::optional<std::uint32_t> arity;
    if (const Place* p = net().place(node)) {
      arity = p->arity;
    } else if (!net().is_variable(node)) {
      throw Fail{node_tok.col, "unresolved reference '" + node_tok.text + "'"};
    }
    ArcExpr e = parse_expr(c, &net(), net(), arity);
    c.expect_end();
    if (ta) {
      net().add_output(*t, node, std::move(e));
    } else {
      net().add_input(*t, node, std::move(e));
    }
  }

  void gamma(Cursor& c) {
    const Tok& v = c.expect_ident("variable");
    Symbol s = Symbol::intern(v.text);
    if (!net().is_variable(s)) throw Fail{v.col, "'" + v.text + "' is not a variable"};
    c.expect("=");
    c.expect("{");
    std::set<Symbol> cs;
    if (!c.is("}")) {
      do {
        cs.insert(resolve_constant(&net(), net(), c.expect_ident("constant")));
      } while (c.accept(","));
    }
    c.expect("}");
    c.expect_end();
    net().set_gamma(s, std::move(cs));
  }

  void marking(Cursor& c) {
    const Tok& p = c.expect_ident("place");
    Symbol s = Symbol::intern(p.text);
    const Place* pl = net().place(s);
    if (!pl) throw Fail{p.col, "unresolved place '" + p.text + "'"};
    c.expect("=");
    Tokens toks;
    if (c.accept("{")) {
      c.expect("}");
    } else {
      do {
        const std::size_t col = c.peek().col;
        std::uint32_t k = parse_multiplicity(c);
        c.expect("<");
        Tuple tup;
        if (!c.is(">")) {
          do {
            tup.push_back(resolve_constant(&net(), net(), c.expect_ident("constant")));
          } while (c.accept(","));
        }
        c.expect(">");
        if (tup.size() != pl->arity) {
          throw Fail{col, "arity mismatch: token of length " + std::to_string(tup.size()) +
                              " in place " + p.text + " of arity " + std::to_string(pl->arity)};
        }
        toks.add(tup, k);
      } while (c.accept(",") || c.accept("+"));
    }
    c.expect_end();
    Tokens cur = net().m0().count(s) ? net().m0().at(s) : Tokens{};
    net().set_initial(s, cur + toks);
  }

  void interfaces(Cursor& c) {
    if (c.accept("set")) {
      while (!c.at_end()) net().add_interface(resolve_constant(&net(), net(), c.expect_ident("constant")));
    } else if (c.accept("variables")) {
      while (!c.at_end()) {
        const Tok& v = c.expect_ident("variable");
        Symbol s = Symbol::intern(v.text);
        if (!net().is_variable(s)) throw Fail{v.col, "'" + v.text + "' is not a variable"};
        doc_.interface_variables.insert(s);
      }
    } else {
      c.fail("expected 'set' or 'variables'");
    }
  }

  void components(Cursor& c) {
    bool is_isn;
    if (c.accept("component")) {
      is_isn = false;
    } else if (c.accept("isn")) {
      is_isn = true;
    } else {
      c.fail("expected 'component' or 'isn'");
    }
    const Tok& name = c.expect_ident("group name");
    if (group_names_.count(name.text)) throw Fail{name.col, "duplicate group '" + name.text + "'"};
    c.expect(":");
    NodeGroup g{name.text, {}, {}};
    while (!c.at_end()) {
      const Tok& n = c.expect_ident("node");
      if (net().find_transition(n.text)) {
        g.transitions.insert(n.text);
      } else if (net().place(Symbol::intern(n.text))) {
        g.places.insert(Symbol::intern(n.text));
      } else {
        throw Fail{n.col, "unresolved node '" + n.text + "'"};
      }
      c.accept(",");
    }
    group_names_.insert(name.text);
    (is_isn ? doc_.isns : doc_.components).push_back(std::move(g));
  }

  void finals(Cursor& c) {
    const Tok& name = c.expect_ident("component name");
    bool known = std::any_of(doc_.components.begin(), doc_.components.end(),
                             [&](const NodeGroup& g) { return g.name == name.text; });
    if (!known) throw Fail{name.col, "unknown component '" + name.text + "'"};
    c.expect("=");
    auto& set = doc_.finals[name.text];
    while (!c.at_end()) {
      const Tok& p = c.expect_ident("place");
      Symbol s = Symbol::intern(p.text);
      if (!net().place(s)) throw Fail{p.col, "unresolved place '" + p.text + "'"};
      set.insert(s);
      c.accept(",");
    }
  }

  std::array<std::vector<Line>, kSections.size()> sections_;
  std::set<std::string> group_names_;
  ModelDocument doc_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse_model(std::string_view text) { return Parser().run(text); }

ModelDocument parse_model_or_throw(std::string_view text) {
  auto r = parse_model(text);
  if (!r.ok()) throw Error(ErrorCode::ParseError, r.diagnostics.front().to_string());
  return std::move(*r.document);
}

ModelDocument load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  auto r = parse_model(ss.str());
  if (!r.ok()) throw Error(ErrorCode::ParseError, path + ":" + r.diagnostics.front().to_string());
  return std::move(*r.document);
}

Guard parse_guard(std::string_view text, const Net& net) {
  try {
    Cursor c(lex(text));
    Guard g = parse_or(c, nullptr, net);
    c.expect_end();
    return g;
  } catch (const Fail& f) {
    throw Error(ErrorCode::ParseError, "1:" + std::to_string(f.column) + ": " + f.message);
  }
}

ArcExpr parse_arc_expr(std::string_view text, const Net& net) {
  try {
    Cursor c(lex(text));
    ArcExpr e = parse_expr(c, nullptr, net, std::nullopt);
    c.expect_end();
    return e;
  } catch (const Fail& f) {
    throw Error(ErrorCode::ParseError, "1:" + std::to_string(f.column) + ": " + f.message);
  }
}

}  // namespace vpn
