#include "evl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace evl {

namespace {

const std::set<std::string> kTermKeywords = {"let",  "letEv", "letrec", "in",   "if",
                                             "then", "else",  "modify", "true", "false"};

bool reserved_tyvar(const std::string& name) {
  // t0, t1, ... are the inference engine's fresh names.
  if (name.size() < 2 || name[0] != 't') return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return std::isdigit((unsigned char)c); });
}

struct Parser {
  std::vector<Token> ts;
  size_t i = 0;
  Mode mode;

  Parser(const SourceProgram& src, Mode m) : ts(lex(src)), mode(m) {}

  const Token& cur() const { return ts[i]; }
  const Token& la(size_t k) const { return ts[std::min(i + k, ts.size() - 1)]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_op(const char* s) const { return at(Tok::Op) && cur().text == s; }
  bool at_kw(const char* s) const { return at(Tok::Ident) && cur().text == s; }

  [[noreturn]] void err(std::string msg) const {
    throw ParseError(ParseDiagnostic{std::move(msg), cur().line, cur().column});
  }
  Token eat() {
    Token t = cur();
    if (t.kind != Tok::Eof) ++i;
    return t;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) err(std::string("expected ") + what);
    return eat();
  }
  std::string expect_label() {
    if (!at(Tok::Ident)) err("expected label");
    return eat().text;
  }
  void expect_kw(const char* s) {
    if (!at_kw(s)) err(std::string("expected '") + s + "'");
    eat();
  }

  // --- terms ---

  std::string binder() {
    if (!at(Tok::Ident)) err("expected identifier");
    if (kTermKeywords.count(cur().text)) err("'" + cur().text + "' is a keyword");
    return eat().text;
  }

  Tm expr() {
    if (at(Tok::Lambda)) {
      eat();
      std::vector<std::string> params;
      params.push_back(binder());
      while (at(Tok::Ident) && !kTermKeywords.count(cur().text)) params.push_back(eat().text);
      expect(Tok::Dot, "'.' after lambda parameters");
      Tm body = expr();
      for (auto it = params.rbegin(); it != params.rend(); ++it) body = mk_abs(*it, body);
      return body;
    }
    if (at_kw("let") || at_kw("letEv") || at_kw("letrec")) {
      std::string kw = eat().text;
      if (kw == "letrec" && mode == Mode::Core) err("letrec requires extended mode");
      std::string name = binder();
      std::vector<std::string> params;
      while (at(Tok::Ident) && !kTermKeywords.count(cur().text)) params.push_back(eat().text);
      expect(Tok::Eq, "'='");
      Tm bound = expr();
      for (auto it = params.rbegin(); it != params.rend(); ++it) bound = mk_abs(*it, bound);
      expect_kw("in");
      Tm body = expr();
      if (kw == "let") return mk_let(name, bound, body);
      if (kw == "letEv") return mk_letev(name, bound, body);
      return mk_letrec(name, bound, body);
    }
    if (at_kw("if")) {
      eat();
      Tm g = expr();
      expect_kw("then");
      Tm t = expr();
      expect_kw("else");
      Tm e = expr();
      return mk_cond(g, t, e);
    }
    return or_expr();
  }

  Tm bin(Tm a, const std::string& op, Tm b) { return mk_app(mk_app(mk_var(op), a), b); }

  Tm or_expr() {
    Tm a = and_expr();
    while (at_op("or")) {
      eat();
      a = bin(a, "or", and_expr());
    }
    return a;
  }
  Tm and_expr() {
    Tm a = cmp_expr();
    while (at_op("and")) {
      eat();
      a = bin(a, "and", cmp_expr());
    }
    return a;
  }
  bool at_cmp() const { return at_op("==") || at_op(">") || at_op("<"); }
  Tm cmp_expr() {
    Tm a = add_expr();
    if (at_cmp()) {
      std::string op = eat().text;
      Tm b = add_expr();
      if (at_cmp()) err("comparison operators do not associate; use parentheses");
      return bin(a, op, b);
    }
    return a;
  }
  Tm add_expr() {
    Tm a = mul_expr();
    while (at_op("+") || at_op("-")) {
      std::string op = eat().text;
      a = bin(a, op, mul_expr());
    }
    return a;
  }
  Tm mul_expr() {
    Tm a = app_expr();
    while (at_op("*") || at_op("/")) {
      std::string op = eat().text;
      a = bin(a, op, app_expr());
    }
    return a;
  }

  bool starts_atom() const {
    switch (cur().kind) {
      case Tok::IntLit:
      case Tok::FloatLit:
      case Tok::StringLit:
      case Tok::LBrace:
      case Tok::LParen:
        return true;
      case Tok::Ident: {
        const std::string& s = cur().text;
        return !kTermKeywords.count(s) || s == "modify" || s == "true" || s == "false";
      }
      default:
        return false;
    }
  }

  Tm app_expr() {
    Tm f = postfix_expr();
    while (starts_atom()) f = mk_app(f, postfix_expr());
    return f;
  }

  Tm postfix_expr() {
    Tm a = atom();
    while (at(Tok::Dot)) {
      eat();
      a = mk_select(a, expect_label());
    }
    return a;
  }

  // Optional `^Base` on a constant; the base must match the literal's
  // class, except that an integer numeral may be ascribed Float (the
  // paper writes constants like 2^Float). Returns the effective base.
  std::string ascription(const char* expected, const char* also = nullptr) {
    if (!at(Tok::Caret)) return expected;
    eat();
    if (!at(Tok::Ident)) err("expected base type after '^'");
    std::string b = eat().text;
    if (!is_base_type(b)) err("unknown base type '" + b + "'");
    if (b != expected && !(also && b == also))
      err("constant ascription ^" + b + " does not match literal of type " + expected);
    return b;
  }

  Tm atom() {
    if (at(Tok::IntLit)) {
      Token t = eat();
      if (ascription("Int", "Float") == "Float")
        return mk_float(static_cast<double>(t.int_val));
      return mk_int(t.int_val);
    }
    if (at(Tok::FloatLit)) {
      Token t = eat();
      ascription("Float");
      return mk_float(t.float_val);
    }
    if (at(Tok::StringLit)) {
      Token t = eat();
      ascription("String");
      return mk_string(t.str_val);
    }
    if (at_op("-") && (la(1).kind == Tok::IntLit || la(1).kind == Tok::FloatLit)) {
      eat();
      Token t = eat();
      if (t.kind == Tok::IntLit) {
        if (ascription("Int", "Float") == "Float")
          return mk_float(-static_cast<double>(t.int_val));
        return mk_int(-t.int_val);
      }
      ascription("Float");
      return mk_float(-t.float_val);
    }
    if (at(Tok::Ident)) {
      const std::string name = cur().text;
      if (name == "true" || name == "false") {
        eat();
        ascription("Bool");
        return mk_bool(name == "true");
      }
      if (name == "modify") {
        eat();
        expect(Tok::LParen, "'(' after modify");
        Tm subject = expr();
        expect(Tok::Comma, "','");
        std::string label = expect_label();
        expect(Tok::Comma, "','");
        Tm repl = expr();
        expect(Tok::RParen, "')'");
        return mk_modify(subject, label, repl);
      }
      if (kTermKeywords.count(name)) err("unexpected keyword '" + name + "'");
      eat();
      return mk_var(name);
    }
    if (at(Tok::LBrace)) {
      eat();
      std::vector<std::pair<std::string, Tm>> fields;
      while (true) {
        std::string label = expect_label();
        for (auto& [l, _] : fields)
          if (l == label) err("duplicate label '" + label + "' in record");
        expect(Tok::Eq, "'='");
        fields.emplace_back(label, expr());
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return mk_record(std::move(fields));
    }
    if (at(Tok::LParen)) {
      eat();
      if (at(Tok::Op) && la(1).kind == Tok::RParen) {  // operator section, e.g. (+)
        std::string op = eat().text;
        eat();
        return mk_var(op);
      }
      Tm a = expr();
      if (at(Tok::Comma)) {  // pair sugar
        eat();
        Tm b = expr();
        expect(Tok::RParen, "')'");
        return mk_record({{"fst", a}, {"snd", b}});
      }
      expect(Tok::RParen, "')'");
      return a;
    }
    err("expected expression");
  }

  // --- types ---

  std::string tyvar_name() {
    if (!at(Tok::Ident)) err("expected type variable");
    std::string name = eat().text;
    if (is_base_type(name)) err("'" + name + "' is a base type, not a variable");
    if (name == "List" || name == "forall") err("'" + name + "' is reserved in types");
    if (reserved_tyvar(name)) err("type variable names t0, t1, ... are reserved");
    return name;
  }

  PolyType scheme() {
    std::vector<std::pair<std::string, Kind>> prefix;
    while (at_kw("forall")) {
      eat();
      std::string v = tyvar_name();
      expect(Tok::DblColon, "'::'");
      Kind k = kind();
      expect(Tok::Dot, "'.'");
      prefix.emplace_back(std::move(v), std::move(k));
    }
    return PolyType{std::move(prefix), type()};
  }

  Ty type() {
    Ty a = type_atom();
    if (at(Tok::Arrow)) {
      eat();
      return tarrow(a, type());
    }
    return a;
  }

  std::map<std::string, Ty> field_types() {
    std::map<std::string, Ty> fields;
    while (true) {
      std::string label = expect_label();
      if (fields.count(label)) err("duplicate label '" + label + "'");
      expect(Tok::Colon, "':'");
      fields.emplace(label, type());
      if (at(Tok::Comma)) {
        eat();
        continue;
      }
      break;
    }
    return fields;
  }

  Ty type_atom() {
    if (at(Tok::Ident)) {
      std::string name = cur().text;
      if (name == "List") {
        if (mode == Mode::Core) err("List types require extended mode");
        eat();
        return tlist(type_atom());
      }
      if (is_base_type(name)) {
        eat();
        return tbase(name);
      }
      return tvar(tyvar_name());
    }
    if (at(Tok::LBrace)) {
      eat();
      auto fields = field_types();
      expect(Tok::RBrace, "'}'");
      return trecord(std::move(fields));
    }
    if (at(Tok::LParen)) {
      eat();
      Ty t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    err("expected type");
  }

  Kind kind() {
    if (at_kw("U")) {
      eat();
      return Kind::u();
    }
    if (at(Tok::LBrace) && la(1).kind == Tok::LBrace) {
      eat();
      eat();
      auto fields = field_types();
      expect(Tok::RBrace, "'}}'");
      expect(Tok::RBrace, "'}}'");
      return Kind::rec(std::move(fields));
    }
    err("expected kind (U or {{...}})");
  }

  void expect_eof() {
    if (!at(Tok::Eof)) err("unexpected trailing input");
  }
};

// Splits an assumption file into entries. A new entry starts at a line that
// begins (at bracket depth 0) with an identifier followed by ':' or '='.
struct Entry {
  std::string text;
  int start_line;
};

bool entry_head(const std::string& line) {
  size_t p = 0;
  while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
  if (p >= line.size() || !(std::isalpha((unsigned char)line[p]) || line[p] == '_')) return false;
  while (p < line.size() &&
         (std::isalnum((unsigned char)line[p]) || line[p] == '_' || line[p] == '\''))
    ++p;
  while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
  // Params before '=': `name x y = ...`
  while (p < line.size() && (std::isalpha((unsigned char)line[p]) || line[p] == '_')) {
    while (p < line.size() &&
           (std::isalnum((unsigned char)line[p]) || line[p] == '_' || line[p] == '\''))
      ++p;
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t')) ++p;
  }
  if (p >= line.size()) return false;
  if (line[p] == '=') return p + 1 >= line.size() || line[p + 1] != '=';
  if (line[p] == ':') return p + 1 >= line.size() || line[p + 1] != ':';
  return false;
}

std::vector<Entry> split_entries(const std::string& text) {
  std::vector<Entry> entries;
  int depth = 0;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    ++line_no;
    // Strip comments before depth counting.
    std::string code = line;
    bool in_str = false;
    for (size_t k = 0; k < code.size(); ++k) {
      if (in_str) {
        if (code[k] == '\\') ++k;
        else if (code[k] == '"') in_str = false;
        continue;
      }
      if (code[k] == '"') in_str = true;
      else if (code[k] == '-' && k + 1 < code.size() && code[k + 1] == '-') {
        code.resize(k);
        break;
      }
    }
    bool blank = code.find_first_not_of(" \t\r") == std::string::npos;
    if (!blank && depth == 0 && entry_head(code)) {
      entries.push_back(Entry{"", line_no});
      // Pad so token positions match the original file.
      entries.back().text.assign(size_t(line_no - 1), '\n');
    }
    if (!blank && entries.empty())
      throw ParseError(ParseDiagnostic{"expected `name : TYPE` or `name = TERM`", line_no, 1});
    if (!entries.empty()) {
      entries.back().text += line;
      entries.back().text += '\n';
    }
    in_str = false;
    for (char ch : code) {
      if (in_str) {
        if (ch == '"') in_str = false;
        continue;
      }
      if (ch == '"') in_str = true;
      else if (ch == '{' || ch == '(') ++depth;
      else if (ch == '}' || ch == ')') --depth;
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return entries;
}

}  // namespace

Tm parse_term(const SourceProgram& src, Mode mode) {
  Parser p(src, mode);
  Tm t = p.expr();
  p.expect_eof();
  return t;
}

PolyType parse_scheme(const SourceProgram& src, Mode mode) {
  Parser p(src, mode);
  PolyType s = p.scheme();
  p.expect_eof();
  return s;
}

Ty parse_type(const SourceProgram& src, Mode mode) {
  Parser p(src, mode);
  Ty t = p.type();
  p.expect_eof();
  return t;
}

RelateInput parse_relate_input(const SourceProgram& src, Mode mode) {
  Parser p(src, mode);
  RelateInput r;
  if (p.at_kw("type")) {
    p.eat();
    r.scheme = p.scheme();
  } else {
    r.term = p.expr();
  }
  p.expect_eof();
  return r;
}

std::vector<Assumption> parse_assume_file(const SourceProgram& src, Mode mode) {
  std::vector<Assumption> out;
  for (const Entry& entry : split_entries(src.text)) {
    Parser p(SourceProgram{entry.text, src.origin}, mode);
    Assumption a;
    a.name = p.binder();
    std::vector<std::string> params;
    while (p.at(Tok::Ident)) params.push_back(p.binder());
    if (p.at(Tok::Colon)) {
      if (!params.empty()) p.err("parameters are only allowed with '='");
      p.eat();
      a.scheme = p.scheme();
    } else {
      p.expect(Tok::Eq, "':' or '='");
      Tm bound = p.expr();
      for (auto it = params.rbegin(); it != params.rend(); ++it) bound = mk_abs(*it, bound);
      a.term = bound;
    }
    p.expect_eof();
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace evl
