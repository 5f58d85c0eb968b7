#include "evl/lexer.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace evl {

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  int line = 1, col = 1;

  bool eof() const { return i >= s.size(); }
  char peek(size_t k = 0) const { return i + k < s.size() ? s[i + k] : '\0'; }
  char next() {
    char c = s[i++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
};

[[noreturn]] void fail(const Cursor& c, std::string msg) {
  throw ParseError(ParseDiagnostic{std::move(msg), c.line, c.col});
}

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '\''; }

}  // namespace

std::vector<Token> lex(const SourceProgram& src) {
  std::vector<Token> out;
  Cursor c{src.text};
  auto push = [&](Tok k, std::string text, int line, int col) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = line;
    t.column = col;
    out.push_back(std::move(t));
    return &out.back();
  };

  while (!c.eof()) {
    char ch = c.peek();
    int line = c.line, col = c.col;
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      c.next();
      continue;
    }
    if (ch == '-' && c.peek(1) == '-') {  // line comment
      while (!c.eof() && c.peek() != '\n') c.next();
      continue;
    }
    if (std::isdigit((unsigned char)ch)) {
      std::string num;
      bool is_float = false;
      while (std::isdigit((unsigned char)c.peek())) num += c.next();
      if (c.peek() == '.' && std::isdigit((unsigned char)c.peek(1))) {
        is_float = true;
        num += c.next();
        while (std::isdigit((unsigned char)c.peek())) num += c.next();
      }
      if (c.peek() == 'e' || c.peek() == 'E') {
        char sign = c.peek(1);
        size_t digits_at = (sign == '+' || sign == '-') ? 2 : 1;
        if (std::isdigit((unsigned char)c.peek(digits_at))) {
          is_float = true;
          num += c.next();
          if (sign == '+' || sign == '-') num += c.next();
          while (std::isdigit((unsigned char)c.peek())) num += c.next();
        }
      }
      Token* t = push(is_float ? Tok::FloatLit : Tok::IntLit, num, line, col);
      if (is_float) {
        t->float_val = std::stod(num);
      } else {
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), t->int_val);
        if (ec != std::errc()) fail(c, "integer literal out of range");
      }
      continue;
    }
    if (ch == '"') {
      c.next();
      std::string val;
      while (true) {
        if (c.eof()) {
          Cursor at = c;
          at.line = line;
          at.col = col;
          fail(at, "unterminated string literal");
        }
        char d = c.next();
        if (d == '"') break;
        if (d == '\\') {
          if (c.eof()) fail(c, "unterminated escape");
          char e = c.next();
          switch (e) {
            case 'n': val += '\n'; break;
            case 't': val += '\t'; break;
            case '"': val += '"'; break;
            case '\\': val += '\\'; break;
            default: fail(c, std::string("unknown escape \\") + e);
          }
        } else if (d == '\n') {
          fail(c, "newline in string literal");
        } else {
          val += d;
        }
      }
      Token* t = push(Tok::StringLit, val, line, col);
      t->str_val = val;
      continue;
    }
    if (ident_start(ch)) {
      std::string id;
      while (ident_char(c.peek())) id += c.next();
      if (id == "and" || id == "or") {
        push(Tok::Op, id, line, col);
      } else if (id == "inf" || id == "nan") {
        Token* t = push(Tok::FloatLit, id, line, col);
        t->float_val = id == "inf" ? std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::quiet_NaN();
      } else {
        push(Tok::Ident, id, line, col);
      }
      continue;
    }
    // λ in UTF-8
    if ((unsigned char)ch == 0xCE && (unsigned char)c.peek(1) == 0xBB) {
      c.next();
      c.next();
      push(Tok::Lambda, "\\", line, col);
      continue;
    }
    switch (ch) {
      case '\\': c.next(); push(Tok::Lambda, "\\", line, col); continue;
      case '.': c.next(); push(Tok::Dot, ".", line, col); continue;
      case '^': c.next(); push(Tok::Caret, "^", line, col); continue;
      case '{': c.next(); push(Tok::LBrace, "{", line, col); continue;
      case '}': c.next(); push(Tok::RBrace, "}", line, col); continue;
      case '(': c.next(); push(Tok::LParen, "(", line, col); continue;
      case ')': c.next(); push(Tok::RParen, ")", line, col); continue;
      case ',': c.next(); push(Tok::Comma, ",", line, col); continue;
      case '+': case '*': case '/':
        c.next();
        push(Tok::Op, std::string(1, ch), line, col);
        continue;
      case '-':
        c.next();
        if (c.peek() == '>') {
          c.next();
          push(Tok::Arrow, "->", line, col);
        } else {
          push(Tok::Op, "-", line, col);
        }
        continue;
      case '>': c.next(); push(Tok::Op, ">", line, col); continue;
      case '<': c.next(); push(Tok::Op, "<", line, col); continue;
      case '=':
        c.next();
        if (c.peek() == '=') {
          c.next();
          push(Tok::Op, "==", line, col);
        } else {
          push(Tok::Eq, "=", line, col);
        }
        continue;
      case ':':
        c.next();
        if (c.peek() == ':') {
          c.next();
          push(Tok::DblColon, "::", line, col);
        } else {
          push(Tok::Colon, ":", line, col);
        }
        continue;
      default: {
        Cursor at = c;
        fail(at, std::string("unknown character '") + ch + "'");
      }
    }
  }
  push(Tok::Eof, "", c.line, c.col);
  return out;
}

}  // namespace evl
