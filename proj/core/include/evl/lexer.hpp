#ifndef EVL_LEXER_HPP
#define EVL_LEXER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evl {

struct SourceProgram {
  std::string text;
  std::string origin = "<stdin>";
};

struct ParseDiagnostic {
  std::string message;
  int line = 1;
  int column = 1;
  std::string severity = "error";
};

// Thrown by lex/parse; carries the diagnostic.
struct ParseError : std::runtime_error {
  ParseDiagnostic diag;
  explicit ParseError(ParseDiagnostic d)
      : std::runtime_error(d.message + " at " + std::to_string(d.line) + ":" +
                           std::to_string(d.column)),
        diag(std::move(d)) {}
};

enum class Tok {
  Ident,      // variables, labels, base-type names, keywords resolved later
  IntLit,
  FloatLit,
  StringLit,
  Lambda,     // \ or λ
  Dot,
  Eq,         // =
  Caret,      // ^
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Colon,      // : (type syntax)
  DblColon,   // :: (kind ascription)
  Arrow,      // -> (type syntax)
  Op,         // + - * / > < == and or
  Eof,
};

struct Token {
  Tok kind;
  std::string text;     // identifier/op text, literal lexeme
  std::int64_t int_val = 0;
  double float_val = 0;
  std::string str_val;  // decoded string literal
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(const SourceProgram& src);

}  // namespace evl

#endif
