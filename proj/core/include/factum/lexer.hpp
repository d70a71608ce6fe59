#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factum/diagnostic.hpp"

namespace factum {

enum class TokenKind { Keyword, Identifier, Symbol, Comment, Whitespace, Unknown };

enum class Keyword {
  None,
  Pattern,
  ShortName,
  DTSpec,
  DT,
  Sort,
  Operation,
  Predicate,
  CTypes,
  CType,
  InputPorts,
  InputPort,
  OutputPorts,
  OutputPort,
  Type,
  Connects,
  Id,
  ArchSpec,
  ArchGuarantee,
  SubPattern,
  Rig,
  Flex,
  Globally,
  WeakUntil,
};

// Punctuation and logical operators. Every spelling of an operator maps to
// the same symbol, e.g. `∧`, `^` and `&` are all `And`.
enum class Symbol {
  None,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Colon,
  Dot,
  Equals,
  Implies,  // => -> ⇒ →
  And,      // ∧ ^ &
  Or,       // ∨ |
  Not,      // ¬ ! ~
  Exists,   // ∃ exists
  Forall,   // ∀ forall
};

struct Token {
  TokenKind kind = TokenKind::Unknown;
  std::string lexeme;
  Span span;
  Keyword keyword = Keyword::None;
  Symbol symbol = Symbol::None;

  bool is_trivia() const { return kind == TokenKind::Comment || kind == TokenKind::Whitespace; }
  bool is(Keyword k) const { return kind == TokenKind::Keyword && keyword == k; }
  bool is(Symbol s) const { return kind == TokenKind::Symbol && symbol == s; }
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

// Lossless: concatenating every token's lexeme reproduces `text` byte for
// byte, including comments, whitespace and unrecognised input.
LexResult tokenize(std::string_view text, std::string_view file = "<input>");

std::string_view keyword_spelling(Keyword k);

}  // namespace factum
