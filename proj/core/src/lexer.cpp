#include "factum/lexer.hpp"

#include <array>
#include <utility>

namespace factum {

namespace {

constexpr std::array<std::pair<std::string_view, Keyword>, 23> kKeywords{{
    {"Pattern", Keyword::Pattern},
    {"ShortName", Keyword::ShortName},
    {"DTSpec", Keyword::DTSpec},
    {"DT", Keyword::DT},
    {"Sort", Keyword::Sort},
    {"Operation", Keyword::Operation},
    {"Predicate", Keyword::Predicate},
    {"CTypes", Keyword::CTypes},
    {"CType", Keyword::CType},
    {"InputPorts", Keyword::InputPorts},
    {"InputPort", Keyword::InputPort},
    {"OutputPorts", Keyword::OutputPorts},
    {"OutputPort", Keyword::OutputPort},
    {"Type", Keyword::Type},
    {"connects", Keyword::Connects},
    {"Id", Keyword::Id},
    {"ArchSpec", Keyword::ArchSpec},
    {"ArchGuarantee", Keyword::ArchGuarantee},
    {"SubPattern", Keyword::SubPattern},
    {"rig", Keyword::Rig},
    {"flex", Keyword::Flex},
    {"G", Keyword::Globally},
    {"W", Keyword::WeakUntil},
}};

// Multi-byte and multi-character operator spellings, longest first where
// prefixes overlap.
constexpr std::array<std::pair<std::string_view, Symbol>, 21> kSymbols{{
    {"=>", Symbol::Implies},
    {"->", Symbol::Implies},
    {"⇒", Symbol::Implies},
    {"→", Symbol::Implies},
    {"∧", Symbol::And},
    {"^", Symbol::And},
    {"&", Symbol::And},
    {"∨", Symbol::Or},
    {"|", Symbol::Or},
    {"¬", Symbol::Not},
    {"!", Symbol::Not},
    {"~", Symbol::Not},
    {"∃", Symbol::Exists},
    {"∀", Symbol::Forall},
    {"{", Symbol::LBrace},
    {"}", Symbol::RBrace},
    {"(", Symbol::LParen},
    {")", Symbol::RParen},
    {",", Symbol::Comma},
    {":", Symbol::Colon},
    {".", Symbol::Dot},
}};

bool ident_start(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// Length of the UTF-8 sequence starting at `text[pos]`, or 1 for a byte that
// does not start a well-formed sequence.
std::size_t utf8_length(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t n = 1;
  if (lead >= 0xF0 && lead <= 0xF4) {
    n = 4;
  } else if (lead >= 0xE0) {
    n = lead <= 0xEF ? 3 : 1;
  } else if (lead >= 0xC2) {
    n = 2;
  }
  if (n == 1 || pos + n > text.size()) {
    return 1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if ((static_cast<unsigned char>(text[pos + i]) & 0xC0) != 0x80) {
      return 1;
    }
  }
  return n;
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string_view file) : text_(text), file_(file) {}

  LexResult run() {
    while (pos_ < text_.size()) {
      lex_one();
    }
    return std::move(result_);
  }

 private:
  void lex_one() {
    const auto c = static_cast<unsigned char>(text_[pos_]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      std::size_t end = pos_;
      while (end < text_.size() && (text_[end] == ' ' || text_[end] == '\t' || text_[end] == '\r' ||
                                    text_[end] == '\n')) {
        ++end;
      }
      emit(TokenKind::Whitespace, end - pos_);
      return;
    }
    if (text_.substr(pos_, 2) == "//") {
      std::size_t end = text_.find('\n', pos_);
      emit(TokenKind::Comment, (end == std::string_view::npos ? text_.size() : end) - pos_);
      return;
    }
    if (ident_start(c)) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && ident_char(static_cast<unsigned char>(text_[end]))) {
        ++end;
      }
      const auto word = text_.substr(pos_, end - pos_);
      if (word == "exists" || word == "forall") {
        auto& tok = emit(TokenKind::Symbol, word.size());
        tok.symbol = word == "exists" ? Symbol::Exists : Symbol::Forall;
        return;
      }
      for (const auto& [spelling, kw] : kKeywords) {
        if (word == spelling) {
          emit(TokenKind::Keyword, word.size()).keyword = kw;
          return;
        }
      }
      emit(TokenKind::Identifier, word.size());
      return;
    }
    for (const auto& [spelling, sym] : kSymbols) {
      if (text_.substr(pos_, spelling.size()) == spelling) {
        emit(TokenKind::Symbol, spelling.size()).symbol = sym;
        return;
      }
    }
    if (c == '=') {
      emit(TokenKind::Symbol, 1).symbol = Symbol::Equals;
      return;
    }
    const std::size_t n = utf8_length(text_, pos_);
    auto& tok = emit(TokenKind::Unknown, n);
    Diagnostic d;
    d.code = std::string(codes::Lexical);
    d.file = std::string(file_);
    d.span = tok.span;
    d.message = n == 1 && c >= 0x80 ? "Invalid byte in input." : "Unexpected character '" + tok.lexeme + "'.";
    result_.diagnostics.push_back(std::move(d));
  }

  Token& emit(TokenKind kind, std::size_t length) {
    Token tok;
    tok.kind = kind;
    tok.lexeme = std::string(text_.substr(pos_, length));
    tok.span = Span{pos_, length, line_, column_};
    for (std::size_t i = pos_; i < pos_ + length; ++i) {
      const auto b = static_cast<unsigned char>(text_[i]);
      if (b == '\n') {
        ++line_;
        column_ = 1;
      } else if ((b & 0xC0) != 0x80) {
        ++column_;
      }
    }
    pos_ += length;
    result_.tokens.push_back(std::move(tok));
    return result_.tokens.back();
  }

  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  LexResult result_;
};

}  // namespace

LexResult tokenize(std::string_view text, std::string_view file) { return Lexer(text, file).run(); }

std::string_view keyword_spelling(Keyword k) {
  for (const auto& [spelling, kw] : kKeywords) {
    if (kw == k) {
      return spelling;
    }
  }
  return {};
}

}  // namespace factum
