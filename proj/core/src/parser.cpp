#include "factum/parser.hpp"

#include <array>
#include <utility>

#include "factum/lexer.hpp"

namespace factum {

namespace {

// Thrown to unwind to the nearest recovery point; the diagnostic has
// already been recorded.
struct SyntaxError {};

constexpr int kMaxNesting = 200;

enum class Section { DTSpec, CTypes, ArchSpec, ArchGuarantee, SubPattern };

std::optional<Section> section_of(const Token& tok) {
  if (tok.kind != TokenKind::Keyword) {
    return std::nullopt;
  }
  switch (tok.keyword) {
    case Keyword::DTSpec:
      return Section::DTSpec;
    case Keyword::CTypes:
      return Section::CTypes;
    case Keyword::ArchSpec:
      return Section::ArchSpec;
    case Keyword::ArchGuarantee:
      return Section::ArchGuarantee;
    case Keyword::SubPattern:
      return Section::SubPattern;
    default:
      return std::nullopt;
  }
}

template <typename T>
FormulaPtr make_formula(T node, Span span) {
  return std::make_shared<const Formula>(Formula{std::move(node), span});
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view file) : file_(file) {
    auto lexed = tokenize(text, file);
    diagnostics_ = std::move(lexed.diagnostics);
    syntax_error_ = !diagnostics_.empty();
    for (auto& tok : lexed.tokens) {
      if (!tok.is_trivia() && tok.kind != TokenKind::Unknown) {
        tokens_.push_back(std::move(tok));
      }
    }
    eof_.kind = TokenKind::Whitespace;
    eof_.span = Span{text.size(), 0, 1, 1};
    if (!lexed.tokens.empty()) {
      const auto& last = lexed.tokens.back();
      eof_.span.line = last.span.line;
      eof_.span.column = last.span.column + last.lexeme.size();
    }
  }

  ParseResult parse_document() {
    ParseResult result;
    std::optional<Pattern> pattern;
    try {
      pattern = parse_pattern_decl();
      if (!at_end()) {
        error(peek(), "Unexpected input after the end of the pattern.");
      }
    } catch (const SyntaxError&) {
    }
    if (!syntax_error_ && pattern) {
      result.pattern = std::move(pattern);
    }
    result.diagnostics = std::move(diagnostics_);
    sort_diagnostics(result.diagnostics);
    return result;
  }

  FormulaParseResult parse_standalone_formula(const FormulaScope& scope) {
    FormulaParseResult result;
    block_variables_ = scope.variables;
    component_types_ = scope.component_types;
    try {
      auto f = formula();
      if (!at_end()) {
        error(peek(), "Unexpected input after formula.");
      }
      if (!syntax_error_) {
        result.formula = std::move(f);
      }
    } catch (const SyntaxError&) {
    }
    result.diagnostics = std::move(diagnostics_);
    sort_diagnostics(result.diagnostics);
    return result;
  }

 private:
  // ------------------------------------------------------------ token access

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof_;
  }

  const Token& advance() {
    const Token& tok = peek();
    if (!at_end()) {
      if (tok.is(Symbol::LBrace)) {
        ++brace_depth_;
      } else if (tok.is(Symbol::RBrace)) {
        --brace_depth_;
      }
      last_span_ = tok.span;
      ++pos_;
    }
    return tok;
  }

  bool accept(Symbol s) {
    if (peek().is(s)) {
      advance();
      return true;
    }
    return false;
  }

  bool accept(Keyword k) {
    if (peek().is(k)) {
      advance();
      return true;
    }
    return false;
  }

  static std::string describe(const Token& tok) {
    if (tok.kind == TokenKind::Whitespace) {
      return "end of input";
    }
    return "'" + tok.lexeme + "'";
  }

  [[noreturn]] void fail(const Token& at, std::string message) {
    error(at, std::move(message));
    throw SyntaxError{};
  }

  void error(const Token& at, std::string message) {
    Diagnostic d;
    d.code = std::string(codes::Syntax);
    d.file = std::string(file_);
    d.span = at.span;
    d.message = std::move(message);
    diagnostics_.push_back(std::move(d));
    syntax_error_ = true;
  }

  void expect(Symbol s, std::string_view what) {
    if (!accept(s)) {
      fail(peek(), "Expected " + std::string(what) + " but found " + describe(peek()) + ".");
    }
  }

  void expect(Keyword k, std::string_view what = {}) {
    if (!accept(k)) {
      const std::string expected =
          what.empty() ? "'" + std::string(keyword_spelling(k)) + "'" : std::string(what);
      fail(peek(), "Expected " + expected + " but found " + describe(peek()) + ".");
    }
  }

  Name expect_ident(std::string_view what) {
    const Token& tok = peek();
    if (tok.kind != TokenKind::Identifier) {
      fail(tok, "Expected " + std::string(what) + " but found " + describe(tok) + ".");
    }
    advance();
    return Name{tok.lexeme, tok.span};
  }

  bool adjacent(const Token& a, const Token& b) const { return a.span.end() == b.span.offset; }

  Span span_from(const Span& start) const { return merge(start, last_span_); }

  // ------------------------------------------------------------ structure

  Pattern parse_pattern_decl() {
    Pattern p;
    p.source = std::string(file_);
    const Span start = peek().span;
    expect(Keyword::Pattern);
    p.name = expect_ident("pattern name");
    expect(Keyword::ShortName, "'ShortName'");
    p.short_name = expect_ident("pattern short name");
    expect(Symbol::LBrace, "'{'");
    const int body_depth = brace_depth_;

    auto saved_types = std::move(component_types_);
    component_types_.clear();

    std::optional<Section> last;
    while (!at_end() && brace_depth_ >= body_depth &&
           !(peek().is(Symbol::RBrace) && brace_depth_ == body_depth)) {
      const auto section = section_of(peek());
      if (!section) {
        error(peek(), "Expected a section keyword (DTSpec, CTypes, ArchSpec, ArchGuarantee, "
                      "SubPattern) or '}' but found " + describe(peek()) + ".");
        advance();
        synchronize(body_depth);
        continue;
      }
      if (last && *section <= *last) {
        error(peek(), "Section '" + peek().lexeme + "' is repeated or out of order.");
      }
      last = section;
      try {
        parse_section(*section, p);
      } catch (const SyntaxError&) {
        synchronize(body_depth);
      }
    }
    if (!peek().is(Symbol::RBrace)) {
      fail(peek(), "Expected '}' to close pattern '" + p.name.text + "' but found " + describe(peek()) + ".");
    }
    advance();
    p.span = span_from(start);
    component_types_ = std::move(saved_types);
    return p;
  }

  // Skip to the next section keyword or the closing brace of the pattern
  // body whose contents sit at `body_depth`.
  void synchronize(int body_depth) {
    while (!at_end()) {
      if (brace_depth_ == body_depth && (section_of(peek()) || peek().is(Symbol::RBrace))) {
        return;
      }
      if (brace_depth_ < body_depth) {
        return;
      }
      advance();
    }
  }

  void parse_section(Section section, Pattern& p) {
    switch (section) {
      case Section::DTSpec:
        parse_dtspec(p);
        break;
      case Section::CTypes:
        parse_ctypes(p);
        break;
      case Section::ArchSpec:
      case Section::ArchGuarantee: {
        const bool spec = section == Section::ArchSpec;
        advance();
        auto block = parse_block();
        auto& slot = spec ? p.arch_spec : p.arch_guarantee;
        if (!slot) {
          slot = std::move(block);
        }
        break;
      }
      case Section::SubPattern:
        parse_subpatterns(p);
        break;
    }
  }

  void parse_dtspec(Pattern& p) {
    expect(Keyword::DTSpec);
    expect(Symbol::LBrace, "'{' after DTSpec");
    if (!peek().is(Symbol::RBrace)) {
      do {
        p.data_types.push_back(parse_datatype());
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::RBrace, "',' or '}' in DTSpec");
  }

  DataTypeSpec parse_datatype() {
    DataTypeSpec dt;
    expect(Keyword::DT);
    dt.name = expect_ident("data type name");
    expect(Symbol::LParen, "'(' after data type name");
    if (accept(Keyword::Sort)) {
      do {
        dt.sorts.push_back(expect_ident("sort name"));
      } while (accept(Symbol::Comma));
    }
    if (accept(Keyword::Operation)) {
      do {
        dt.operations.push_back(parse_operation());
      } while (accept(Symbol::Comma));
    }
    if (accept(Keyword::Predicate)) {
      do {
        dt.predicates.push_back(parse_predicate());
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::RParen, "')' to close data type '" + dt.name.text + "'");
    return dt;
  }

  SortRef parse_sort_ref() {
    SortRef ref;
    const Span start = peek().span;
    Name first = expect_ident("sort");
    if (peek().is(Symbol::Dot) && peek(1).kind == TokenKind::Identifier) {
      advance();
      ref.qualifier = std::move(first);
      ref.sort = expect_ident("sort");
    } else {
      ref.sort = std::move(first);
    }
    ref.span = span_from(start);
    return ref;
  }

  OperationSig parse_operation() {
    OperationSig op;
    op.name = expect_ident("operation name");
    expect(Symbol::Colon, "':' after operation name");
    if (!peek().is(Symbol::Implies)) {
      do {
        op.arg_sorts.push_back(parse_sort_ref());
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::Implies, "'=>' before the result sort");
    op.result_sort = parse_sort_ref();
    return op;
  }

  bool starts_signature(std::size_t ahead) const {
    return peek(ahead).kind == TokenKind::Identifier && peek(ahead + 1).is(Symbol::Colon);
  }

  PredicateSig parse_predicate() {
    PredicateSig pred;
    pred.name = expect_ident("predicate name");
    expect(Symbol::Colon, "':' after predicate name");
    pred.arg_sorts.push_back(parse_sort_ref());
    while (peek().is(Symbol::Comma) && !starts_signature(1)) {
      advance();
      pred.arg_sorts.push_back(parse_sort_ref());
    }
    return pred;
  }

  void parse_ctypes(Pattern& p) {
    expect(Keyword::CTypes);
    expect(Symbol::LBrace, "'{' after CTypes");
    if (!peek().is(Symbol::RBrace)) {
      do {
        p.component_types.push_back(parse_component_type());
        component_types_.insert(p.component_types.back().name.text);
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::RBrace, "',' or '}' in CTypes");
  }

  ComponentType parse_component_type() {
    ComponentType ct;
    expect(Keyword::CType);
    ct.name = expect_ident("component type name");
    expect(Keyword::ShortName, "'ShortName'");
    ct.short_name = expect_ident("component type short name");
    expect(Symbol::LBrace, "'{' after component type header");
    if (accept(Keyword::Id)) {
      expect(Symbol::LParen, "'(' after Id");
      expect(Keyword::Type);
      expect(Symbol::Colon, "':' after Type");
      ct.id_sort = parse_sort_ref();
      expect(Symbol::RParen, "')' to close Id clause");
    }
    if (accept(Keyword::InputPorts)) {
      parse_port_list(ct.input_ports, PortDirection::Input);
    }
    if (accept(Keyword::OutputPorts)) {
      parse_port_list(ct.output_ports, PortDirection::Output);
    }
    expect(Symbol::RBrace, "'}' to close component type '" + ct.name.text + "'");
    return ct;
  }

  void parse_port_list(std::vector<Port>& ports, PortDirection direction) {
    const Keyword port_kw = direction == PortDirection::Input ? Keyword::InputPort : Keyword::OutputPort;
    expect(Symbol::LBrace, "'{' to open port list");
    if (!peek().is(Symbol::RBrace)) {
      do {
        expect(port_kw);
        Port port;
        port.direction = direction;
        port.name = expect_ident("port name");
        expect(Symbol::LParen, "'(' after port name");
        expect(Keyword::Type);
        expect(Symbol::Colon, "':' after Type");
        port.sort = parse_sort_ref();
        if (peek().is(Keyword::Connects)) {
          if (direction == PortDirection::Input) {
            fail(peek(), "Input port '" + port.name.text + "' cannot declare connections.");
          }
          advance();
          do {
            PortTarget target;
            target.component_type = expect_ident("component type");
            expect(Symbol::Dot, "'.' in connection target");
            target.port = expect_ident("port name");
            port.connects.push_back(std::move(target));
          } while (accept(Symbol::Comma));
        }
        expect(Symbol::RParen, "')' to close port '" + port.name.text + "'");
        ports.push_back(std::move(port));
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::RBrace, "',' or '}' in port list");
  }

  void parse_subpatterns(Pattern& p) {
    expect(Keyword::SubPattern);
    expect(Symbol::LBrace, "'{' after SubPattern");
    if (!peek().is(Symbol::RBrace)) {
      do {
        p.sub_patterns.push_back(parse_pattern_decl());
      } while (accept(Symbol::Comma));
    }
    expect(Symbol::RBrace, "',' or '}' in SubPattern");
  }

  // --------------------------------------------------------------- blocks

  bool at_variable_decl() const { return peek().is(Keyword::Rig) || peek().is(Keyword::Flex); }

  FormulaBlock parse_block() {
    FormulaBlock block;
    const Span start = last_span_;
    expect(Symbol::LBrace, "'{' to open block");
    const int block_depth = brace_depth_;

    while (at_variable_decl()) {
      block.variables.push_back(parse_variable_decl());
      if (accept(Symbol::Comma) && !at_variable_decl()) {
        fail(peek(), "Expected a variable declaration after ','.");
      }
    }
    block_variables_ = block.variables;

    while (!at_end() && brace_depth_ >= block_depth &&
           !(peek().is(Symbol::RBrace) && brace_depth_ == block_depth)) {
      try {
        if (!starts_signature(0)) {
          fail(peek(), "Expected a labeled formula 'label: formula' or '}' but found " +
                           describe(peek()) + ".");
        }
        LabeledFormula lf;
        lf.label = expect_ident("formula label");
        advance();  // ':'
        binders_.clear();
        nesting_ = 0;
        lf.formula = formula();
        block.formulas.push_back(std::move(lf));
      } catch (const SyntaxError&) {
        skip_to_next_formula(block_depth);
      }
    }
    expect(Symbol::RBrace, "'}' to close block");
    block.span = span_from(start);
    block_variables_.clear();
    return block;
  }

  void skip_to_next_formula(int block_depth) {
    bool first = true;
    while (!at_end()) {
      if (brace_depth_ < block_depth) {
        return;
      }
      if (brace_depth_ == block_depth) {
        if (peek().is(Symbol::RBrace)) {
          return;
        }
        const bool after_binder = pos_ > 0 && (tokens_[pos_ - 1].is(Symbol::Exists) ||
                                               tokens_[pos_ - 1].is(Symbol::Forall));
        if (!first && starts_signature(0) && !after_binder) {
          return;
        }
      }
      first = false;
      advance();
    }
  }

  VariableDecl parse_variable_decl() {
    VariableDecl decl;
    decl.kind = advance().is(Keyword::Rig) ? VariableKind::Rigid : VariableKind::Flexible;
    decl.name = expect_ident("variable name");
    expect(Symbol::Colon, "':' after variable name");
    decl.target = parse_target();
    return decl;
  }

  // `Type`, `Sort` or `DataType.Sort`. In binder annotations a qualified
  // sort must be written without spaces around the dot so that the binder
  // dot in `∃x: Switch. φ` is not mistaken for a qualifier.
  VariableTarget parse_target(bool binder_annotation = false) {
    VariableTarget target;
    const Span start = peek().span;
    Name first = expect_ident("component type or sort");
    const bool qualified =
        peek().is(Symbol::Dot) && peek(1).kind == TokenKind::Identifier &&
        (!binder_annotation || (adjacent(tokens_[pos_ - 1], peek()) && adjacent(peek(), peek(1))));
    if (qualified) {
      advance();
      target.kind = VariableTarget::Kind::Data;
      target.ref.qualifier = std::move(first);
      target.ref.sort = expect_ident("sort");
    } else {
      target.kind = component_types_.count(first.text) ? VariableTarget::Kind::Component
                                                       : VariableTarget::Kind::Data;
      target.ref.sort = std::move(first);
    }
    target.ref.span = span_from(start);
    return target;
  }

  // ------------------------------------------------------------- formulas

  struct NestingGuard {
    explicit NestingGuard(Parser& p) : parser(p) {
      if (++parser.nesting_ > kMaxNesting) {
        parser.fail(parser.peek(), "Formula nesting is too deep.");
      }
    }
    ~NestingGuard() { --parser.nesting_; }
    Parser& parser;
  };

  FormulaPtr formula() {
    NestingGuard guard(*this);
    return weak_until();
  }

  FormulaPtr weak_until() {
    const Span start = peek().span;
    auto lhs = implication();
    if (accept(Keyword::WeakUntil)) {
      auto rhs = weak_until();
      return make_formula(Binary{BinaryOp::WeakUntil, std::move(lhs), std::move(rhs)}, span_from(start));
    }
    return lhs;
  }

  FormulaPtr implication() {
    const Span start = peek().span;
    auto lhs = disjunction();
    if (accept(Symbol::Implies)) {
      NestingGuard guard(*this);
      auto rhs = implication();
      return make_formula(Binary{BinaryOp::Implies, std::move(lhs), std::move(rhs)}, span_from(start));
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    const Span start = peek().span;
    auto lhs = conjunction();
    while (accept(Symbol::Or)) {
      auto rhs = conjunction();
      lhs = make_formula(Binary{BinaryOp::Or, std::move(lhs), std::move(rhs)}, span_from(start));
    }
    return lhs;
  }

  FormulaPtr conjunction() {
    const Span start = peek().span;
    auto lhs = unary();
    while (accept(Symbol::And)) {
      auto rhs = unary();
      lhs = make_formula(Binary{BinaryOp::And, std::move(lhs), std::move(rhs)}, span_from(start));
    }
    return lhs;
  }

  bool at_v_binder() const {
    const Token& tok = peek();
    return tok.kind == TokenKind::Identifier && tok.lexeme.size() >= 2 && tok.lexeme[0] == 'V' &&
           peek(1).is(Symbol::Dot) &&
           !(peek(2).kind == TokenKind::Identifier && adjacent(peek(1), peek(2)));
  }

  FormulaPtr unary() {
    NestingGuard guard(*this);
    const Span start = peek().span;
    if (accept(Symbol::Not)) {
      auto operand = unary();
      return make_formula(Negation{std::move(operand)}, span_from(start));
    }
    if (accept(Keyword::Globally)) {
      auto body = formula();
      return make_formula(Globally{std::move(body)}, span_from(start));
    }
    if (peek().is(Symbol::Exists) || peek().is(Symbol::Forall)) {
      const Quantifier q = advance().is(Symbol::Exists) ? Quantifier::Exists : Quantifier::Forall;
      Binder binder;
      binder.name = expect_ident("bound variable name");
      if (accept(Symbol::Colon)) {
        binder.annotated = true;
        binder.target = parse_target(/*binder_annotation=*/true);
      }
      expect(Symbol::Dot, "'.' after bound variable");
      return quantified(q, std::move(binder), start);
    }
    if (at_v_binder()) {
      const Token& tok = advance();
      Binder binder;
      binder.name = Name{tok.lexeme.substr(1), Span{tok.span.offset + 1, tok.span.length - 1,
                                                    tok.span.line, tok.span.column + 1}};
      advance();  // '.'
      return quantified(Quantifier::Forall, std::move(binder), start);
    }
    return primary();
  }

  FormulaPtr quantified(Quantifier q, Binder binder, const Span& start) {
    if (!binder.annotated) {
      binder.target = lookup_target(binder.name.text);
    }
    binders_.emplace_back(binder.name.text, binder.target);
    auto body = formula();
    binders_.pop_back();
    return make_formula(Quantified{q, std::move(binder), std::move(body)}, span_from(start));
  }

  std::optional<VariableTarget> lookup_target(const std::string& name) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
      if (it->first == name) {
        return it->second;
      }
    }
    for (const auto& decl : block_variables_) {
      if (decl.name.text == name) {
        return decl.target;
      }
    }
    return std::nullopt;
  }

  FormulaPtr primary() {
    const Span start = peek().span;
    if (accept(Symbol::LParen)) {
      auto inner = formula();
      expect(Symbol::RParen, "')'");
      return inner;
    }
    const Token& tok = peek();
    if (tok.kind != TokenKind::Identifier) {
      fail(tok, "Expected a formula but found " + describe(tok) + ".");
    }
    if (peek(1).is(Symbol::LParen)) {
      if (tok.lexeme == "val") {
        advance();
        advance();
        auto port = port_read();
        expect(Symbol::Comma, "',' in val(port, term)");
        auto value = term();
        expect(Symbol::RParen, "')' to close val");
        return make_formula(ValAtom{std::move(port), std::move(value)}, span_from(start));
      }
      if (tok.lexeme == "cAct") {
        advance();
        advance();
        VarUse v{expect_ident("component variable")};
        expect(Symbol::RParen, "')' to close cAct");
        return make_formula(CActAtom{std::move(v)}, span_from(start));
      }
      if (tok.lexeme == "conn") {
        advance();
        advance();
        auto from = port_read();
        expect(Symbol::Comma, "',' in conn(port, port)");
        auto to = port_read();
        expect(Symbol::RParen, "')' to close conn");
        return make_formula(ConnAtom{std::move(from), std::move(to)}, span_from(start));
      }
      if (tok.lexeme == "eq") {
        advance();
        advance();
        VarUse lhs{expect_ident("component variable")};
        expect(Symbol::Comma, "',' in eq(x, y)");
        VarUse rhs{expect_ident("component variable")};
        expect(Symbol::RParen, "')' to close eq");
        return make_formula(EqAtom{std::move(lhs), std::move(rhs)}, span_from(start));
      }
    }
    auto lhs = term();
    if (accept(Symbol::Equals)) {
      auto rhs = term();
      return make_formula(TermEqAtom{std::move(lhs), std::move(rhs)}, span_from(start));
    }
    if (auto* app = std::get_if<FunctionApp>(&lhs.node)) {
      return make_formula(PredicateAtom{std::move(app->function), std::move(app->args)}, span_from(start));
    }
    fail(peek(), "Expected '=' after term in formula position but found " + describe(peek()) + ".");
  }

  PortRead port_read() {
    const Span start = peek().span;
    PortRead read;
    read.var = VarUse{expect_ident("component variable")};
    expect(Symbol::Dot, "'.' in port reference");
    read.port = expect_ident("port name");
    read.span = span_from(start);
    return read;
  }

  Term term() {
    NestingGuard guard(*this);
    const Span start = peek().span;
    Name first = expect_ident("term");
    if (!(peek().is(Symbol::Dot) && peek(1).kind == TokenKind::Identifier)) {
      return Term{DataVar{VarUse{std::move(first)}}, span_from(start)};
    }
    advance();
    Name second = expect_ident("name");
    if (accept(Symbol::LParen)) {
      FunctionApp app;
      app.function = QualifiedName{std::move(first), std::move(second)};
      if (!peek().is(Symbol::RParen)) {
        do {
          app.args.push_back(term());
        } while (accept(Symbol::Comma));
      }
      expect(Symbol::RParen, "',' or ')' in argument list");
      return Term{std::move(app), span_from(start)};
    }
    if (second.text == "id") {
      return Term{IdRead{VarUse{std::move(first)}}, span_from(start)};
    }
    const Span span = span_from(start);
    return Term{PortRead{VarUse{std::move(first)}, std::move(second), span}, span};
  }

  std::string_view file_;
  std::vector<Token> tokens_;
  Token eof_;
  std::size_t pos_ = 0;
  int brace_depth_ = 0;
  int nesting_ = 0;
  Span last_span_;
  std::vector<Diagnostic> diagnostics_;
  bool syntax_error_ = false;

  std::set<std::string, std::less<>> component_types_;
  std::vector<VariableDecl> block_variables_;
  std::vector<std::pair<std::string, std::optional<VariableTarget>>> binders_;
};

}  // namespace

ParseResult parse_pattern(std::string_view text, std::string_view file) {
  return Parser(text, file).parse_document();
}

FormulaParseResult parse_formula(std::string_view text, const FormulaScope& scope, std::string_view file) {
  return Parser(text, file).parse_standalone_formula(scope);
}

}  // namespace factum
