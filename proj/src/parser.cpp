#include "preludec/parser.hpp"

#include <initializer_list>
#include <sstream>
#include <utility>

namespace preludec {

namespace {

// Thrown to unwind to the nearest declaration boundary; the declaration loop
// catches it and resynchronizes so later declarations still get diagnostics.
struct ParseAbort {};

class Parser {
 public:
  Parser(LexResult lexed, const std::string& filename)
      : tokens_(std::move(lexed.tokens)), diagnostics_(std::move(lexed.diagnostics)) {
    program_.filename = filename;
  }

  ParseResult run() {
    while (!at(TokenKind::EndOfFile)) {
      std::size_t start = pos_;
      try {
        parse_decl();
      } catch (const ParseAbort&) {
        if (pos_ == start) ++pos_;
        synchronize();
      }
    }
    return ParseResult{std::move(program_), std::move(diagnostics_)};
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }

  const Token& advance() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  const Token& expect(TokenKind kind) {
    if (at(kind)) return advance();
    fail({token_kind_name(kind)});
  }

  [[noreturn]] void fail(std::initializer_list<const char*> expected) {
    std::ostringstream msg;
    msg << "expected ";
    std::size_t i = 0;
    for (const char* e : expected) {
      if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
      msg << e;
      ++i;
    }
    msg << ", found " << token_kind_name(peek().kind);
    error_at(peek().loc, msg.str());
    throw ParseAbort{};
  }

  void error_at(SourceLocation loc, std::string message) {
    diagnostics_.push_back(
        Diagnostic::error(codes::Syntax, std::move(message), program_.filename, loc));
  }

  void synchronize() {
    while (!at(TokenKind::EndOfFile) && !at(TokenKind::KwImported) && !at(TokenKind::KwNode) &&
           !at(TokenKind::KwSensor) && !at(TokenKind::KwActuator)) {
      advance();
    }
  }

  void parse_decl() {
    if (accept(TokenKind::KwSensor)) {
      const Token& name = expect(TokenKind::Ident);
      program_.sensors.push_back(EnvDecl{name.text, name.loc});
      expect(TokenKind::Semicolon);
      return;
    }
    if (accept(TokenKind::KwActuator)) {
      const Token& name = expect(TokenKind::Ident);
      program_.actuators.push_back(EnvDecl{name.text, name.loc});
      expect(TokenKind::Semicolon);
      return;
    }
    bool imported = accept(TokenKind::KwImported);
    if (!at(TokenKind::KwNode)) {
      fail({"'node'", "'imported'", "'sensor'", "'actuator'"});
    }
    advance();
    parse_node(imported);
  }

  void parse_node(bool imported) {
    NodeDecl node;
    node.imported = imported;
    const Token& name = expect(TokenKind::Ident);
    node.name = name.text;
    node.loc = name.loc;
    expect(TokenKind::LParen);
    node.inputs = parse_flow_decl_groups();
    expect(TokenKind::RParen);
    expect(TokenKind::KwReturns);
    expect(TokenKind::LParen);
    node.outputs = parse_flow_decl_groups();
    expect(TokenKind::RParen);
    if (imported) {
      expect(TokenKind::Semicolon);
      program_.nodes.push_back(std::move(node));
      return;
    }
    while (accept(TokenKind::KwVar)) {
      parse_flow_decl_group(node.locals);
      expect(TokenKind::Semicolon);
    }
    expect(TokenKind::KwLet);
    while (!at(TokenKind::KwTel)) {
      if (at(TokenKind::EndOfFile)) fail({"an equation", "'tel'"});
      node.equations.push_back(parse_equation());
      if (!accept(TokenKind::Semicolon) && !at(TokenKind::KwTel)) {
        fail({"';'", "'tel'"});
      }
    }
    advance();
    program_.nodes.push_back(std::move(node));
  }

  // One group: `a, b: [int|bool] rate (n, p)`.
  void parse_flow_decl_group(std::vector<FlowDecl>& out) {
    std::vector<std::pair<std::string, SourceLocation>> names;
    const Token& first = expect(TokenKind::Ident);
    names.emplace_back(first.text, first.loc);
    while (accept(TokenKind::Comma)) {
      const Token& more = expect(TokenKind::Ident);
      names.emplace_back(more.text, more.loc);
    }
    expect(TokenKind::Colon);
    SimpleType type = SimpleType::Int;
    if (accept(TokenKind::KwBool)) type = SimpleType::Bool;
    else accept(TokenKind::KwInt);
    RateAnnotation rate = parse_rate();
    for (auto& [flow_name, loc] : names) {
      out.push_back(FlowDecl{std::move(flow_name), type, rate, loc});
    }
  }

  std::vector<FlowDecl> parse_flow_decl_groups() {
    std::vector<FlowDecl> out;
    if (at(TokenKind::RParen)) return out;
    for (;;) {
      parse_flow_decl_group(out);
      if (accept(TokenKind::Semicolon) || accept(TokenKind::Comma)) continue;
      return out;
    }
  }

  RateAnnotation parse_rate() {
    const Token& kw = expect(TokenKind::KwRate);
    expect(TokenKind::LParen);
    const Token& period = expect(TokenKind::IntLit);
    expect(TokenKind::Comma);
    Rational phase;
    if (at(TokenKind::IntLit)) phase = Rational(advance().int_value);
    else if (at(TokenKind::RatLit)) phase = advance().rat_value;
    else fail({"integer literal", "rational literal"});
    expect(TokenKind::RParen);
    return RateAnnotation{period.int_value, std::move(phase), kw.loc};
  }

  Equation parse_equation() {
    Equation eq;
    eq.loc = peek().loc;
    if (accept(TokenKind::LParen)) {
      do {
        const Token& name = expect(TokenKind::Ident);
        eq.lhs.push_back(name.text);
        eq.lhs_locs.push_back(name.loc);
      } while (accept(TokenKind::Comma));
      expect(TokenKind::RParen);
    } else {
      const Token& name = expect(TokenKind::Ident);
      eq.lhs.push_back(name.text);
      eq.lhs_locs.push_back(name.loc);
    }
    expect(TokenKind::Equals);
    eq.rhs = parse_expr();
    return eq;
  }

  ExprPtr make_expr(ExprKind kind, SourceLocation loc) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->loc = loc;
    return e;
  }

  ExprPtr parse_expr() { return parse_fby(); }

  ExprPtr parse_fby() {
    ExprPtr head = parse_when();
    if (!at(TokenKind::KwFby)) return head;
    SourceLocation loc = advance().loc;
    ExprPtr body = parse_fby();
    require_const_head(*head, "fby");
    ExprPtr e = make_expr(ExprKind::Fby, loc);
    e->args.push_back(std::move(head));
    e->args.push_back(std::move(body));
    return e;
  }

  ExprPtr parse_when() {
    ExprPtr e = parse_postfix();
    while (at(TokenKind::KwWhen)) {
      SourceLocation loc = advance().loc;
      ExprPtr cond = parse_postfix();
      ExprPtr when = make_expr(ExprKind::When, loc);
      when->args.push_back(std::move(e));
      when->args.push_back(std::move(cond));
      e = std::move(when);
    }
    return e;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    for (;;) {
      ExprKind kind;
      if (at(TokenKind::MulOp)) kind = ExprKind::MulClock;
      else if (at(TokenKind::DivOp)) kind = ExprKind::DivClock;
      else if (at(TokenKind::DivQueueOp)) kind = ExprKind::DivQueue;
      else if (at(TokenKind::ShiftOp)) kind = ExprKind::ShiftClock;
      else return e;
      SourceLocation loc = advance().loc;
      ExprPtr op = make_expr(kind, loc);
      if (kind == ExprKind::ShiftClock) {
        if (at(TokenKind::IntLit)) op->rat_value = Rational(advance().int_value);
        else if (at(TokenKind::RatLit)) op->rat_value = advance().rat_value;
        else fail({"integer literal", "rational literal"});
      } else {
        op->int_value = expect(TokenKind::IntLit).int_value;
      }
      op->args.push_back(std::move(e));
      e = std::move(op);
    }
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLit: {
        ExprPtr e = make_expr(ExprKind::ConstInt, t.loc);
        e->int_value = advance().int_value;
        return e;
      }
      case TokenKind::KwTrue:
      case TokenKind::KwFalse: {
        ExprPtr e = make_expr(ExprKind::ConstBool, t.loc);
        e->bool_value = advance().kind == TokenKind::KwTrue;
        return e;
      }
      case TokenKind::KwTail: {
        SourceLocation loc = advance().loc;
        expect(TokenKind::LParen);
        ExprPtr operand = parse_expr();
        expect(TokenKind::RParen);
        ExprPtr e = make_expr(ExprKind::Tail, loc);
        e->args.push_back(std::move(operand));
        return e;
      }
      case TokenKind::KwCons: {
        SourceLocation loc = advance().loc;
        expect(TokenKind::LParen);
        ExprPtr head = parse_expr();
        expect(TokenKind::Comma);
        ExprPtr body = parse_expr();
        expect(TokenKind::RParen);
        require_const_head(*head, "cons");
        ExprPtr e = make_expr(ExprKind::Cons, loc);
        e->args.push_back(std::move(head));
        e->args.push_back(std::move(body));
        return e;
      }
      case TokenKind::KwMerge: {
        SourceLocation loc = advance().loc;
        expect(TokenKind::LParen);
        ExprPtr e = make_expr(ExprKind::Merge, loc);
        e->args.push_back(parse_expr());
        expect(TokenKind::Comma);
        e->args.push_back(parse_expr());
        expect(TokenKind::Comma);
        e->args.push_back(parse_expr());
        expect(TokenKind::RParen);
        return e;
      }
      case TokenKind::Ident: {
        const Token& name = advance();
        if (!accept(TokenKind::LParen)) {
          ExprPtr e = make_expr(ExprKind::Var, name.loc);
          e->name = name.text;
          return e;
        }
        ExprPtr e = make_expr(ExprKind::Call, name.loc);
        e->name = name.text;
        if (!at(TokenKind::RParen)) {
          do {
            e->args.push_back(parse_expr());
          } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RParen);
        return e;
      }
      case TokenKind::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(TokenKind::RParen);
        return e;
      }
      default:
        fail({"an expression"});
    }
  }

  void require_const_head(const Expr& head, const char* op) {
    if (head.kind == ExprKind::ConstInt || head.kind == ExprKind::ConstBool) return;
    error_at(head.loc, std::string("first operand of ") + op + " must be a constant literal");
  }

  std::vector<Token> tokens_;
  std::vector<Diagnostic> diagnostics_;
  Program program_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_tokens(LexResult lexed, const std::string& filename) {
  return Parser(std::move(lexed), filename).run();
}

ParseResult parse_program(std::string_view source, const std::string& filename) {
  return parse_tokens(tokenize(source, filename), filename);
}

}  // namespace preludec
