#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "helpers.hpp"
#include "preludec/lexer.hpp"
#include "preludec/parser.hpp"

using namespace preludec;
using namespace preludec::testing;

namespace {

std::vector<TokenKind> kinds_of(const std::string& source) {
  LexResult lexed = tokenize(source, "<test>");
  REQUIRE(!has_errors(lexed.diagnostics));
  std::vector<TokenKind> out;
  for (const Token& t : lexed.tokens) out.push_back(t.kind);
  return out;
}

Program parse_ok(const std::string& source, const std::string& name = "<test>") {
  ParseResult pr = parse_program(source, name);
  for (const Diagnostic& d : pr.diagnostics) {
    CAPTURE(render_diagnostic(d));
    CHECK(d.severity != Severity::Error);
  }
  return std::move(pr.program);
}

}  // namespace

TEST_CASE("tokenizer splits clock operators from rational literals") {
  CHECK(kinds_of("i/^10") == std::vector<TokenKind>{TokenKind::Ident, TokenKind::DivOp,
                                                    TokenKind::IntLit, TokenKind::EndOfFile});
  CHECK(kinds_of("i/^^10") == std::vector<TokenKind>{TokenKind::Ident, TokenKind::DivQueueOp,
                                                     TokenKind::IntLit, TokenKind::EndOfFile});
  CHECK(kinds_of("x*^4 ~> 1/2") ==
        std::vector<TokenKind>{TokenKind::Ident, TokenKind::MulOp, TokenKind::IntLit,
                               TokenKind::ShiftOp, TokenKind::RatLit, TokenKind::EndOfFile});
  CHECK(kinds_of("") == std::vector<TokenKind>{TokenKind::EndOfFile});
  CHECK(kinds_of("rate (10, 0)") ==
        std::vector<TokenKind>{TokenKind::KwRate, TokenKind::LParen, TokenKind::IntLit,
                               TokenKind::Comma, TokenKind::IntLit, TokenKind::RParen,
                               TokenKind::EndOfFile});
}

TEST_CASE("tokenizer handles literals, comments, and keywords") {
  LexResult lexed = tokenize("-- intro comment\n-3 1/2 true fby -- trailing\ncons", "<test>");
  REQUIRE(!has_errors(lexed.diagnostics));
  REQUIRE(lexed.tokens.size() == 6);
  CHECK(lexed.tokens[5].kind == TokenKind::EndOfFile);
  CHECK(lexed.tokens[0].kind == TokenKind::IntLit);
  CHECK(lexed.tokens[0].int_value == -3);
  CHECK(lexed.tokens[0].loc.line == 2);
  CHECK(lexed.tokens[0].loc.col == 1);
  CHECK(lexed.tokens[1].kind == TokenKind::RatLit);
  CHECK(lexed.tokens[1].rat_value == Rational(1, 2));
  CHECK(lexed.tokens[2].kind == TokenKind::KwTrue);
  CHECK(lexed.tokens[3].kind == TokenKind::KwFby);
  CHECK(lexed.tokens[4].kind == TokenKind::KwCons);
  CHECK(lexed.tokens[4].loc.line == 3);
}

TEST_CASE("tokenizer reports illegal characters and malformed rationals") {
  LexResult bad = tokenize("x @ y", "<test>");
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].code == codes::IllegalCharacter);
  CHECK(bad.diagnostics[0].message == "illegal character '@'");
  // lexing continues after the bad character
  CHECK(bad.tokens.size() == 3);

  LexResult zero = tokenize("1/0", "<test>");
  REQUIRE(zero.diagnostics.size() == 1);
  CHECK(zero.diagnostics[0].code == codes::IllegalCharacter);
}

TEST_CASE("sampling example parses into the expected shape") {
  Program p = parse_ok(read_file(corpus_path("figure1.plu")), "figure1.plu");
  REQUIRE(p.nodes.size() == 3);
  CHECK(p.sensors.size() == 1);
  CHECK(p.actuators.size() == 1);
  CHECK(p.sensors[0].name == "i");
  CHECK(p.actuators[0].name == "o");

  CHECK(p.nodes[0].name == "database");
  CHECK(p.nodes[0].imported);
  CHECK(p.nodes[1].name == "controller");
  CHECK(p.nodes[1].imported);
  REQUIRE(p.nodes[1].inputs.size() == 2);
  CHECK(p.nodes[1].outputs.size() == 2);

  const NodeDecl* sampling = find_node(p, "sampling");
  REQUIRE(sampling != nullptr);
  CHECK(!sampling->imported);
  REQUIRE(sampling->equations.size() == 2);
  CHECK(sampling->equations[0].lhs == std::vector<std::string>{"o", "command"});
  CHECK(sampling->equations[0].rhs->kind == ExprKind::Call);
  CHECK(sampling->equations[0].rhs->name == "controller");
  CHECK(sampling->locals.size() == 2);
  REQUIRE(sampling->inputs.size() == 1);
  CHECK(sampling->inputs[0].rate.period == 10);
  CHECK(sampling->inputs[0].rate.phase == Rational(0));
}

TEST_CASE("monitor example parses when over an undersample") {
  Program p = parse_ok(read_file(corpus_path("figure2.plu")), "figure2.plu");
  const NodeDecl* monitor = find_node(p, "monitor");
  REQUIRE(monitor != nullptr);
  REQUIRE(monitor->equations.size() == 1);
  const Expr& rhs = *monitor->equations[0].rhs;
  REQUIRE(rhs.kind == ExprKind::When);
  const Expr& data = *rhs.args[0];
  const Expr& cond = *rhs.args[1];
  REQUIRE(data.kind == ExprKind::DivClock);
  CHECK(data.int_value == 10);
  CHECK(data.args[0]->kind == ExprKind::Var);
  CHECK(data.args[0]->name == "temperature");
  CHECK(cond.kind == ExprKind::Var);
  CHECK(cond.name == "fault");

  REQUIRE(monitor->inputs.size() == 2);
  CHECK(monitor->inputs[0].value_type == SimpleType::Int);
  CHECK(monitor->inputs[1].value_type == SimpleType::Bool);
}

TEST_CASE("fby parses right associative and when left associative") {
  Program p = parse_ok(
      "node n (a: int rate (4, 0); c: bool rate (4, 0)) returns (o: int rate (4, 0))\n"
      "let o = 0 fby 1 fby a; tel\n"
      "node m (a: int rate (4, 0); c: bool rate (4, 0)) returns (o: int rate (4, 0))\n"
      "let o = a when c when c; tel\n");
  const Expr& fby = *find_node(p, "n")->equations[0].rhs;
  REQUIRE(fby.kind == ExprKind::Fby);
  CHECK(fby.args[0]->kind == ExprKind::ConstInt);
  CHECK(fby.args[1]->kind == ExprKind::Fby);

  const Expr& when = *find_node(p, "m")->equations[0].rhs;
  REQUIRE(when.kind == ExprKind::When);
  CHECK(when.args[0]->kind == ExprKind::When);
  CHECK(when.args[1]->kind == ExprKind::Var);
}

TEST_CASE("missing let body is a syntax error") {
  ParseResult pr = parse_program("node n () returns ()\n", "<test>");
  REQUIRE(has_errors(pr.diagnostics));
  CHECK(pr.diagnostics[0].code == codes::Syntax);
}

TEST_CASE("non-constant fby head is rejected at parse time") {
  ParseResult pr = parse_program(
      "node n (a: int rate (4, 0)) returns (o: int rate (4, 0))\n"
      "let o = a fby a; tel\n",
      "<test>");
  REQUIRE(has_errors(pr.diagnostics));
  CHECK(pr.diagnostics[0].code == codes::Syntax);
  CHECK(pr.diagnostics[0].message ==
        "first operand of fby must be a constant literal");
}

TEST_CASE("parser recovers at the next declaration") {
  ParseResult pr = parse_program(read_file(corpus_path("syntax_errors.plu")),
                                 "syntax_errors.plu");
  CHECK(has_errors(pr.diagnostics));
  // the trailing well-formed node still parses
  CHECK(find_node(pr.program, "fine") != nullptr);
}

TEST_CASE("corpus programs survive a print and reparse round trip") {
  const char* files[] = {"figure1.plu", "figure2.plu", "showcase.plu", "negstart.plu"};
  for (const char* name : files) {
    CAPTURE(name);
    Program p = parse_ok(read_file(corpus_path(name)), name);
    std::string printed = program_to_source(p);
    Program reparsed = parse_ok(printed, name);
    CHECK(program_to_source(reparsed) == printed);
  }
}

namespace {

// Random expressions over two integer flows and one boolean flow. The heads
// of fby/cons stay literal so the printed text is parseable.
ExprPtr random_expr(Rng& rng, int depth) {
  auto leaf = [&] {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Var;
    e->name = rng.pick(0, 1) == 0 ? "a" : "b";
    return e;
  };
  if (depth <= 0) return leaf();
  auto sub = [&] { return random_expr(rng, depth - 1); };
  auto lit = [&] {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::ConstInt;
    e->int_value = rng.pick(-9, 9);
    return e;
  };
  auto cond = [&] {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Var;
    e->name = "c";
    return e;
  };
  auto e = std::make_unique<Expr>();
  switch (rng.pick(0, 8)) {
    case 0:
      e->kind = ExprKind::MulClock;
      e->int_value = rng.pick(1, 12);
      e->args.push_back(sub());
      break;
    case 1:
      e->kind = ExprKind::DivClock;
      e->int_value = rng.pick(1, 12);
      e->args.push_back(sub());
      break;
    case 2:
      e->kind = ExprKind::DivQueue;
      e->int_value = rng.pick(1, 12);
      e->args.push_back(sub());
      break;
    case 3:
      e->kind = ExprKind::ShiftClock;
      e->rat_value = rng.rational(20, 8);
      e->args.push_back(sub());
      break;
    case 4:
      e->kind = ExprKind::Fby;
      e->args.push_back(lit());
      e->args.push_back(sub());
      break;
    case 5:
      e->kind = ExprKind::Cons;
      e->args.push_back(lit());
      e->args.push_back(sub());
      break;
    case 6:
      e->kind = ExprKind::Tail;
      e->args.push_back(sub());
      break;
    case 7:
      e->kind = ExprKind::When;
      e->args.push_back(sub());
      e->args.push_back(cond());
      break;
    case 8:
      e->kind = ExprKind::Merge;
      e->args.push_back(cond());
      e->args.push_back(sub());
      e->args.push_back(sub());
      break;
  }
  return e;
}

}  // namespace

TEST_CASE("random expressions survive a print and reparse round trip") {
  Rng rng(20260815);
  for (int iter = 0; iter < 500; ++iter) {
    CAPTURE(iter);
    Program p;
    p.filename = "<random>";
    NodeDecl node;
    node.name = "n";
    for (const char* in : {"a", "b"}) {
      FlowDecl d;
      d.name = in;
      d.value_type = SimpleType::Int;
      d.rate = RateAnnotation{BigInt(4), Rational(0), {}};
      node.inputs.push_back(d);
    }
    FlowDecl c;
    c.name = "c";
    c.value_type = SimpleType::Bool;
    c.rate = RateAnnotation{BigInt(4), Rational(0), {}};
    node.inputs.push_back(c);
    FlowDecl o;
    o.name = "o";
    o.value_type = SimpleType::Int;
    o.rate = RateAnnotation{BigInt(4), Rational(0), {}};
    node.outputs.push_back(o);
    Equation eq;
    eq.lhs = {"o"};
    eq.rhs = random_expr(rng, 4);
    node.equations.push_back(std::move(eq));
    p.nodes.push_back(std::move(node));

    std::string printed = program_to_source(p);
    CAPTURE(printed);
    ParseResult pr = parse_program(printed, "<random>");
    REQUIRE(!has_errors(pr.diagnostics));
    CHECK(program_to_source(pr.program) == printed);
  }
}

namespace {

void check_locs(const Expr& e, int line_count) {
  CHECK(e.loc.line >= 1);
  CHECK(e.loc.line <= line_count);
  CHECK(e.loc.col >= 1);
  for (const ExprPtr& a : e.args) check_locs(*a, line_count);
}

}  // namespace

TEST_CASE("every parsed location falls inside the source extent") {
  std::string source = read_file(corpus_path("figure1.plu"));
  int line_count = 1 + static_cast<int>(std::count(source.begin(), source.end(), '\n'));
  Program p = parse_ok(source, "figure1.plu");
  for (const NodeDecl& n : p.nodes) {
    CHECK(n.loc.line >= 1);
    CHECK(n.loc.line <= line_count);
    for (const auto& group : {n.inputs, n.outputs, n.locals}) {
      for (const FlowDecl& d : group) {
        CHECK(d.loc.line >= 1);
        CHECK(d.loc.line <= line_count);
        CHECK(d.loc.col >= 1);
      }
    }
    for (const Equation& eq : n.equations) {
      CHECK(eq.loc.line >= 1);
      CHECK(eq.loc.line <= line_count);
      check_locs(*eq.rhs, line_count);
    }
  }
}
