#pragma once

#include "preludec/rational.hpp"
#include "preludec/source.hpp"

#include <memory>
#include <string>
#include <vector>

namespace preludec {

enum class TokenKind {
  Ident,
  IntLit,
  RatLit,
  KwImported,
  KwNode,
  KwReturns,
  KwVar,
  KwLet,
  KwTel,
  KwSensor,
  KwActuator,
  KwRate,
  KwFby,
  KwWhen,
  KwMerge,
  KwTail,
  KwCons,
  KwQueue,
  KwInt,
  KwBool,
  KwTrue,
  KwFalse,
  MulOp,       // *^
  DivOp,       // /^
  DivQueueOp,  // /^^
  ShiftOp,     // ~>
  Equals,
  Comma,
  Semicolon,
  Colon,
  LParen,
  RParen,
  EndOfFile,
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  SourceLocation loc;
  BigInt int_value;    // IntLit
  Rational rat_value;  // RatLit
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
  Var,
  ConstInt,
  ConstBool,
  MulClock,   // e *^ k
  DivClock,   // e /^ k
  DivQueue,   // e /^^ k
  ShiftClock, // e ~> q
  Fby,        // c fby e
  Cons,       // cons(c, e)
  Tail,       // tail(e)
  When,       // e when cond
  Merge,      // merge(cond, t, f)
  Call,       // name(args)
};

// One struct for all expression forms; the `kind` field selects which payload
// members are meaningful. args layout per kind:
//   MulClock/DivClock/DivQueue/ShiftClock/Tail: [operand]
//   Fby/Cons:                                  [head, body]
//   When:                                      [data, cond]
//   Merge:                                     [cond, on_true, on_false]
//   Call:                                      arguments in order
struct Expr {
  ExprKind kind;
  SourceLocation loc;
  std::string name;        // Var, Call
  BigInt int_value;        // ConstInt; factor of MulClock/DivClock/DivQueue
  bool bool_value = false; // ConstBool
  Rational rat_value;      // ShiftClock amount
  std::vector<ExprPtr> args;
};

ExprPtr clone_expr(const Expr& e);

enum class SimpleType { Int, Bool };

struct RateAnnotation {
  BigInt period;
  Rational phase;
  SourceLocation loc;
};

// One declared flow: a node parameter, output, or local.
struct FlowDecl {
  std::string name;
  SimpleType value_type = SimpleType::Int;
  RateAnnotation rate;
  SourceLocation loc;
};

struct Equation {
  std::vector<std::string> lhs;
  std::vector<SourceLocation> lhs_locs;
  ExprPtr rhs;
  SourceLocation loc;
};

struct NodeDecl {
  std::string name;
  bool imported = false;
  std::vector<FlowDecl> inputs;
  std::vector<FlowDecl> outputs;
  std::vector<FlowDecl> locals;
  std::vector<Equation> equations;  // empty for imported nodes
  SourceLocation loc;
};

struct EnvDecl {  // sensor or actuator
  std::string name;
  SourceLocation loc;
};

struct Program {
  std::string filename;
  std::vector<NodeDecl> nodes;  // source order
  std::vector<EnvDecl> sensors;
  std::vector<EnvDecl> actuators;
};

const NodeDecl* find_node(const Program& p, const std::string& name);

// Renders an Expr / Program back to parseable surface syntax. The printer is
// exercised by the print/parse round-trip property.
std::string expr_to_source(const Expr& e);
std::string program_to_source(const Program& p);

}  // namespace preludec
