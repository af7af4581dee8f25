#pragma once

#include "preludec/ast.hpp"
#include "preludec/clock.hpp"
#include "preludec/diagnostic.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace preludec {

// Boolean is the kind produced by `when`: values appear only on a subset of
// the clock's dates. Every other operator requires and produces Strict flows.
enum class FlowKind { Strict, Boolean };

class ValueType {
 public:
  static ValueType int_type();
  static ValueType bool_type();
  static ValueType array_of(ValueType element, BigInt count);
  static ValueType of(SimpleType t);

  bool is_int() const { return tag_ == Tag::Int; }
  bool is_bool() const { return tag_ == Tag::Bool; }
  bool is_array() const { return tag_ == Tag::Array; }
  const ValueType& element() const;
  const BigInt& count() const;

  std::string to_string() const;  // int | bool | array (int, 10)
  bool operator==(const ValueType& other) const;

 private:
  enum class Tag { Int, Bool, Array };
  Tag tag_ = Tag::Int;
  std::shared_ptr<const ValueType> element_;  // Array only
  BigInt count_;                              // Array only
};

struct FlowType {
  ValueType value_type;
  FlowKind kind;
  Clock clock;

  bool operator==(const FlowType& other) const = default;
  std::string to_string() const;  // e.g. "int rate (10, 0)"
};

struct SignatureParam {
  std::string name;
  FlowType type;
};

struct NodeSignature {
  std::string name;
  bool imported = false;
  std::vector<SignatureParam> inputs;
  std::vector<SignatureParam> outputs;
};

struct NodeTypes {
  // Every declared flow of a concrete node (inputs, outputs, locals) with its
  // final inferred kind.
  std::map<std::string, FlowType> flows;
};

struct CheckOptions {
  // Promote W_NEGATIVE_START to an error.
  bool strict_start_dates = false;
  ShiftPolicy shift_policy = ShiftPolicy::AllowNegative;
};

struct CheckResult {
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, NodeSignature> signatures;
  std::map<std::string, NodeTypes> node_types;

  bool ok() const { return !has_errors(diagnostics); }
};

CheckResult check_program(const Program& p, const CheckOptions& options = {});

// Single-expression inference against an explicit environment; exercised by
// unit tests and kept in lockstep with the in-node rules.
using TypeEnv = std::map<std::string, FlowType>;

struct ExprCheck {
  std::optional<FlowType> type;  // empty when the expression is ill-typed
  std::vector<Diagnostic> diagnostics;
};

ExprCheck infer_expr(const TypeEnv& env, const Expr& e, const CheckOptions& options = {});

}  // namespace preludec
