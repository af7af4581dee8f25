#pragma once

#include <stdexcept>
#include <string>

#include "preludec/ast.hpp"
#include "preludec/elaborator.hpp"

namespace preludec {

class EmitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "SFlow (int, 10, 0)" or "BFlow (int, 100, 0)".
std::string render_ir_type(const FlowType& t);

// One expression as flow IR, with no temporary hoisting. Variables render
// under their surface names; when conditions move to the first argument.
std::string render_ir_expr(const Expr& e);

// Whole-program typed flow IR. Throws EmitError when the check result
// carries errors; emission relies on every node having complete types.
std::string emit_typed_ir(const Program& p, const CheckResult& checked);

}  // namespace preludec
