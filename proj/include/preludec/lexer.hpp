#pragma once

#include "preludec/ast.hpp"
#include "preludec/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace preludec {

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an EndOfFile token
  std::vector<Diagnostic> diagnostics;
};

LexResult tokenize(std::string_view source, const std::string& filename);

}  // namespace preludec
