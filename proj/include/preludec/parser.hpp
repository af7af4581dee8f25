#pragma once

#include "preludec/ast.hpp"
#include "preludec/diagnostic.hpp"
#include "preludec/lexer.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace preludec {

struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;  // lexer diagnostics included
};

ParseResult parse_program(std::string_view source, const std::string& filename);
ParseResult parse_tokens(LexResult lexed, const std::string& filename);

}  // namespace preludec
