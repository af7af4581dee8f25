#pragma once

#include <compare>

namespace preludec {

// 1-based; {0, 0} means "no location" (used by file-level diagnostics).
struct SourceLocation {
  int line = 0;
  int col = 0;

  auto operator<=>(const SourceLocation&) const = default;
};

}  // namespace preludec
