#pragma once

// Property-based acceptance suite. Each criterion is a self-contained check
// against an independent reference (closed-form value, classical bound, or a
// differently-computed oracle) and prints one pass/fail line with its key
// numbers and runtime. Returns true when every criterion passes.

#include <ostream>

namespace pzp::verify {

bool run_all_criteria(std::ostream& out);

}  // namespace pzp::verify
