// Runs the oracle cross-check suite (same checks as `sqa verify all`) and
// fails if any criterion fails.

#include <iostream>

#include "sqa/verify.hpp"

int main() {
  const int failures = sqa::verify::run_all(std::cout);
  return failures == 0 ? 0 : 1;
}
