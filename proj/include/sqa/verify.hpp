#ifndef SQA_VERIFY_HPP
#define SQA_VERIFY_HPP

#include <iosfwd>

namespace sqa::verify {

// Full oracle cross-check suite: prints one PASS/FAIL line per criterion and
// returns the number of failed criteria. This is the repository's acceptance
// entry point, reachable as `sqa verify all` and as the ctest acceptance suite.
int run_all(std::ostream& out);

// Pair-kernel identity over seeded random points in the strict sign-free
// region; returns the number of points exceeding the tolerance.
int run_pair(std::ostream& out, int samples, unsigned long long seed, double tol = 1e-10);

}  // namespace sqa::verify

#endif
