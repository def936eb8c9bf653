#ifndef SQA_CLI_HPP
#define SQA_CLI_HPP

#include <string>
#include <vector>

namespace sqa::cli {

// Entry point behind main(). Exit codes: 0 success, 1 validation failure
// (schedule rejected, sign-free violation, failed verification), 2 input error.
int run(const std::vector<std::string>& args);

}  // namespace sqa::cli

#endif
