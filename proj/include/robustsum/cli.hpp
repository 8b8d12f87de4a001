#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsum::cli {

enum ExitCode : int { kOk = 0, kError = 1, kConditionFailed = 2, kOracleDisagrees = 3 };

/// robustsum <command> <problem.json> [--tol T] [--seed S] [--cap C]
///           [--oracle] [--out json|csv] [--norm linf|l1]
/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsum::cli
