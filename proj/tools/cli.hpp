#ifndef TENSORCERT_CLI_HPP
#define TENSORCERT_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace tensorcert::cli {

/// Runs one command (argv without the program name).  Writes the report to
/// `out`, diagnostics to `err`.  Exit code: 0 verified/holds/found,
/// 1 failed/violated/not found, 2 usage or parse error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tensorcert::cli

#endif
