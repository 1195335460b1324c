#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace spdcfc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default Sellmeier data file.
inline constexpr const char* kSellmeierEnv = "SPDCFC_SELLMEIER_PATH";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one command line (args excludes the program name). Data goes to
/// out, diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spdcfc::cli
