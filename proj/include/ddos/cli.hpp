#ifndef DDOS_CLI_HPP
#define DDOS_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace ddos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSeedEnvVar = "DDOS_STRENGTH_SEED";

// Parses argv-style arguments (without the program name) and runs the
// selected command. Returns the process exit status.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ddos::cli

#endif  // DDOS_CLI_HPP
