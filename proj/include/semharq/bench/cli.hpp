#pragma once

#include <filesystem>
#include <iosfwd>

namespace semharq::bench {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `semharq` tool. Subcommands: train, ik-sweep,
/// combining-sweep, quality-snr-sweep, quality-threshold-sweep, session,
/// suite. Writes normal output to `out` and diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// --out, else output.dir from the config, else $SEMHARQ_OUT, else
/// ./semharq_out.
std::filesystem::path resolve_out_dir(const std::filesystem::path& flag,
                                      const std::filesystem::path& configured);

}  // namespace semharq::bench
