#pragma once

namespace frc::cli {

// Parses arguments and runs one subcommand. Returns the process exit code:
// 0 on success, 2 when input fails validation, CLI11's code for usage errors.
int run(int argc, char** argv);

}  // namespace frc::cli
