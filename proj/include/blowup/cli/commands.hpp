#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "blowup/cli/bundle.hpp"
#include "blowup/cli/config.hpp"

namespace blowup::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable read for the OpenMP thread count.
inline constexpr const char* kThreadsVariable = "BLOWUP_THREADS";

void cmd_delaunay(const RunConfig& config, Bundle& bundle);
void cmd_glue(const RunConfig& config, Bundle& bundle);
void cmd_construct(const RunConfig& config, Bundle& bundle);
void cmd_verify(const RunConfig& config, Bundle& bundle);
void cmd_report(const RunConfig& config, Bundle& bundle);

/// Full command line handling; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blowup::cli
