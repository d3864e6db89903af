#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vrcmf {

/// Entry point behind the `vrcmf` executable. `args` excludes the program
/// name. Returns 0 on success, 1 on a runtime or data error, 2 on bad usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vrcmf
