/* Copyright 2026 The Whatif Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef WHATIF_CLI_H_
#define WHATIF_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace whatif {

// Process exit codes; part of the CLI contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitIo = 4,
};

// I/O failures (missing, unreadable or unwritable files) map to kExitIo,
// everything else to kExitValidation.
int ExitCodeFor(const absl::Status& status);

// Runs the `whatif` command line. args[0] is the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace whatif

#endif  // WHATIF_CLI_H_
