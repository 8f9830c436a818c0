/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sdm {

/// Process exit codes of the sdm tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDomainFailure = 1,  // validation failed, no match, simulation error
  kExitUsage = 2,
  kExitIO = 3,  // unreadable file, parse error, unresolved reference
};

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sdm
