// SPDX-License-Identifier: Apache-2.0
//
// anelab: analysis and simulation of multi-channel multi-tone active
// noise equalizers.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANELAB_CLI_HPP
#define ANELAB_CLI_HPP

namespace ane {

/// Entry point of the `ane` tool.  Subcommands: sim, tf, poles, gfunc,
/// verify.  Returns 0 on success, 1 on validation or runtime failure, 2 on
/// usage errors.
int cli_main(int argc, const char* const* argv);

} // namespace ane

#endif // ANELAB_CLI_HPP
