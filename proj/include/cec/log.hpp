// Copyright 2026  CEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CEC_LOG_HPP_
#define CEC_LOG_HPP_

#include <string>

namespace cec {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold from CEC_LOG_LEVEL (error|warn|info|debug); default info.
LogLevel log_level();
bool log_enabled(LogLevel level);
void log_msg(LogLevel level, const std::string& msg);  // to stderr

}  // namespace cec

#endif  // CEC_LOG_HPP_
