// Copyright 2026 The Interest Storyboard Authors.
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

#ifndef INTEREST_TIME_UTIL_H_
#define INTEREST_TIME_UTIL_H_

#include <chrono>
#include <string>
#include <string_view>

namespace interest {

// "2026-10-18T09:30:00.125Z" (UTC, millisecond resolution).
std::string FormatUtc(std::chrono::system_clock::time_point tp);

// Inverse of FormatUtc. The fractional part is optional. Throws
// InvalidArgumentError on anything else.
std::chrono::system_clock::time_point ParseUtc(std::string_view text);

}  // namespace interest

#endif  // INTEREST_TIME_UTIL_H_
