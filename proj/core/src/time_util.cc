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

#include "interest/time_util.h"

#include <cstdio>
#include <ctime>

#include "interest/errors.h"

namespace interest {

std::string FormatUtc(std::chrono::system_clock::time_point tp) {
  using namespace std::chrono;
  const auto ms = time_point_cast<milliseconds>(tp);
  auto secs = time_point_cast<seconds>(ms);
  if (secs > ms) secs -= seconds(1);
  const long millis = static_cast<long>((ms - secs).count());
  const std::time_t tt = system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03ldZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, millis);
  return buf;
}

std::chrono::system_clock::time_point ParseUtc(std::string_view text) {
  const std::string s(text);
  std::tm tm{};
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &tm.tm_year,
                  &tm.tm_mon, &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec,
                  &consumed) != 6) {
    throw InvalidArgumentError("ParseUtc: malformed timestamp '" + s + "'");
  }
  long millis = 0;
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    int digits = 0;
    while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') {
      if (digits < 3) millis = millis * 10 + (rest.front() - '0');
      ++digits;
      rest.remove_prefix(1);
    }
    if (digits == 0) {
      throw InvalidArgumentError("ParseUtc: empty fraction in '" + s + "'");
    }
    for (int d = digits; d < 3; ++d) millis *= 10;
  }
  if (rest != "Z") {
    throw InvalidArgumentError("ParseUtc: expected UTC 'Z' suffix in '" + s +
                               "'");
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  const std::time_t tt = timegm(&tm);
  return std::chrono::system_clock::from_time_t(tt) +
         std::chrono::milliseconds(millis);
}

}  // namespace interest
