// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

namespace litscreen {

// NFC-normalizes UTF-8 text. Throws Error on invalid UTF-8.
std::string normalize_nfc(std::string_view utf8);

bool is_valid_utf8(std::string_view bytes);

// Decodes at most max_chars code points (0 = no limit). Invalid sequences
// decode to U+FFFD.
std::u32string to_code_points(std::string_view utf8, std::size_t max_chars = 0);

std::string to_utf8(std::u32string_view code_points);

// Number of code points in a UTF-8 string.
std::size_t code_point_count(std::string_view utf8);

}  // namespace litscreen
