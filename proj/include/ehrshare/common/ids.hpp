// Copyright 2026 The ehrshare Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace ehrshare {

// Random (version 4) UUID in canonical 8-4-4-4-12 lowercase form.
std::string new_uuid();

bool is_uuid(const std::string& s);

// CSPRNG bytes; Errc::entropy on failure.
void fill_random(std::span<std::uint8_t> out);

}  // namespace ehrshare
