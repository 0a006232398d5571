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

#include "ehrshare/pre/entropy.hpp"

#include <openssl/rand.h>

#include <climits>

#include "ehrshare/common/error.hpp"

namespace ehrshare::pre {

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  while (!out.empty()) {
    const std::size_t chunk = std::min<std::size_t>(out.size(), INT_MAX);
    if (RAND_bytes(out.data(), static_cast<int>(chunk)) != 1) {
      throw Error(Errc::entropy, "RAND_bytes failed");
    }
    out = out.subspan(chunk);
  }
}

EntropySource& system_entropy() {
  static SystemEntropy source;
  return source;
}

}  // namespace ehrshare::pre
