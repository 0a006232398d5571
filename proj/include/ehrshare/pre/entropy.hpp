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

namespace ehrshare::pre {

// Source of cryptographic randomness. Implementations must be safe to call
// from several threads at once.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  // Fills `out` completely or throws Error(Errc::entropy).
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// OpenSSL's DRBG.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

EntropySource& system_entropy();

}  // namespace ehrshare::pre
