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

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <span>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/entropy.hpp"

namespace ehrshare::testing {

// Reproducible byte stream: SHA-256(seed || counter) blocks.
class SeededEntropy final : public pre::EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : seed_(seed) {}

  void fill(std::span<std::uint8_t> out) override {
    std::lock_guard lock(mu_);
    for (auto& b : out) {
      if (pos_ == block_.size()) refill();
      b = block_[pos_++];
    }
  }

 private:
  void refill() {
    std::array<std::uint8_t, 16> in{};
    for (int i = 0; i < 8; ++i) {
      in[i] = static_cast<std::uint8_t>(seed_ >> (8 * i));
      in[8 + i] = static_cast<std::uint8_t>(counter_ >> (8 * i));
    }
    ++counter_;
    unsigned int len = 0;
    EVP_Digest(in.data(), in.size(), block_.data(), &len, EVP_sha256(), nullptr);
    pos_ = 0;
  }

  std::mutex mu_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t pos_ = 32;
};

// Emits `zeros` zero bytes before delegating to the system source.
class ZeroFirstEntropy final : public pre::EntropySource {
 public:
  explicit ZeroFirstEntropy(std::size_t zeros) : remaining_(zeros) {}

  void fill(std::span<std::uint8_t> out) override {
    std::lock_guard lock(mu_);
    const std::size_t z = std::min(remaining_, out.size());
    std::fill_n(out.begin(), z, std::uint8_t{0});
    remaining_ -= z;
    if (z < out.size()) pre::system_entropy().fill(out.subspan(z));
  }

  std::size_t remaining() const { return remaining_; }

 private:
  std::mutex mu_;
  std::size_t remaining_;
};

class FailingEntropy final : public pre::EntropySource {
 public:
  void fill(std::span<std::uint8_t>) override {
    throw Error(Errc::entropy, "entropy source exhausted");
  }
};

}  // namespace ehrshare::testing
