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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ehrshare {

// Error categories shared by every layer. The HTTP adapters map these onto
// status codes and carry the name over the wire so clients can rebuild the
// same Error on their side.
enum class Errc {
  validation,
  decode,
  parameter,
  size,
  capsule,
  threshold,
  verification,
  decryption,
  entropy,
  unauthorized,
  token_malformed,
  token_signature,
  token_expired,
  family_revoked,
  forbidden,
  not_found,
  conflict,
  state,
  business_rule,
  configuration,
  integrity,
  unavailable,
  internal,
};

std::string_view errc_name(Errc code) noexcept;
std::optional<Errc> errc_from_name(std::string_view name) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by threshold decapsulation when a capsule fragment fails its proof;
// `index` points at the offending element of the input list.
class FragmentVerificationError : public Error {
 public:
  FragmentVerificationError(std::size_t index, const std::string& message)
      : Error(Errc::verification, message), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace ehrshare
