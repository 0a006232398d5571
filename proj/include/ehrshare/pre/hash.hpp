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

#include <string_view>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/pre/curve.hpp"

namespace ehrshare::pre {

// Domain-separated hash onto Z_q. Every input is length-prefixed, the
// 64-byte SHA-512 output is reduced modulo q.
class ScalarHasher {
 public:
  explicit ScalarHasher(std::string_view dst);

  ScalarHasher& update(ByteView data);
  ScalarHasher& update(const Point& p);
  ScalarHasher& update(const Scalar& s);
  Scalar finalize() const;

 private:
  Bytes buffer_;
};

namespace dst {
inline constexpr std::string_view kCapsuleCheck = "ehrshare/capsule-check";
inline constexpr std::string_view kNonInteractive = "ehrshare/non-interactive";
inline constexpr std::string_view kXCoordinate = "ehrshare/x-coordinate";
inline constexpr std::string_view kCfragProof = "ehrshare/cfrag-proof";
inline constexpr std::string_view kSignatureNonce = "ehrshare/signature-nonce";
inline constexpr std::string_view kSignatureChallenge = "ehrshare/signature-challenge";
inline constexpr std::string_view kCommitmentBase = "ehrshare/commitment-base";
}  // namespace dst

}  // namespace ehrshare::pre
