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
#include <string>
#include <vector>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/common/clock.hpp"
#include "ehrshare/pre/entropy.hpp"
#include "ehrshare/storage/document_store.hpp"

namespace ehrshare::proxy {

// Serialized kfrags for one delegation, keyed by the share they realize.
struct KfragBundle {
  std::string share_id;
  std::vector<Bytes> kfrags;
  std::size_t threshold = 1;
  std::size_t shares = 1;

  friend bool operator==(const KfragBundle&, const KfragBundle&) = default;
};

// What the resource server needs from the proxy. Everything crossing this
// interface is public material: kfrags, capsules and cfrags.
class ProxyClient {
 public:
  virtual ~ProxyClient() = default;

  // Idempotent for an identical bundle; Errc::conflict otherwise.
  virtual void store_kfrags(const KfragBundle& bundle) = 0;
  // One cfrag per stored kfrag. Errc::not_found once the entry is gone.
  virtual std::vector<Bytes> reencapsulate(const std::string& share_id, ByteView capsule) = 0;
  virtual void delete_kfrags(const std::string& share_id) = 0;
};

class ProxyService final : public ProxyClient {
 public:
  explicit ProxyService(storage::DocumentStore& vault,
                        const Clock& clock = system_clock(),
                        pre::EntropySource& entropy = pre::system_entropy());

  void store_kfrags(const KfragBundle& bundle) override;
  std::vector<Bytes> reencapsulate(const std::string& share_id, ByteView capsule) override;
  void delete_kfrags(const std::string& share_id) override;

  static constexpr std::size_t kMaxShares = 64;

 private:
  storage::DocumentStore& vault_;
  const Clock& clock_;
  pre::EntropySource& entropy_;
};

}  // namespace ehrshare::proxy
