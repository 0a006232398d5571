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

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrshare/auth/user_directory.hpp"
#include "ehrshare/common/bytes.hpp"
#include "ehrshare/common/clock.hpp"
#include "ehrshare/pre/entropy.hpp"
#include "ehrshare/proxy/proxy_service.hpp"
#include "ehrshare/storage/document_store.hpp"

namespace ehrshare::resource {

enum class MediaType { pdf, png, jpeg };

std::string_view media_type_name(MediaType t);  // MIME type
// Accepts the MIME type or the short name ("pdf", "png", "jpeg", "jpg").
// Anything else is Errc::validation.
MediaType parse_media_type(std::string_view text);

enum class ShareStatus { pending, accepted, declined, revoked, expired };

std::string_view share_status_name(ShareStatus s);
ShareStatus parse_share_status(std::string_view text);

struct EhrMetadata {
  std::string resource_id;
  std::string owner_id;
  std::string filename;
  MediaType media_type = MediaType::pdf;
  std::uint64_t size_bytes = 0;
  std::int64_t created_at = 0;  // ms

  friend bool operator==(const EhrMetadata&, const EhrMetadata&) = default;
};

struct ShareRequest {
  std::string share_id;
  std::string resource_id;
  std::string delegator_id;
  std::string delegatee_id;
  ShareStatus status = ShareStatus::pending;
  std::optional<std::int64_t> expiry;  // ms
  std::int64_t created_at = 0;
  std::int64_t updated_at = 0;
  bool break_glass = false;
  std::size_t threshold = 0;  // set on acceptance
  std::size_t shares = 0;

  friend bool operator==(const ShareRequest&, const ShareRequest&) = default;
};

// Key material a user sends with a single request. Used in memory for the
// duration of the call only.
struct RequestKeys {
  Bytes secret_key;   // 32-byte PRE secret
  Bytes signing_key;  // 32-byte signing secret; not needed for retrieval
};

enum class Decision { accept, decline };

struct AnswerRequest {
  Decision decision = Decision::decline;
  RequestKeys keys;
  std::optional<Timestamp> expiry;
  std::size_t threshold = 1;
  std::size_t shares = 1;
};

struct Retrieved {
  EhrMetadata metadata;
  Bytes plaintext;
  bool via_proxy = false;
};

struct EhrListing {
  std::vector<EhrMetadata> owned;
  std::vector<EhrMetadata> shared;
};

enum class Direction { incoming, outgoing };

struct ResourceConfig {
  std::size_t max_upload_bytes = std::size_t{50} << 20;
  std::size_t break_glass_threshold = 1;
  std::size_t break_glass_shares = 1;
  std::chrono::seconds sweep_interval{60};
};

// Resource server: EHR storage, the consent state machine and break-glass.
//
// Share transitions go through compare-and-swap on "status", so racing
// answer/revoke/sweep calls produce exactly one winner. Records are written
// once and never touched by sharing.
class ResourceService {
 public:
  ResourceService(storage::DocumentStore& store,
                  const auth::UserDirectory& users,
                  proxy::ProxyClient& proxy,
                  ResourceConfig config = {},
                  const Clock& clock = system_clock(),
                  pre::EntropySource& entropy = pre::system_entropy());

  // The owner's keys are needed for the break-glass kfrags.
  EhrMetadata upload_ehr(const std::string& owner_id,
                         ByteView file,
                         const std::string& filename,
                         MediaType media_type,
                         const RequestKeys& owner_keys);

  ShareRequest request_share(const std::string& delegatee_id, const std::string& resource_id);
  ShareRequest answer_share(const std::string& delegator_id,
                            const std::string& share_id,
                            const AnswerRequest& answer);
  ShareRequest revoke_share(const std::string& delegator_id, const std::string& share_id);
  // Expires every accepted share with expiry < now. Shares whose kfrags the
  // proxy fails to drop stay accepted for the next sweep.
  std::size_t sweep_expired(Timestamp now);

  Retrieved retrieve_ehr(const std::string& caller_id,
                         const std::string& resource_id,
                         ByteView caller_secret_key);

  EhrListing list_ehrs(const std::string& caller_id) const;
  std::vector<ShareRequest> list_share_requests(const std::string& caller_id,
                                                Direction direction) const;

  std::optional<ShareRequest> find_share(const std::string& share_id) const;
  const ResourceConfig& config() const { return config_; }

 private:
  auth::UserProfile require_user(const std::string& user_id) const;
  void bootstrap_break_glass(const EhrMetadata& record,
                             const auth::UserProfile& owner,
                             const RequestKeys& owner_keys);
  std::optional<ShareRequest> live_grant(const std::string& resource_id,
                                         const std::string& delegatee_id,
                                         Timestamp now) const;

  storage::DocumentStore& store_;
  const auth::UserDirectory& users_;
  proxy::ProxyClient& proxy_;
  ResourceConfig config_;
  const Clock& clock_;
  pre::EntropySource& entropy_;
  std::mutex request_mu_;  // serializes the uniqueness check in request_share
};

}  // namespace ehrshare::resource
