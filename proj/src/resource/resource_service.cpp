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

#include "ehrshare/resource/resource_service.hpp"

#include <algorithm>
#include <set>

#include "ehrshare/common/error.hpp"
#include "ehrshare/common/ids.hpp"
#include "ehrshare/pre/capsule.hpp"
#include "ehrshare/pre/dem.hpp"
#include "ehrshare/pre/fragments.hpp"

namespace ehrshare::resource {
namespace {

using storage::Document;
using storage::Query;

constexpr std::string_view kEhrs = "ehrs";
// Ciphertext bodies live apart from record metadata so listings and share
// bookkeeping never copy them.
constexpr std::string_view kBodies = "ehr_bodies";
constexpr std::string_view kShares = "shares";

std::string_view short_name(MediaType t) {
  switch (t) {
    case MediaType::pdf: return "pdf";
    case MediaType::png: return "png";
    case MediaType::jpeg: return "jpeg";
  }
  return "pdf";
}

Document metadata_document(const EhrMetadata& m) {
  return {{"resource_id", m.resource_id},   {"owner_id", m.owner_id},
          {"filename", m.filename},         {"media_type", short_name(m.media_type)},
          {"size_bytes", m.size_bytes},     {"created_at", m.created_at}};
}

EhrMetadata metadata_from(const Document& d) {
  return {d.at("resource_id").get<std::string>(), d.at("owner_id").get<std::string>(),
          d.at("filename").get<std::string>(), parse_media_type(d.at("media_type").get<std::string>()),
          d.at("size_bytes").get<std::uint64_t>(), d.at("created_at").get<std::int64_t>()};
}

Document share_document(const ShareRequest& s) {
  return {{"share_id", s.share_id},
          {"resource_id", s.resource_id},
          {"delegator_id", s.delegator_id},
          {"delegatee_id", s.delegatee_id},
          {"status", share_status_name(s.status)},
          {"expiry", s.expiry ? Document(*s.expiry) : Document(nullptr)},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at},
          {"break_glass", s.break_glass},
          {"threshold", s.threshold},
          {"shares", s.shares}};
}

ShareRequest share_from(const Document& d) {
  ShareRequest s;
  s.share_id = d.at("share_id").get<std::string>();
  s.resource_id = d.at("resource_id").get<std::string>();
  s.delegator_id = d.at("delegator_id").get<std::string>();
  s.delegatee_id = d.at("delegatee_id").get<std::string>();
  s.status = parse_share_status(d.at("status").get<std::string>());
  if (!d.at("expiry").is_null()) s.expiry = d.at("expiry").get<std::int64_t>();
  s.created_at = d.at("created_at").get<std::int64_t>();
  s.updated_at = d.at("updated_at").get<std::int64_t>();
  s.break_glass = d.at("break_glass").get<bool>();
  s.threshold = d.at("threshold").get<std::size_t>();
  s.shares = d.at("shares").get<std::size_t>();
  return s;
}

bool unexpired(const ShareRequest& s, Timestamp now) {
  return !s.expiry || !(*s.expiry < to_millis(now));
}

// Decodes the caller's secret and checks it against the registered key.
pre::KeyPair owned_keypair(ByteView secret, const auth::UserProfile& user) {
  std::optional<pre::SecretKey> sk;
  try {
    sk.emplace(pre::SecretKey::from_bytes(secret));
  } catch (const Error&) {
    throw Error(Errc::validation, "secret key does not decode");
  }
  auto pk = sk->public_key();
  const auto encoded = pk.to_bytes();
  if (!std::equal(encoded.begin(), encoded.end(), user.public_key.begin(), user.public_key.end())) {
    throw Error(Errc::validation, "secret key does not match the registered public key");
  }
  return {std::move(*sk), std::move(pk)};
}

pre::SigningKeyPair owned_signing_keypair(ByteView signing, const auth::UserProfile& user) {
  std::optional<pre::SigningKey> key;
  try {
    key.emplace(pre::SigningKey::from_bytes(signing));
  } catch (const Error&) {
    throw Error(Errc::validation, "signing key does not decode");
  }
  auto vk = key->verifying_key();
  const auto encoded = vk.to_bytes();
  if (!std::equal(encoded.begin(), encoded.end(), user.verifying_key.begin(),
                  user.verifying_key.end())) {
    throw Error(Errc::validation, "signing key does not match the registered verifying key");
  }
  return {std::move(*key), std::move(vk)};
}

std::vector<Bytes> encode_all(const std::vector<pre::KeyFragment>& kfrags) {
  std::vector<Bytes> out;
  out.reserve(kfrags.size());
  for (const auto& k : kfrags) {
    const auto e = k.to_bytes();
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

}  // namespace

std::string_view media_type_name(MediaType t) {
  switch (t) {
    case MediaType::pdf: return "application/pdf";
    case MediaType::png: return "image/png";
    case MediaType::jpeg: return "image/jpeg";
  }
  return "application/octet-stream";
}

MediaType parse_media_type(std::string_view text) {
  if (text == "pdf" || text == "application/pdf") return MediaType::pdf;
  if (text == "png" || text == "image/png") return MediaType::png;
  if (text == "jpeg" || text == "jpg" || text == "image/jpeg") return MediaType::jpeg;
  throw Error(Errc::validation, "unsupported media type: " + std::string(text));
}

std::string_view share_status_name(ShareStatus s) {
  switch (s) {
    case ShareStatus::pending: return "pending";
    case ShareStatus::accepted: return "accepted";
    case ShareStatus::declined: return "declined";
    case ShareStatus::revoked: return "revoked";
    case ShareStatus::expired: return "expired";
  }
  return "pending";
}

ShareStatus parse_share_status(std::string_view text) {
  for (auto s : {ShareStatus::pending, ShareStatus::accepted, ShareStatus::declined,
                 ShareStatus::revoked, ShareStatus::expired}) {
    if (share_status_name(s) == text) return s;
  }
  throw Error(Errc::validation, "unknown share status: " + std::string(text));
}

ResourceService::ResourceService(storage::DocumentStore& store,
                                 const auth::UserDirectory& users,
                                 proxy::ProxyClient& proxy,
                                 ResourceConfig config,
                                 const Clock& clock,
                                 pre::EntropySource& entropy)
    : store_(store), users_(users), proxy_(proxy), config_(config), clock_(clock), entropy_(entropy) {
  if (config_.break_glass_threshold < 1 ||
      config_.break_glass_threshold > config_.break_glass_shares) {
    throw Error(Errc::configuration, "break-glass threshold must be in [1, shares]");
  }
}

auth::UserProfile ResourceService::require_user(const std::string& user_id) const {
  auto user = users_.find_user(user_id);
  if (!user) throw Error(Errc::not_found, "unknown user " + user_id);
  return *user;
}

EhrMetadata ResourceService::upload_ehr(const std::string& owner_id,
                                        ByteView file,
                                        const std::string& filename,
                                        MediaType media_type,
                                        const RequestKeys& owner_keys) {
  if (file.size() > config_.max_upload_bytes) {
    throw Error(Errc::size, "file exceeds " + std::to_string(config_.max_upload_bytes) + " bytes");
  }
  if (filename.empty() || filename.size() > 255) {
    throw Error(Errc::validation, "filename must be 1-255 bytes");
  }
  const auto owner = require_user(owner_id);
  const auto trusted = users_.trusted_entity();
  if (!trusted) throw Error(Errc::configuration, "no trusted entity is registered");
  const auto keys = owned_keypair(owner_keys.secret_key, owner);
  const bool needs_break_glass = trusted->user_id != owner.user_id;
  if (needs_break_glass) (void)owned_signing_keypair(owner_keys.signing_key, owner);

  auto enc = pre::encapsulate(keys.public_key, entropy_);
  const auto ct = pre::dem_encrypt(enc.key, file, enc.capsule, entropy_, config_.max_upload_bytes);

  EhrMetadata meta{new_uuid(), owner.user_id, filename, media_type, file.size(),
                   to_millis(clock_.now())};
  Document doc = metadata_document(meta);
  const auto capsule = enc.capsule.to_bytes();
  doc["capsule"] = Document::binary(Bytes(capsule.begin(), capsule.end()));
  doc["nonce"] = Document::binary(Bytes(ct.nonce.begin(), ct.nonce.end()));
  store_.put(kBodies, meta.resource_id, Document{{"body", Document::binary(ct.body)}});
  store_.put(kEhrs, meta.resource_id, std::move(doc));

  // The trusted entity already reads its own uploads on the owner path.
  if (needs_break_glass) {
    try {
      bootstrap_break_glass(meta, owner, owner_keys);
    } catch (...) {
      store_.remove(kEhrs, meta.resource_id);
      store_.remove(kBodies, meta.resource_id);
      throw;
    }
  }
  return meta;
}

void ResourceService::bootstrap_break_glass(const EhrMetadata& record,
                                            const auth::UserProfile& owner,
                                            const RequestKeys& owner_keys) {
  const auto trusted = users_.trusted_entity();
  if (!trusted) throw Error(Errc::configuration, "no trusted entity is registered");
  const auto delegator = owned_keypair(owner_keys.secret_key, owner);
  const auto signing = owned_signing_keypair(owner_keys.signing_key, owner);
  const auto kfrags = pre::generate_kfrags(delegator, signing,
                                           pre::PublicKey::from_bytes(trusted->public_key),
                                           config_.break_glass_threshold,
                                           config_.break_glass_shares, entropy_);
  const auto now = to_millis(clock_.now());
  ShareRequest share{new_uuid(), record.resource_id, owner.user_id, trusted->user_id,
                     ShareStatus::accepted, std::nullopt, now, now, true,
                     config_.break_glass_threshold, config_.break_glass_shares};
  proxy_.store_kfrags({share.share_id, encode_all(kfrags), share.threshold, share.shares});
  try {
    store_.put(kShares, share.share_id, share_document(share));
  } catch (...) {
    try {
      proxy_.delete_kfrags(share.share_id);
    } catch (const Error&) {
      // Orphaned kfrags are harmless: no share row points at them.
    }
    throw;
  }
}

ShareRequest ResourceService::request_share(const std::string& delegatee_id,
                                            const std::string& resource_id) {
  const auto record = store_.get(kEhrs, resource_id);
  if (!record) throw Error(Errc::not_found, "no record " + resource_id);
  const auto owner_id = record->at("owner_id").get<std::string>();
  if (owner_id == delegatee_id) {
    throw Error(Errc::business_rule, "owners cannot request access to their own records");
  }
  (void)require_user(delegatee_id);

  std::lock_guard lock(request_mu_);
  const auto existing =
      store_.query(kShares, Query().where("resource_id", resource_id).where("delegatee_id", delegatee_id));
  for (const auto& d : existing) {
    const auto status = parse_share_status(d.at("status").get<std::string>());
    if (status == ShareStatus::pending || status == ShareStatus::accepted) {
      throw Error(Errc::conflict, "an open share request already exists: " +
                                      d.at("share_id").get<std::string>());
    }
  }
  const auto now = to_millis(clock_.now());
  ShareRequest share{new_uuid(), resource_id, owner_id, delegatee_id, ShareStatus::pending,
                     std::nullopt, now, now, false, 0, 0};
  store_.put(kShares, share.share_id, share_document(share));
  return share;
}

ShareRequest ResourceService::answer_share(const std::string& delegator_id,
                                           const std::string& share_id,
                                           const AnswerRequest& answer) {
  const auto found = find_share(share_id);
  if (!found) throw Error(Errc::not_found, "no share " + share_id);
  const ShareRequest& share = *found;
  if (share.delegator_id != delegator_id) throw Error(Errc::forbidden, "not the record owner");
  if (share.status != ShareStatus::pending) {
    throw Error(Errc::state, "share is " + std::string(share_status_name(share.status)));
  }
  const auto now = clock_.now();

  if (answer.decision == Decision::decline) {
    if (!store_.compare_and_swap(kShares, share_id, "status", "pending", "declined",
                                 {{"updated_at", to_millis(now)}})) {
      throw Error(Errc::state, "share changed concurrently");
    }
    return *find_share(share_id);
  }

  if (answer.expiry && !(now < *answer.expiry)) {
    throw Error(Errc::validation, "expiry must be in the future");
  }
  if (answer.threshold < 1 || answer.threshold > answer.shares ||
      answer.shares > proxy::ProxyService::kMaxShares) {
    throw Error(Errc::validation, "need 1 <= threshold <= shares <= " +
                                      std::to_string(proxy::ProxyService::kMaxShares));
  }
  const auto delegator = require_user(delegator_id);
  const auto delegatee = require_user(share.delegatee_id);
  const auto keys = owned_keypair(answer.keys.secret_key, delegator);
  const auto signing = owned_signing_keypair(answer.keys.signing_key, delegator);
  const auto kfrags = pre::generate_kfrags(keys, signing, pre::PublicKey::from_bytes(delegatee.public_key),
                                           answer.threshold, answer.shares, entropy_);

  // A proxy failure leaves the share pending.
  proxy_.store_kfrags({share_id, encode_all(kfrags), answer.threshold, answer.shares});
  const Document patch = {
      {"expiry", answer.expiry ? Document(to_millis(*answer.expiry)) : Document(nullptr)},
      {"threshold", answer.threshold},
      {"shares", answer.shares},
      {"updated_at", to_millis(now)}};
  if (!store_.compare_and_swap(kShares, share_id, "status", "pending", "accepted", patch)) {
    proxy_.delete_kfrags(share_id);
    throw Error(Errc::state, "share changed concurrently");
  }
  return *find_share(share_id);
}

ShareRequest ResourceService::revoke_share(const std::string& delegator_id,
                                           const std::string& share_id) {
  const auto share = find_share(share_id);
  if (!share) throw Error(Errc::not_found, "no share " + share_id);
  if (share->delegator_id != delegator_id) throw Error(Errc::forbidden, "not the record owner");
  if (share->break_glass) throw Error(Errc::forbidden, "break-glass access cannot be revoked");
  if (share->status != ShareStatus::accepted) {
    throw Error(Errc::state, "share is " + std::string(share_status_name(share->status)));
  }
  // Drop the kfrags first: if the proxy is unreachable the share stays
  // accepted and the caller can retry.
  proxy_.delete_kfrags(share_id);
  if (!store_.compare_and_swap(kShares, share_id, "status", "accepted", "revoked",
                               {{"updated_at", to_millis(clock_.now())}})) {
    throw Error(Errc::state, "share changed concurrently");
  }
  return *find_share(share_id);
}

std::size_t ResourceService::sweep_expired(Timestamp now) {
  const auto due = store_.query(
      kShares, Query().where("status", "accepted").between("expiry", std::nullopt, to_millis(now)));
  std::size_t count = 0;
  for (const auto& d : due) {
    const auto id = d.at("share_id").get<std::string>();
    try {
      proxy_.delete_kfrags(id);
    } catch (const Error&) {
      continue;
    }
    if (store_.compare_and_swap(kShares, id, "status", "accepted", "expired",
                                {{"updated_at", to_millis(now)}})) {
      ++count;
    }
  }
  return count;
}

std::optional<ShareRequest> ResourceService::live_grant(const std::string& resource_id,
                                                        const std::string& delegatee_id,
                                                        Timestamp now) const {
  const auto docs = store_.query(kShares, Query()
                                              .where("resource_id", resource_id)
                                              .where("delegatee_id", delegatee_id)
                                              .where("status", "accepted"));
  for (const auto& d : docs) {
    auto s = share_from(d);
    if (unexpired(s, now)) return s;
  }
  return std::nullopt;
}

Retrieved ResourceService::retrieve_ehr(const std::string& caller_id,
                                        const std::string& resource_id,
                                        ByteView caller_secret_key) {
  const auto doc = store_.get(kEhrs, resource_id);
  if (!doc) throw Error(Errc::not_found, "no record " + resource_id);
  Retrieved out{metadata_from(*doc), {}, false};
  const auto capsule = pre::Capsule::from_bytes(doc->at("capsule").get_binary());
  const auto encoded_capsule = capsule.to_bytes();
  // The body is only loaded once the key is in hand.
  auto open = [&](const pre::SymmetricKey& key) {
    auto body = store_.get(kBodies, resource_id);
    if (!body) throw Error(Errc::internal, "record " + resource_id + " has no body");
    pre::Ciphertext ct;
    const auto& nonce = doc->at("nonce").get_binary();
    std::copy(nonce.begin(), nonce.end(), ct.nonce.begin());
    ct.body = std::move(body->at("body").get_binary());
    ct.associated_data.assign(encoded_capsule.begin(), encoded_capsule.end());
    return pre::dem_decrypt(key, ct);
  };

  if (out.metadata.owner_id == caller_id) {
    const auto keys = owned_keypair(caller_secret_key, require_user(caller_id));
    out.plaintext = open(pre::decapsulate_original(keys.secret, capsule));
    return out;
  }

  const auto grant = live_grant(resource_id, caller_id, clock_.now());
  if (!grant) throw Error(Errc::forbidden, "no live share for this record");
  const auto delegatee = require_user(caller_id);
  const auto delegator = require_user(grant->delegator_id);
  const auto keys = owned_keypair(caller_secret_key, delegatee);
  const auto delegator_pk = pre::PublicKey::from_bytes(delegator.public_key);
  const auto delegator_vk = pre::VerifyingKey::from_bytes(delegator.verifying_key);

  std::vector<Bytes> raw;
  try {
    raw = proxy_.reencapsulate(grant->share_id, encoded_capsule);
  } catch (const Error& e) {
    if (e.code() == Errc::not_found) throw Error(Errc::forbidden, "delegation no longer active");
    throw;
  }
  out.via_proxy = true;

  // Keep only fragments that prove themselves; a lying proxy shows up as an
  // integrity failure rather than a wrong key.
  std::vector<pre::VerifiedCapsuleFragment> valid;
  std::set<pre::FragmentId> seen;
  std::size_t rejected = 0;
  for (const auto& bytes : raw) {
    try {
      auto v = pre::verify_capsule_fragment(pre::CapsuleFragment::from_bytes(bytes), capsule, delegator_vk,
                                            delegator_pk, keys.public_key);
      if (v) {
        if (seen.insert(v->fragment().fragment_id).second) valid.push_back(std::move(*v));
        continue;
      }
    } catch (const Error&) {
    }
    ++rejected;
  }
  if (valid.size() < grant->threshold) {
    if (rejected > 0) {
      throw Error(Errc::integrity, std::to_string(rejected) + " capsule fragments failed verification");
    }
    throw Error(Errc::threshold, "proxy returned " + std::to_string(valid.size()) +
                                     " fragments, need " + std::to_string(grant->threshold));
  }
  out.plaintext = open(pre::decapsulate_reencrypted(keys, delegator_pk, capsule, valid));
  return out;
}

EhrListing ResourceService::list_ehrs(const std::string& caller_id) const {
  EhrListing out;
  for (const auto& d : store_.query(kEhrs, Query().where("owner_id", caller_id))) {
    out.owned.push_back(metadata_from(d));
  }
  const auto now = clock_.now();
  for (const auto& d : store_.query(kShares, Query().where("delegatee_id", caller_id).where("status", "accepted"))) {
    const auto s = share_from(d);
    if (!unexpired(s, now)) continue;
    if (const auto rec = store_.get(kEhrs, s.resource_id)) out.shared.push_back(metadata_from(*rec));
  }
  return out;
}

std::vector<ShareRequest> ResourceService::list_share_requests(const std::string& caller_id,
                                                               Direction direction) const {
  const auto caller = users_.find_user(caller_id);
  const bool sees_break_glass = caller && caller->has_role(auth::roles::kTrustedEntity);
  const char* field = direction == Direction::incoming ? "delegator_id" : "delegatee_id";
  std::vector<ShareRequest> out;
  for (const auto& d : store_.query(kShares, Query().where(field, caller_id))) {
    auto s = share_from(d);
    if (s.break_glass && !sees_break_glass) continue;
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<ShareRequest> ResourceService::find_share(const std::string& share_id) const {
  const auto d = store_.get(kShares, share_id);
  if (!d) return std::nullopt;
  return share_from(*d);
}

}  // namespace ehrshare::resource
