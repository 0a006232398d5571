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

#include "ehrshare/proxy/proxy_service.hpp"

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/capsule.hpp"
#include "ehrshare/pre/fragments.hpp"

namespace ehrshare::proxy {
namespace {

using storage::Document;

constexpr std::string_view kVault = "kfrag_vault";

Document to_document(const KfragBundle& b, Timestamp now) {
  Document kfrags = Document::array();
  for (const auto& k : b.kfrags) kfrags.push_back(Document::binary(k));
  return {{"share_id", b.share_id},
          {"kfrags", std::move(kfrags)},
          {"threshold", b.threshold},
          {"shares", b.shares},
          {"stored_at", to_millis(now)}};
}

bool same_payload(const Document& stored, const Document& incoming) {
  return stored.at("kfrags") == incoming.at("kfrags") &&
         stored.at("threshold") == incoming.at("threshold") &&
         stored.at("shares") == incoming.at("shares");
}

}  // namespace

ProxyService::ProxyService(storage::DocumentStore& vault,
                           const Clock& clock,
                           pre::EntropySource& entropy)
    : vault_(vault), clock_(clock), entropy_(entropy) {}

void ProxyService::store_kfrags(const KfragBundle& bundle) {
  if (bundle.share_id.empty()) throw Error(Errc::validation, "share_id is required");
  if (bundle.threshold < 1 || bundle.threshold > bundle.shares || bundle.shares > kMaxShares) {
    throw Error(Errc::validation, "need 1 <= threshold <= shares <= " + std::to_string(kMaxShares));
  }
  if (bundle.kfrags.size() != bundle.shares) {
    throw Error(Errc::validation, "expected " + std::to_string(bundle.shares) + " kfrags, got " +
                                      std::to_string(bundle.kfrags.size()));
  }
  for (std::size_t i = 0; i < bundle.kfrags.size(); ++i) {
    try {
      (void)pre::KeyFragment::from_bytes(bundle.kfrags[i]);
    } catch (const Error&) {
      throw Error(Errc::validation, "kfrag " + std::to_string(i) + " does not decode");
    }
  }
  const Document doc = to_document(bundle, clock_.now());
  if (vault_.insert(kVault, bundle.share_id, doc)) return;
  const auto existing = vault_.get(kVault, bundle.share_id);
  if (existing && same_payload(*existing, doc)) return;
  throw Error(Errc::conflict, "share " + bundle.share_id + " already holds different kfrags");
}

std::vector<Bytes> ProxyService::reencapsulate(const std::string& share_id, ByteView capsule_bytes) {
  pre::Capsule capsule = [&] {
    try {
      return pre::Capsule::from_bytes(capsule_bytes);
    } catch (const Error&) {
      throw Error(Errc::validation, "capsule does not decode");
    }
  }();
  if (!capsule.verify()) throw Error(Errc::validation, "capsule fails its self-check");

  const auto entry = vault_.get(kVault, share_id);
  if (!entry) throw Error(Errc::not_found, "no kfrags for share " + share_id);
  std::vector<Bytes> out;
  for (const auto& k : entry->at("kfrags")) {
    const auto kfrag = pre::KeyFragment::from_bytes(k.get_binary());
    const auto encoded = pre::reencapsulate(kfrag, capsule, entropy_).to_bytes();
    out.emplace_back(encoded.begin(), encoded.end());
  }
  return out;
}

void ProxyService::delete_kfrags(const std::string& share_id) { vault_.remove(kVault, share_id); }

}  // namespace ehrshare::proxy
