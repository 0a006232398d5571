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

#include "ehrshare/storage/document_store.hpp"

#include <algorithm>
#include <mutex>

namespace ehrshare::storage {
namespace {

Document field_of(const Document& doc, std::string_view field) {
  if (!doc.is_object()) return nullptr;
  auto it = doc.find(field);
  return it == doc.end() ? Document(nullptr) : *it;
}

bool comparable(const Document& a, const Document& b) {
  return (a.is_number() && b.is_number()) || a.type() == b.type();
}

void apply_patch(Document& doc, const Document& patch) {
  if (!patch.is_object()) return;
  for (auto it = patch.begin(); it != patch.end(); ++it) doc[it.key()] = it.value();
}

}  // namespace

bool Query::matches(const Document& doc) const {
  for (const auto& [field, value] : equals) {
    if (field_of(doc, field) != value) return false;
  }
  if (range) {
    const Document v = field_of(doc, range->field);
    if (range->lower && (!comparable(v, *range->lower) || v < *range->lower)) return false;
    if (range->upper && (!comparable(v, *range->upper) || !(v < *range->upper))) return false;
  }
  return true;
}

std::set<std::string> default_indexed_fields() {
  return {"owner_id", "delegatee_id", "delegator_id", "resource_id",
          "status",   "expiry",       "email",        "share_id"};
}

MemoryDocumentStore::MemoryDocumentStore(std::set<std::string> indexed)
    : indexed_(std::move(indexed)) {}

void MemoryDocumentStore::index_add(Collection& c, const std::string& id, const Document& doc) {
  for (const auto& field : indexed_) {
    c.index[field][field_of(doc, field)].insert(id);
  }
}

void MemoryDocumentStore::index_remove(Collection& c, const std::string& id, const Document& doc) {
  for (const auto& field : indexed_) {
    auto fit = c.index.find(field);
    if (fit == c.index.end()) continue;
    auto vit = fit->second.find(field_of(doc, field));
    if (vit == fit->second.end()) continue;
    vit->second.erase(id);
    if (vit->second.empty()) fit->second.erase(vit);
  }
}

void MemoryDocumentStore::store_locked(Collection& c, std::string_view id, Document doc) {
  const std::string key(id);
  if (auto it = c.docs.find(key); it != c.docs.end()) {
    index_remove(c, key, it->second);
    it->second = std::move(doc);
    index_add(c, key, it->second);
  } else {
    auto [pos, _] = c.docs.emplace(key, std::move(doc));
    index_add(c, key, pos->second);
  }
}

void MemoryDocumentStore::put(std::string_view collection, std::string_view id, Document doc) {
  std::unique_lock lock(mu_);
  auto& c = collections_[std::string(collection)];
  store_locked(c, id, std::move(doc));
}

bool MemoryDocumentStore::insert(std::string_view collection, std::string_view id, Document doc) {
  std::unique_lock lock(mu_);
  auto& c = collections_[std::string(collection)];
  if (c.docs.find(id) != c.docs.end()) return false;
  store_locked(c, id, std::move(doc));
  return true;
}

std::optional<Document> MemoryDocumentStore::get(std::string_view collection,
                                                 std::string_view id) const {
  std::shared_lock lock(mu_);
  auto cit = collections_.find(collection);
  if (cit == collections_.end()) return std::nullopt;
  auto it = cit->second.docs.find(id);
  if (it == cit->second.docs.end()) return std::nullopt;
  return it->second;
}

std::vector<Document> MemoryDocumentStore::query(std::string_view collection,
                                                 const Query& q) const {
  std::shared_lock lock(mu_);
  std::vector<Document> out;
  auto cit = collections_.find(collection);
  if (cit == collections_.end()) return out;
  const Collection& c = cit->second;

  // Narrow with the first indexed equality, else an indexed range, else scan.
  std::optional<std::set<std::string>> candidates;
  for (const auto& [field, value] : q.equals) {
    if (!indexed_.contains(field)) continue;
    candidates.emplace();
    if (auto fit = c.index.find(field); fit != c.index.end()) {
      if (auto vit = fit->second.find(value); vit != fit->second.end()) *candidates = vit->second;
    }
    break;
  }
  if (!candidates && q.range && indexed_.contains(q.range->field)) {
    candidates.emplace();
    if (auto fit = c.index.find(q.range->field); fit != c.index.end()) {
      auto lo = q.range->lower ? fit->second.lower_bound(*q.range->lower) : fit->second.begin();
      auto hi = q.range->upper ? fit->second.lower_bound(*q.range->upper) : fit->second.end();
      for (auto it = lo; it != hi; ++it) candidates->insert(it->second.begin(), it->second.end());
    }
  }

  if (candidates) {
    for (const auto& id : *candidates) {
      auto it = c.docs.find(id);
      if (it != c.docs.end() && q.matches(it->second)) out.push_back(it->second);
    }
  } else {
    for (const auto& [id, doc] : c.docs) {
      if (q.matches(doc)) out.push_back(doc);
    }
  }
  return out;
}

void MemoryDocumentStore::remove(std::string_view collection, std::string_view id) {
  std::unique_lock lock(mu_);
  auto cit = collections_.find(collection);
  if (cit == collections_.end()) return;
  auto it = cit->second.docs.find(id);
  if (it == cit->second.docs.end()) return;
  index_remove(cit->second, it->first, it->second);
  cit->second.docs.erase(it);
}

bool MemoryDocumentStore::compare_and_swap(std::string_view collection,
                                           std::string_view id,
                                           std::string_view field,
                                           const Document& expected,
                                           const Document& desired,
                                           const Document& patch) {
  std::unique_lock lock(mu_);
  auto cit = collections_.find(collection);
  if (cit == collections_.end()) return false;
  auto it = cit->second.docs.find(id);
  if (it == cit->second.docs.end()) return false;
  if (field_of(it->second, field) != expected) return false;
  Document updated = it->second;
  updated[std::string(field)] = desired;
  apply_patch(updated, patch);
  store_locked(cit->second, id, std::move(updated));
  return true;
}

std::vector<std::string> MemoryDocumentStore::collections() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> names;
  for (const auto& [name, _] : collections_) names.push_back(name);
  return names;
}

}  // namespace ehrshare::storage
