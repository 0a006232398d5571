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

#include "ehrshare/storage/ttl_store.hpp"

#include "sqlite_db.hpp"

namespace ehrshare::storage {

void MemoryTtlStore::set(std::string_view key, std::string value, std::chrono::milliseconds ttl) {
  std::lock_guard lock(mu_);
  entries_.insert_or_assign(std::string(key), Entry{std::move(value), clock_.now() + ttl});
}

std::optional<std::string> MemoryTtlStore::get(std::string_view key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (clock_.now() >= it->second.expires_at) {
    entries_.erase(it);
    return std::nullopt;
  }
  return it->second.value;
}

bool MemoryTtlStore::compare_and_swap(std::string_view key,
                                      std::string_view expected,
                                      std::string desired) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end() || clock_.now() >= it->second.expires_at) return false;
  if (it->second.value != expected) return false;
  it->second.value = std::move(desired);
  return true;
}

void MemoryTtlStore::erase(std::string_view key) {
  std::lock_guard lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) entries_.erase(it);
}

std::size_t MemoryTtlStore::size() const {
  std::lock_guard lock(mu_);
  const auto now = clock_.now();
  std::size_t n = 0;
  for (const auto& [_, e] : entries_) n += now < e.expires_at ? 1 : 0;
  return n;
}

struct SqliteTtlStore::Impl {
  Impl(const std::string& path, const Clock& c) : db(path), clock(c) {
    db.exec(
        "CREATE TABLE IF NOT EXISTS ttl_entries ("
        "  key TEXT PRIMARY KEY, value BLOB NOT NULL, expires_at INTEGER NOT NULL)");
  }
  std::mutex mu;
  detail::Database db;
  const Clock& clock;
};

SqliteTtlStore::SqliteTtlStore(const std::string& path, const Clock& clock)
    : impl_(std::make_unique<Impl>(path, clock)) {}

SqliteTtlStore::~SqliteTtlStore() = default;

void SqliteTtlStore::set(std::string_view key, std::string value, std::chrono::milliseconds ttl) {
  std::lock_guard lock(impl_->mu);
  auto st = impl_->db.prepare(
      "INSERT INTO ttl_entries (key, value, expires_at) VALUES (?1, ?2, ?3) "
      "ON CONFLICT (key) DO UPDATE SET value = excluded.value, expires_at = excluded.expires_at");
  st.bind(1, key).bind(2, value).bind(3, to_millis(impl_->clock.now() + ttl));
  st.step();
}

std::optional<std::string> SqliteTtlStore::get(std::string_view key) const {
  std::lock_guard lock(impl_->mu);
  auto st = impl_->db.prepare("SELECT value FROM ttl_entries WHERE key = ?1 AND expires_at > ?2");
  st.bind(1, key).bind(2, to_millis(impl_->clock.now()));
  if (!st.step()) return std::nullopt;
  return st.text(0);
}

bool SqliteTtlStore::compare_and_swap(std::string_view key,
                                      std::string_view expected,
                                      std::string desired) {
  std::lock_guard lock(impl_->mu);
  auto st = impl_->db.prepare(
      "UPDATE ttl_entries SET value = ?1 WHERE key = ?2 AND value = ?3 AND expires_at > ?4");
  st.bind(1, desired).bind(2, key).bind(3, expected).bind(4, to_millis(impl_->clock.now()));
  st.step();
  return sqlite3_changes(impl_->db.get()) == 1;
}

void SqliteTtlStore::erase(std::string_view key) {
  std::lock_guard lock(impl_->mu);
  auto st = impl_->db.prepare("DELETE FROM ttl_entries WHERE key = ?1");
  st.bind(1, key);
  st.step();
}

}  // namespace ehrshare::storage
