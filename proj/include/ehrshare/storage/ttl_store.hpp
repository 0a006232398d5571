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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ehrshare/common/clock.hpp"

namespace ehrshare::storage {

// Key-value store whose entries become unreadable once their TTL passes.
class TtlStore {
 public:
  virtual ~TtlStore() = default;

  virtual void set(std::string_view key, std::string value, std::chrono::milliseconds ttl) = 0;
  virtual std::optional<std::string> get(std::string_view key) const = 0;
  // Replaces the value iff the live entry equals `expected`; keeps the
  // original expiry.
  virtual bool compare_and_swap(std::string_view key,
                                std::string_view expected,
                                std::string desired) = 0;
  virtual void erase(std::string_view key) = 0;
};

class MemoryTtlStore final : public TtlStore {
 public:
  explicit MemoryTtlStore(const Clock& clock = system_clock()) : clock_(clock) {}

  void set(std::string_view key, std::string value, std::chrono::milliseconds ttl) override;
  std::optional<std::string> get(std::string_view key) const override;
  bool compare_and_swap(std::string_view key,
                        std::string_view expected,
                        std::string desired) override;
  void erase(std::string_view key) override;

  std::size_t size() const;

 private:
  struct Entry {
    std::string value;
    Timestamp expires_at;
  };

  const Clock& clock_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Entry, std::less<>> entries_;
};

class SqliteTtlStore final : public TtlStore {
 public:
  explicit SqliteTtlStore(const std::string& path, const Clock& clock = system_clock());
  ~SqliteTtlStore() override;

  void set(std::string_view key, std::string value, std::chrono::milliseconds ttl) override;
  std::optional<std::string> get(std::string_view key) const override;
  bool compare_and_swap(std::string_view key,
                        std::string_view expected,
                        std::string desired) override;
  void erase(std::string_view key) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ehrshare::storage
