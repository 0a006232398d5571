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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ehrshare::storage {

using Document = nlohmann::json;

// Conjunction of equality tests plus at most one half-open range
// [lower, upper) on a numeric field. Missing fields read as null.
struct Query {
  struct Range {
    std::string field;
    std::optional<Document> lower;
    std::optional<Document> upper;
  };

  std::vector<std::pair<std::string, Document>> equals;
  std::optional<Range> range;

  Query& where(std::string field, Document value) {
    equals.emplace_back(std::move(field), std::move(value));
    return *this;
  }
  Query& between(std::string field, std::optional<Document> lower, std::optional<Document> upper) {
    range = Range{std::move(field), std::move(lower), std::move(upper)};
    return *this;
  }

  bool matches(const Document& doc) const;
};

std::set<std::string> default_indexed_fields();

// Document-oriented store. Every call is atomic per document; results of
// query() are ordered by id.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual void put(std::string_view collection, std::string_view id, Document doc) = 0;
  // Stores only if `id` is absent; returns whether it did.
  virtual bool insert(std::string_view collection, std::string_view id, Document doc) = 0;
  virtual std::optional<Document> get(std::string_view collection, std::string_view id) const = 0;
  virtual std::vector<Document> query(std::string_view collection, const Query& q) const = 0;
  virtual void remove(std::string_view collection, std::string_view id) = 0;
  // Sets doc[field] = desired (and merges `patch` into the top level) iff
  // doc[field] == expected. False when the document is missing.
  virtual bool compare_and_swap(std::string_view collection,
                                std::string_view id,
                                std::string_view field,
                                const Document& expected,
                                const Document& desired,
                                const Document& patch = Document::object()) = 0;
  virtual std::vector<std::string> collections() const = 0;
};

class MemoryDocumentStore final : public DocumentStore {
 public:
  explicit MemoryDocumentStore(std::set<std::string> indexed = default_indexed_fields());

  void put(std::string_view collection, std::string_view id, Document doc) override;
  bool insert(std::string_view collection, std::string_view id, Document doc) override;
  std::optional<Document> get(std::string_view collection, std::string_view id) const override;
  std::vector<Document> query(std::string_view collection, const Query& q) const override;
  void remove(std::string_view collection, std::string_view id) override;
  bool compare_and_swap(std::string_view collection,
                        std::string_view id,
                        std::string_view field,
                        const Document& expected,
                        const Document& desired,
                        const Document& patch) override;
  std::vector<std::string> collections() const override;

 private:
  struct Collection {
    std::map<std::string, Document, std::less<>> docs;
    // field -> value -> ids
    std::map<std::string, std::map<Document, std::set<std::string>>, std::less<>> index;
  };

  void index_add(Collection& c, const std::string& id, const Document& doc);
  void index_remove(Collection& c, const std::string& id, const Document& doc);
  void store_locked(Collection& c, std::string_view id, Document doc);

  std::set<std::string> indexed_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Collection, std::less<>> collections_;
};

// Durable backend: one SQLite file, documents CBOR-encoded, indexed fields
// mirrored into a side table.
class SqliteDocumentStore final : public DocumentStore {
 public:
  explicit SqliteDocumentStore(const std::string& path,
                               std::set<std::string> indexed = default_indexed_fields());
  ~SqliteDocumentStore() override;

  void put(std::string_view collection, std::string_view id, Document doc) override;
  bool insert(std::string_view collection, std::string_view id, Document doc) override;
  std::optional<Document> get(std::string_view collection, std::string_view id) const override;
  std::vector<Document> query(std::string_view collection, const Query& q) const override;
  void remove(std::string_view collection, std::string_view id) override;
  bool compare_and_swap(std::string_view collection,
                        std::string_view id,
                        std::string_view field,
                        const Document& expected,
                        const Document& desired,
                        const Document& patch) override;
  std::vector<std::string> collections() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ehrshare::storage
