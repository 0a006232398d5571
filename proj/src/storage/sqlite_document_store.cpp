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

#include <mutex>

#include "ehrshare/storage/document_store.hpp"
#include "sqlite_db.hpp"

namespace ehrshare::storage {

using detail::Database;
using detail::Statement;
using detail::Transaction;

namespace {

// Binds a json scalar with SQLite's native type so that equality and range
// comparisons behave like they do on the json side.
void bind_value(Statement& st, int i, const Document& v) {
  if (v.is_null()) {
    st.bind_null(i);
  } else if (v.is_boolean()) {
    st.bind(i, static_cast<std::int64_t>(v.get<bool>()));
  } else if (v.is_number_integer()) {
    st.bind(i, v.get<std::int64_t>());
  } else if (v.is_number_float()) {
    st.bind(i, v.get<double>());
  } else if (v.is_string()) {
    st.bind(i, v.get_ref<const std::string&>());
  } else {
    st.bind(i, v.dump());
  }
}

Document field_of(const Document& doc, const std::string& field) {
  auto it = doc.find(field);
  return it == doc.end() ? Document(nullptr) : *it;
}

}  // namespace

struct SqliteDocumentStore::Impl {
  Impl(const std::string& path, std::set<std::string> fields)
      : db(path), indexed(std::move(fields)) {
    db.exec(
        "CREATE TABLE IF NOT EXISTS documents ("
        "  collection TEXT NOT NULL, id TEXT NOT NULL, body BLOB NOT NULL,"
        "  PRIMARY KEY (collection, id))");
    db.exec(
        "CREATE TABLE IF NOT EXISTS doc_index ("
        "  collection TEXT NOT NULL, field TEXT NOT NULL, value, id TEXT NOT NULL)");
    db.exec("CREATE INDEX IF NOT EXISTS doc_index_value ON doc_index (collection, field, value)");
    db.exec("CREATE INDEX IF NOT EXISTS doc_index_id ON doc_index (collection, id)");
  }

  std::optional<Document> load(std::string_view collection, std::string_view id) {
    auto st = db.prepare("SELECT body FROM documents WHERE collection = ?1 AND id = ?2");
    st.bind(1, collection).bind(2, id);
    if (!st.step()) return std::nullopt;
    return Document::from_cbor(st.blob(0));
  }

  void store(std::string_view collection, std::string_view id, const Document& doc) {
    auto del = db.prepare("DELETE FROM doc_index WHERE collection = ?1 AND id = ?2");
    del.bind(1, collection).bind(2, id);
    del.step();
    auto up = db.prepare(
        "INSERT INTO documents (collection, id, body) VALUES (?1, ?2, ?3) "
        "ON CONFLICT (collection, id) DO UPDATE SET body = excluded.body");
    up.bind(1, collection).bind(2, id).bind_blob(3, Document::to_cbor(doc));
    up.step();
    for (const auto& field : indexed) {
      auto ins = db.prepare(
          "INSERT INTO doc_index (collection, field, value, id) VALUES (?1, ?2, ?3, ?4)");
      ins.bind(1, collection).bind(2, field);
      bind_value(ins, 3, field_of(doc, field));
      ins.bind(4, id);
      ins.step();
    }
  }

  std::mutex mu;
  Database db;
  std::set<std::string> indexed;
};

SqliteDocumentStore::SqliteDocumentStore(const std::string& path, std::set<std::string> indexed)
    : impl_(std::make_unique<Impl>(path, std::move(indexed))) {}

SqliteDocumentStore::~SqliteDocumentStore() = default;

void SqliteDocumentStore::put(std::string_view collection, std::string_view id, Document doc) {
  std::lock_guard lock(impl_->mu);
  Transaction tx(impl_->db);
  impl_->store(collection, id, doc);
  tx.commit();
}

bool SqliteDocumentStore::insert(std::string_view collection, std::string_view id, Document doc) {
  std::lock_guard lock(impl_->mu);
  Transaction tx(impl_->db);
  if (impl_->load(collection, id)) return false;
  impl_->store(collection, id, doc);
  tx.commit();
  return true;
}

std::optional<Document> SqliteDocumentStore::get(std::string_view collection,
                                                 std::string_view id) const {
  std::lock_guard lock(impl_->mu);
  return impl_->load(collection, id);
}

std::vector<Document> SqliteDocumentStore::query(std::string_view collection,
                                                 const Query& q) const {
  std::lock_guard lock(impl_->mu);
  std::vector<Document> out;

  const std::pair<std::string, Document>* eq = nullptr;
  for (const auto& cond : q.equals) {
    if (impl_->indexed.contains(cond.first)) {
      eq = &cond;
      break;
    }
  }

  auto collect = [&](Statement& st) {
    while (st.step()) {
      Document doc = Document::from_cbor(st.blob(0));
      if (q.matches(doc)) out.push_back(std::move(doc));
    }
  };

  if (eq != nullptr) {
    auto st = impl_->db.prepare(
        "SELECT d.body FROM doc_index i JOIN documents d "
        "ON d.collection = i.collection AND d.id = i.id "
        "WHERE i.collection = ?1 AND i.field = ?2 AND i.value IS ?3 ORDER BY d.id");
    st.bind(1, collection).bind(2, eq->first);
    bind_value(st, 3, eq->second);
    collect(st);
  } else if (q.range && impl_->indexed.contains(q.range->field)) {
    std::string sql =
        "SELECT d.body FROM doc_index i JOIN documents d "
        "ON d.collection = i.collection AND d.id = i.id "
        "WHERE i.collection = ?1 AND i.field = ?2 AND i.value IS NOT NULL";
    if (q.range->lower) sql += " AND i.value >= ?3";
    if (q.range->upper) sql += " AND i.value < ?4";
    sql += " ORDER BY d.id";
    auto st = impl_->db.prepare(sql);
    st.bind(1, collection).bind(2, q.range->field);
    if (q.range->lower) bind_value(st, 3, *q.range->lower);
    if (q.range->upper) bind_value(st, 4, *q.range->upper);
    collect(st);
  } else {
    auto st =
        impl_->db.prepare("SELECT body FROM documents WHERE collection = ?1 ORDER BY id");
    st.bind(1, collection);
    collect(st);
  }
  return out;
}

void SqliteDocumentStore::remove(std::string_view collection, std::string_view id) {
  std::lock_guard lock(impl_->mu);
  Transaction tx(impl_->db);
  auto d1 = impl_->db.prepare("DELETE FROM documents WHERE collection = ?1 AND id = ?2");
  d1.bind(1, collection).bind(2, id);
  d1.step();
  auto d2 = impl_->db.prepare("DELETE FROM doc_index WHERE collection = ?1 AND id = ?2");
  d2.bind(1, collection).bind(2, id);
  d2.step();
  tx.commit();
}

bool SqliteDocumentStore::compare_and_swap(std::string_view collection,
                                           std::string_view id,
                                           std::string_view field,
                                           const Document& expected,
                                           const Document& desired,
                                           const Document& patch) {
  std::lock_guard lock(impl_->mu);
  Transaction tx(impl_->db);
  auto doc = impl_->load(collection, id);
  if (!doc || field_of(*doc, std::string(field)) != expected) return false;
  (*doc)[std::string(field)] = desired;
  if (patch.is_object()) {
    for (auto it = patch.begin(); it != patch.end(); ++it) (*doc)[it.key()] = it.value();
  }
  impl_->store(collection, id, *doc);
  tx.commit();
  return true;
}

std::vector<std::string> SqliteDocumentStore::collections() const {
  std::lock_guard lock(impl_->mu);
  std::vector<std::string> names;
  auto st = impl_->db.prepare("SELECT DISTINCT collection FROM documents ORDER BY collection");
  while (st.step()) names.push_back(st.text(0));
  return names;
}

}  // namespace ehrshare::storage
