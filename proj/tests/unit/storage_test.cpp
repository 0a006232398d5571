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

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>

#include "ehrshare/common/clock.hpp"
#include "ehrshare/common/ids.hpp"
#include "ehrshare/storage/document_store.hpp"
#include "ehrshare/storage/ttl_store.hpp"

namespace ehrshare::storage {
namespace {

namespace fs = std::filesystem;

fs::path temp_db() {
  return fs::temp_directory_path() / ("ehrshare-test-" + new_uuid() + ".db");
}

struct Backend {
  std::string name;
  std::function<std::unique_ptr<DocumentStore>(const fs::path&)> make;
};

class DocumentStoreTest : public ::testing::TestWithParam<Backend> {
 protected:
  void SetUp() override {
    path_ = temp_db();
    store_ = GetParam().make(path_);
  }
  void TearDown() override {
    store_.reset();
    for (const char* suffix : {"", "-wal", "-shm"}) fs::remove(path_.string() + suffix);
  }

  fs::path path_;
  std::unique_ptr<DocumentStore> store_;
};

TEST_P(DocumentStoreTest, PutThenGet) {
  const Document doc = {{"owner_id", "u1"}, {"n", 3}, {"blob", Document::binary({1, 2, 3})}};
  store_->put("ehrs", "a", doc);
  EXPECT_EQ(store_->get("ehrs", "a"), doc);
  EXPECT_FALSE(store_->get("ehrs", "b"));
  EXPECT_FALSE(store_->get("other", "a"));
}

TEST_P(DocumentStoreTest, PutOverwritesAndReindexes) {
  store_->put("c", "a", {{"status", "pending"}});
  store_->put("c", "a", {{"status", "accepted"}});
  EXPECT_TRUE(store_->query("c", Query().where("status", "pending")).empty());
  EXPECT_EQ(store_->query("c", Query().where("status", "accepted")).size(), 1u);
}

TEST_P(DocumentStoreTest, InsertOnlyWhenAbsent) {
  EXPECT_TRUE(store_->insert("c", "a", {{"v", 1}}));
  EXPECT_FALSE(store_->insert("c", "a", {{"v", 2}}));
  EXPECT_EQ((*store_->get("c", "a"))["v"], 1);
}

TEST_P(DocumentStoreTest, RemoveIsIdempotent) {
  store_->put("c", "a", {{"owner_id", "x"}});
  store_->remove("c", "a");
  store_->remove("c", "a");
  store_->remove("nope", "a");
  EXPECT_FALSE(store_->get("c", "a"));
  EXPECT_TRUE(store_->query("c", Query().where("owner_id", "x")).empty());
}

TEST_P(DocumentStoreTest, CompareAndSwapAppliesPatch) {
  store_->put("shares", "s", {{"status", "pending"}, {"expiry", nullptr}});
  EXPECT_FALSE(store_->compare_and_swap("shares", "s", "status", "accepted", "revoked"));
  EXPECT_TRUE(store_->compare_and_swap("shares", "s", "status", "pending", "accepted",
                                       {{"expiry", 1234}}));
  const auto doc = *store_->get("shares", "s");
  EXPECT_EQ(doc["status"], "accepted");
  EXPECT_EQ(doc["expiry"], 1234);
  EXPECT_FALSE(store_->compare_and_swap("shares", "missing", "status", "pending", "accepted"));
  EXPECT_EQ(store_->query("shares", Query().between("expiry", 1000, 2000)).size(), 1u);
}

TEST_P(DocumentStoreTest, ConcurrentCasHasExactlyOneWinner) {
  for (int round = 0; round < 50; ++round) {
    const std::string id = "s" + std::to_string(round);
    store_->put("shares", id, {{"status", "pending"}});
    std::atomic<int> wins{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&] {
        if (store_->compare_and_swap("shares", id, "status", "pending", "accepted")) ++wins;
      });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(wins.load(), 1) << "round " << round;
  }
}

TEST_P(DocumentStoreTest, QueryMatchesBruteForceFilter) {
  std::mt19937_64 rng(2024);
  std::vector<Document> all;
  for (int i = 0; i < 1000; ++i) {
    Document d = {{"id", i},
                  {"owner_id", "u" + std::to_string(rng() % 13)},
                  {"status", std::vector<std::string>{"pending", "accepted", "revoked"}[rng() % 3]},
                  {"expiry", rng() % 4 == 0 ? Document(nullptr) : Document(rng() % 10000)},
                  {"color", rng() % 2 ? "red" : "blue"}};
    all.push_back(d);
    char id[16];
    std::snprintf(id, sizeof id, "%06d", i);
    store_->put("records", id, d);
  }
  std::vector<Query> queries;
  for (int u = 0; u < 13; ++u) queries.push_back(Query().where("owner_id", "u" + std::to_string(u)));
  queries.push_back(Query().where("status", "accepted").between("expiry", std::nullopt, 5000));
  queries.push_back(Query().between("expiry", 2500, 7500));
  queries.push_back(Query().where("color", "red").where("owner_id", "u3"));
  queries.push_back(Query().where("expiry", nullptr));
  queries.push_back(Query());
  for (const auto& q : queries) {
    std::vector<Document> expected;
    for (const auto& d : all) {
      bool ok = true;
      for (const auto& [f, v] : q.equals) ok = ok && d[f] == v;
      if (q.range) {
        const auto& v = d[q.range->field];
        if (q.range->lower) ok = ok && v.is_number() && v >= *q.range->lower;
        if (q.range->upper) ok = ok && v.is_number() && v < *q.range->upper;
      }
      if (ok) expected.push_back(d);
    }
    EXPECT_EQ(store_->query("records", q), expected);
  }
}

TEST_P(DocumentStoreTest, CollectionsListed) {
  store_->put("b", "1", {{"x", 1}});
  store_->put("a", "1", {{"x", 1}});
  EXPECT_EQ(store_->collections(), (std::vector<std::string>{"a", "b"}));
}

INSTANTIATE_TEST_SUITE_P(
    Backends, DocumentStoreTest,
    ::testing::Values(
        Backend{"memory", [](const fs::path&) { return std::make_unique<MemoryDocumentStore>(); }},
        Backend{"sqlite",
                [](const fs::path& p) { return std::make_unique<SqliteDocumentStore>(p.string()); }}),
    [](const auto& info) { return info.param.name; });

TEST(SqliteDocumentStore, SurvivesRestart) {
  const auto path = temp_db();
  const Document doc = {{"owner_id", "u1"}, {"blob", Document::binary({9, 8, 7})}};
  {
    SqliteDocumentStore store(path.string());
    store.put("ehrs", "r1", doc);
    store.put("ehrs", "r2", {{"owner_id", "u2"}});
    store.remove("ehrs", "r2");
  }
  {
    SqliteDocumentStore store(path.string());
    EXPECT_EQ(store.get("ehrs", "r1"), doc);
    EXPECT_FALSE(store.get("ehrs", "r2"));
    EXPECT_EQ(store.query("ehrs", Query().where("owner_id", "u1")).size(), 1u);
  }
  for (const char* suffix : {"", "-wal", "-shm"}) fs::remove(path.string() + suffix);
}

class TtlStoreTest : public ::testing::TestWithParam<std::string> {
 protected:
  void SetUp() override {
    path_ = temp_db();
    if (GetParam() == "memory") {
      store_ = std::make_unique<MemoryTtlStore>(clock_);
    } else {
      store_ = std::make_unique<SqliteTtlStore>(path_.string(), clock_);
    }
  }
  void TearDown() override {
    store_.reset();
    for (const char* suffix : {"", "-wal", "-shm"}) fs::remove(path_.string() + suffix);
  }

  ManualClock clock_;
  fs::path path_;
  std::unique_ptr<TtlStore> store_;
};

TEST_P(TtlStoreTest, ReadableBeforeExpiry) {
  store_->set("k", "v", std::chrono::seconds(1));
  clock_.advance(std::chrono::milliseconds(999));
  EXPECT_EQ(store_->get("k"), "v");
}

TEST_P(TtlStoreTest, GoneAfterExpiry) {
  store_->set("k", "v", std::chrono::seconds(1));
  clock_.advance(std::chrono::seconds(2));
  EXPECT_FALSE(store_->get("k"));
  EXPECT_FALSE(store_->compare_and_swap("k", "v", "w"));
}

TEST_P(TtlStoreTest, CasKeepsExpiry) {
  store_->set("k", "v", std::chrono::seconds(10));
  EXPECT_FALSE(store_->compare_and_swap("k", "x", "w"));
  EXPECT_TRUE(store_->compare_and_swap("k", "v", "w"));
  EXPECT_EQ(store_->get("k"), "w");
  clock_.advance(std::chrono::seconds(10));
  EXPECT_FALSE(store_->get("k"));
}

TEST_P(TtlStoreTest, CasRaceSingleWinner) {
  for (int round = 0; round < 50; ++round) {
    const std::string key = "k" + std::to_string(round);
    store_->set(key, "v0", std::chrono::seconds(10));
    std::atomic<int> wins{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        if (store_->compare_and_swap(key, "v0", "v" + std::to_string(t + 1))) ++wins;
      });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(wins.load(), 1);
  }
}

TEST_P(TtlStoreTest, Erase) {
  store_->set("k", "v", std::chrono::seconds(10));
  store_->erase("k");
  store_->erase("k");
  EXPECT_FALSE(store_->get("k"));
}

INSTANTIATE_TEST_SUITE_P(Backends, TtlStoreTest, ::testing::Values("memory", "sqlite"));

TEST(SqliteTtlStore, SurvivesRestart) {
  const auto path = temp_db();
  ManualClock clock;
  { SqliteTtlStore(path.string(), clock).set("fam", "state", std::chrono::hours(1)); }
  EXPECT_EQ(SqliteTtlStore(path.string(), clock).get("fam"), "state");
  for (const char* suffix : {"", "-wal", "-shm"}) fs::remove(path.string() + suffix);
}

}  // namespace
}  // namespace ehrshare::storage
