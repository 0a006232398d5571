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
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include "ehrshare/resource/resource_service.hpp"

namespace ehrshare::resource {

// Runs sweep_expired() every interval on a background thread until
// destroyed. Sweep errors are swallowed; the next tick retries.
class Sweeper {
 public:
  Sweeper(ResourceService& service, std::chrono::milliseconds interval, const Clock& clock = system_clock());
  ~Sweeper();
  Sweeper(const Sweeper&) = delete;
  Sweeper& operator=(const Sweeper&) = delete;

  std::size_t total_expired() const;

 private:
  void run();

  ResourceService& service_;
  std::chrono::milliseconds interval_;
  const Clock& clock_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::size_t total_ = 0;
  std::thread thread_;
};

}  // namespace ehrshare::resource
