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

#include "ehrshare/resource/sweeper.hpp"

namespace ehrshare::resource {

Sweeper::Sweeper(ResourceService& service, std::chrono::milliseconds interval, const Clock& clock)
    : service_(service), interval_(interval), clock_(clock), thread_([this] { run(); }) {}

Sweeper::~Sweeper() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

std::size_t Sweeper::total_expired() const {
  std::lock_guard lock(mu_);
  return total_;
}

void Sweeper::run() {
  std::unique_lock lock(mu_);
  while (!cv_.wait_for(lock, interval_, [this] { return stop_; })) {
    lock.unlock();
    std::size_t n = 0;
    try {
      n = service_.sweep_expired(clock_.now());
    } catch (const std::exception&) {
    }
    lock.lock();
    total_ += n;
  }
}

}  // namespace ehrshare::resource
