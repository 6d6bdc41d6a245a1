// Copyright 2026 the alsncg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>

namespace alsncg {

// Accumulating wall-clock timer; sections that should not count toward the
// reported solve time simply run while the watch is stopped.
class Stopwatch {
 public:
  void start() {
    if (running_) return;
    t0_ = clock::now();
    running_ = true;
  }
  void stop() {
    if (!running_) return;
    total_ += std::chrono::duration<double>(clock::now() - t0_).count();
    running_ = false;
  }
  double seconds() const {
    if (!running_) return total_;
    return total_ + std::chrono::duration<double>(clock::now() - t0_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point t0_;
  double total_ = 0.0;
  bool running_ = false;
};

}  // namespace alsncg
