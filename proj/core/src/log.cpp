// Copyright 2026 The memloco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mloc/common/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mloc {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

LogSink& sink() {
  static LogSink s;
  return s;
}

std::atomic<std::uint64_t> warnings{0};

void emit(LogLevel level, const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) {
    sink()(level, message);
    return;
  }
  std::cerr << (level == LogLevel::kWarning ? "warning: " : "") << message << '\n';
}

}  // namespace

void set_log_sink(LogSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void log_info(const std::string& message) { emit(LogLevel::kInfo, message); }

void log_warning(const std::string& message) {
  warnings.fetch_add(1, std::memory_order_relaxed);
  emit(LogLevel::kWarning, message);
}

std::uint64_t warning_count() { return warnings.load(std::memory_order_relaxed); }

}  // namespace mloc
