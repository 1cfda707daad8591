// Copyright 2026 The Polyrec Authors.
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

#ifndef POLYREC_DEADLINE_HPP_
#define POLYREC_DEADLINE_HPP_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>

#include "polyrec/status.hpp"

namespace polyrec {

using Clock = std::chrono::steady_clock;

// nullopt means no deadline.
using Budget = std::optional<std::chrono::milliseconds>;

inline double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Counts detached tasks that are still running so an owner can wait for
// stragglers before tearing down.
class TaskTracker {
 public:
  class Token {
   public:
    explicit Token(std::shared_ptr<TaskTracker> tracker)
        : tracker_(std::move(tracker)) {}
    Token(Token&&) = default;
    Token(const Token&) = delete;
    ~Token() {
      if (tracker_) tracker_->Release();
    }

   private:
    std::shared_ptr<TaskTracker> tracker_;
  };

  static Token Acquire(const std::shared_ptr<TaskTracker>& tracker) {
    std::lock_guard lock(tracker->mu_);
    ++tracker->running_;
    return Token(tracker);
  }

  void WaitIdle() {
    std::unique_lock lock(mu_);
    idle_.wait(lock, [this] { return running_ == 0; });
  }

  size_t running() const {
    std::lock_guard lock(mu_);
    return running_;
  }

 private:
  void Release() {
    std::lock_guard lock(mu_);
    if (--running_ == 0) idle_.notify_all();
  }

  mutable std::mutex mu_;
  std::condition_variable idle_;
  size_t running_ = 0;
};

enum class DeadlineOutcome { kCompleted, kTimeout, kFailed };

template <typename T>
struct DeadlineResult {
  DeadlineOutcome outcome = DeadlineOutcome::kFailed;
  std::optional<T> value;
  std::string error;
  double latency_ms = 0.0;
};

// A task running on its own detached thread. Awaiting past the deadline
// abandons the task: its result is dropped whenever it finishes.
template <typename T>
class PendingTask {
 public:
  template <typename Fn>
  static PendingTask Launch(Fn fn, const std::shared_ptr<TaskTracker>& tracker) {
    PendingTask pending;
    pending.started_ = Clock::now();
    auto finished = std::make_shared<std::atomic<int64_t>>(0);
    pending.finished_ns_ = finished;
    std::packaged_task<Result<T>()> task(
        [fn = std::move(fn), finished, start = pending.started_]() mutable {
          struct Stamp {
            std::atomic<int64_t>* slot;
            Clock::time_point start;
            ~Stamp() {
              slot->store(std::chrono::duration_cast<std::chrono::nanoseconds>(
                              Clock::now() - start)
                              .count());
            }
          } stamp{finished.get(), start};
          return fn();
        });
    pending.future_ = task.get_future();
    std::optional<TaskTracker::Token> token;
    if (tracker) token.emplace(TaskTracker::Acquire(tracker));
    std::thread([task = std::move(task), token = std::move(token)]() mutable {
      task();
    }).detach();
    return pending;
  }

  DeadlineResult<T> AwaitUntil(std::optional<Clock::time_point> deadline) {
    DeadlineResult<T> out;
    if (deadline) {
      if (future_.wait_until(*deadline) != std::future_status::ready) {
        out.outcome = DeadlineOutcome::kTimeout;
        out.latency_ms = MillisSince(started_);
        return out;
      }
    } else {
      future_.wait();
    }
    const int64_t ns = finished_ns_->load();
    out.latency_ms = ns > 0 ? static_cast<double>(ns) / 1e6 : MillisSince(started_);
    try {
      Result<T> result = future_.get();
      if (result.ok()) {
        out.outcome = DeadlineOutcome::kCompleted;
        out.value.emplace(std::move(result).value());
      } else {
        out.outcome = DeadlineOutcome::kFailed;
        out.error = result.error().ToString();
      }
    } catch (const std::exception& e) {
      out.outcome = DeadlineOutcome::kFailed;
      out.error = std::string("exception: ") + e.what();
    } catch (...) {
      out.outcome = DeadlineOutcome::kFailed;
      out.error = "unknown exception";
    }
    return out;
  }

 private:
  Clock::time_point started_;
  std::shared_ptr<std::atomic<int64_t>> finished_ns_;
  std::future<Result<T>> future_;
};

// Runs `fn` (returning Result<T>) with a budget. Returns the result if it
// is ready within the budget, otherwise kTimeout immediately at the
// deadline; the late result is discarded.
template <typename Fn>
auto EnforceDeadline(Fn fn, Budget budget,
                     const std::shared_ptr<TaskTracker>& tracker = nullptr) {
  using R = std::invoke_result_t<Fn&>;
  using T = std::decay_t<decltype(std::declval<R>().value())>;
  const auto start = Clock::now();
  auto pending = PendingTask<T>::Launch(std::move(fn), tracker);
  std::optional<Clock::time_point> deadline;
  if (budget) deadline = start + *budget;
  return pending.AwaitUntil(deadline);
}

}  // namespace polyrec

#endif  // POLYREC_DEADLINE_HPP_
