// Copyright 2026 The vidstruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidstruct/thread_pool.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

namespace vidstruct {

namespace {
thread_local bool tls_inside_pool = false;
}

struct ThreadPool::Job {
  const std::function<void(int, int)>* body = nullptr;
  int begin = 0;
  int end = 0;
  int chunk = 1;
  std::atomic<int> next{0};
  int chunks_total = 0;
  int chunks_done = 0;  // guarded by done_mutex
  int active_workers = 0;  // guarded by done_mutex
  std::mutex done_mutex;
  std::condition_variable done_cv;
  std::exception_ptr error;

  // Runs chunks until none are left.
  void run_chunks() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= chunks_total) return;
      const int lo = begin + c * chunk;
      const int hi = std::min(end, lo + chunk);
      std::exception_ptr local;
      try {
        (*body)(lo, hi);
      } catch (...) {
        local = std::current_exception();
      }
      std::lock_guard lock(done_mutex);
      if (local && !error) error = local;
      if (++chunks_done == chunks_total) done_cv.notify_all();
    }
  }
};

ThreadPool::ThreadPool(int threads) : threads_(std::max(1, threads)) {
  if (threads_ <= 1) return;
  workers_.reserve(static_cast<std::size_t>(threads_ - 1));
  for (int i = 0; i + 1 < threads_; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
  tls_inside_pool = true;
  for (;;) {
    Job* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      job = queue_.back();
      if (job->next.load() >= job->chunks_total) {
        queue_.pop_back();
        continue;
      }
      std::lock_guard job_lock(job->done_mutex);
      ++job->active_workers;
    }
    job->run_chunks();
    std::lock_guard job_lock(job->done_mutex);
    if (--job->active_workers == 0) job->done_cv.notify_all();
  }
}

void ThreadPool::parallel_for(int begin, int end, const std::function<void(int, int)>& body) {
  if (end <= begin) return;
  if (threads_ <= 1 || tls_inside_pool || end - begin == 1) {
    body(begin, end);
    return;
  }
  Job job;
  job.body = &body;
  job.begin = begin;
  job.end = end;
  const int n = end - begin;
  const int target_chunks = std::min(n, threads_ * 4);
  job.chunk = (n + target_chunks - 1) / target_chunks;
  job.chunks_total = (n + job.chunk - 1) / job.chunk;
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(&job);
  }
  cv_.notify_all();
  job.run_chunks();
  {
    std::unique_lock lock(job.done_mutex);
    job.done_cv.wait(lock, [&] { return job.chunks_done == job.chunks_total; });
  }
  {
    std::lock_guard lock(mutex_);
    std::erase(queue_, &job);
  }
  {
    // No worker can pick the job up any more; wait for those still inside it.
    std::unique_lock lock(job.done_mutex);
    job.done_cv.wait(lock, [&] { return job.active_workers == 0; });
  }
  if (job.error) std::rethrow_exception(job.error);
}

void parallel_for(ThreadPool* pool, int begin, int end, const std::function<void(int, int)>& body) {
  if (pool != nullptr) {
    pool->parallel_for(begin, end, body);
  } else if (end > begin) {
    body(begin, end);
  }
}

}  // namespace vidstruct
