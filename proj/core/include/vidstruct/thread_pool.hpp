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

#ifndef VIDSTRUCT_THREAD_POOL_HPP_
#define VIDSTRUCT_THREAD_POOL_HPP_

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vidstruct {

/// Fixed-size worker pool used for data-parallel loops inside measure
/// computations. parallel_for partitions [begin, end) into contiguous chunks,
/// so any per-index computation yields the same result at every thread count.
class ThreadPool {
 public:
  /// threads <= 1 runs everything on the calling thread.
  explicit ThreadPool(int threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return threads_; }

  /// Calls body(lo, hi) over disjoint subranges covering [begin, end) and
  /// blocks until all of them are done. Safe to call from several threads at
  /// once; nested calls from inside a body run inline.
  void parallel_for(int begin, int end, const std::function<void(int, int)>& body);

 private:
  struct Job;
  void worker_loop();

  int threads_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<Job*> queue_;
  bool stopping_ = false;
};

/// parallel_for on pool, or a plain call when pool is null.
void parallel_for(ThreadPool* pool, int begin, int end, const std::function<void(int, int)>& body);

}  // namespace vidstruct

#endif  // VIDSTRUCT_THREAD_POOL_HPP_
