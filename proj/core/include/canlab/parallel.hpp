#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace canlab {

// Runs fn(task_index) over [0, n_tasks) on the given number of workers.
// Tasks are claimed from a shared counter; results must be written into
// per-task slots so the merged outcome is independent of scheduling.
template <typename Fn>
void parallel_tasks(std::size_t n_tasks, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = workers < n_tasks ? workers : static_cast<unsigned>(n_tasks);
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

}  // namespace canlab
