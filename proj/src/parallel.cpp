#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "lcft/mc.hpp"

namespace lcft {

int resolve_threads(int hint) {
    if (hint > 0) return hint;
    if (const char* env = std::getenv("LCFT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_batches(std::size_t n, std::size_t batch_size, int threads,
                      const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    batch_size = std::max<std::size_t>(1, batch_size);
    const std::size_t n_batches = (n + batch_size - 1) / batch_size;
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), n_batches);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_batch = n_batches;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_batches) return;
            try {
                body(b, b * batch_size, std::min(n, (b + 1) * batch_size));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (b < err_batch) {
                    err_batch = b;
                    err = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace lcft
