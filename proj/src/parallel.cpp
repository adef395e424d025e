#include "ramanecho/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ramanecho {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count()
{
    unsigned n = g_threads.load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0)
            n = 1;
    }
    return n;
}

void parallel_for_blocks(std::size_t n, std::size_t block,
                         const std::function<void(std::size_t, std::size_t)>& fn)
{
    if (n == 0)
        return;
    if (block == 0)
        block = 1;
    const std::size_t nblocks = (n + block - 1) / block;
    const unsigned workers = std::min<std::size_t>(thread_count(), nblocks);

    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            fn(b * block, std::min(n, (b + 1) * block));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&]() {
        try {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= nblocks)
                    return;
                fn(b * block, std::min(n, (b + 1) * block));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next.store(nblocks); // stop the other workers
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned i = 0; i + 1 < workers; ++i)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace ramanecho
