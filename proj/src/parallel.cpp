#include "kakeya/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace kakeya {

unsigned default_thread_count() {
    if (const char* env = std::getenv("KAKEYA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = default_thread_count();
    if (count == 0) return;
    if (threads == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(threads, count);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

double ordered_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    if (values.size() == 1) return values[0];
    if (values.size() <= 8) {
        double s = 0.0;
        for (const double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return ordered_sum(values.first(half)) + ordered_sum(values.subspan(half));
}

}  // namespace kakeya
