#include "sqgci/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sqgci {

namespace {
std::atomic<bool> g_serial{true};
}

void set_serial(bool serial) { g_serial.store(serial); }
bool is_serial() { return g_serial.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t threads = std::min<std::size_t>(hw, count / 256 + 1);
    if (is_serial() || threads <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t b = t * chunk, e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace sqgci
