#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "legrecon/budget.hpp"

namespace legrecon {

/// Worker count plus the enumeration budget shared by every exhaustive scan.
struct ScanOptions {
    unsigned threads = 1;
    Budget budget;
    std::uint64_t block_size = 4096;
};

/// Splits [0, total) into fixed-size blocks and runs `fn(block, begin, end)`
/// for each on up to `threads` workers. Block boundaries do not depend on the
/// worker count, so callers that store one partial result per block and merge
/// them in block order get bit-identical output for any thread count.
template <class Fn>
void for_each_block(std::uint64_t total, const ScanOptions& opts, Fn&& fn) {
    const std::uint64_t block = std::max<std::uint64_t>(1, opts.block_size);
    const std::uint64_t blocks = (total + block - 1) / block;
    auto run = [&](std::uint64_t b) {
        const std::uint64_t begin = b * block;
        fn(b, begin, std::min(total, begin + block));
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, opts.threads), blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run(b);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t b = w; b < blocks; b += workers) run(b);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Number of blocks `for_each_block` will use for `total` items.
inline std::uint64_t block_count(std::uint64_t total, const ScanOptions& opts) {
    const std::uint64_t block = std::max<std::uint64_t>(1, opts.block_size);
    return (total + block - 1) / block;
}

}  // namespace legrecon
