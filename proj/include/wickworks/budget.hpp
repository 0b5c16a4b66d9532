#pragma once

// Enumeration and valuation limits, worker-thread count, and a small
// deterministic parallel-for.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wickworks {

struct Budget {
    std::uint64_t matchings = 50'000'000;  // edge-multiplicity patterns visited by the diagram generator
    int max_order = 4;                     // perturbative order
    double nested_terms = 4e9;             // inner iterations of nested loop-momentum sums
    int max_loops = 3;                     // independent momenta in a nested sum
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses "key=value,key=value" (keys: matchings, order, nested, loops) or a
// bare number, which sets the matching budget.
Budget parse_budget(const std::string& text);
// Defaults overridden by the WICKWORKS_BUDGET environment variable.
const Budget& budget();
void set_budget(const Budget& b);

// Seed of the index-th independent stream: splitmix64 applied to
// master + (index + 1) * golden-ratio increment.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

void set_default_threads(int n);
int default_threads();

// Runs fn(i) for i in [0, n) on up to `threads` workers with a fixed static
// partition; callers write results by index so the outcome never depends on
// scheduling.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace wickworks
