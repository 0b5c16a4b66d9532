#pragma once

// The acceptance suite: one executable check per criterion, shared by the
// acceptance binary and `wickworks verify`.

#include "wickworks/phi4.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wickworks::verify {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

inline constexpr int criterion_count = 18;
std::string criterion_title(int id);
CriterionResult run_criterion(int id);
// Runs the given ids (all when empty); `on_result` sees each result as it completes.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids = {},
                                          const std::function<void(const CriterionResult&)>& on_result = {});
// "PASS  7  title  (1.2 s)  detail"
std::string format_line(const CriterionResult& r);

// Monte Carlo against the order-3 partition series at d = 1: the smallest
// single C with |MC - series| <= max(4 stderr, C alpha^4) at every alpha,
// and the order-4 coefficient it is judged against.
struct RemainderFit {
    std::vector<MonteCarloResult> mc;
    std::vector<double> series;  // order-3 truncation at each alpha
    double C = 0;
    double next_coefficient = 0;  // |alpha^4 coefficient| of the full series
    bool consistent() const { return C <= 2 * next_coefficient; }
};
RemainderFit fit_remainder(int N, const std::vector<double>& alphas, std::int64_t samples, std::uint64_t seed);

// Least-squares slope b of y = a + b log N.
double log_slope(const std::vector<int>& Ns, const std::vector<double>& ys);

}  // namespace wickworks::verify
