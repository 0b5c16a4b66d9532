#pragma once

#include "wickworks/multipoly.hpp"
#include "wickworks/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wickworks {

// Indices are 0-based throughout the library.
struct Matching {
    int n = 0;
    std::vector<std::pair<int, int>> pairs;  // i < j, ordered by i
    std::vector<int> singletons;
};

// Lazily enumerates the matchings of {0..n-1}. The smallest unpaired index is
// decided first: left alone (unless perfect_only), then paired with each larger
// free index in increasing order.
class MatchingStream {
public:
    MatchingStream(int n, bool perfect_only);
    std::optional<Matching> next();

private:
    struct Frame {
        int index;
        int choice;  // -1 means singleton
    };
    int first_free_after(int j) const;
    std::optional<int> next_choice(int index, int choice) const;
    void apply(int index, int choice);
    void undo(int index, int choice);
    bool descend();
    bool backtrack_and_descend();
    Matching current() const;

    int n_;
    bool perfect_only_;
    bool started_ = false;
    bool done_ = false;
    std::vector<int> partner_;  // -2 free, -1 singleton
    std::vector<Frame> stack_;
};

void for_each_matching(int n, bool perfect_only, const std::function<void(const Matching&)>& fn);
Integer count_matchings(int n, bool perfect_only);

using CovMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// E[X_{i_1} ... X_{i_m}] as the sum over perfect matchings of index positions.
Rational isserlis_moment(const CovMatrix& C, std::span<const int> indices);

// E[prod X_i^{e_i}], grouped by multiplicities and memoised; same recursion as
// Isserlis (pair the first factor with every other factor).
Rational gaussian_monomial_expectation(const CovMatrix& C, std::span<const int> exponents);

Rational gaussian_poly_expectation(const CovMatrix& C, const MultiPoly& p);

// (E[X_i p(X)], sum_j C_ij E[d_j p(X)]).
std::pair<Rational, Rational> ibp_check(const CovMatrix& C, int i, const MultiPoly& p);

}  // namespace wickworks
