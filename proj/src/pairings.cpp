#include "wickworks/pairings.hpp"

#include <map>
#include <stdexcept>

namespace wickworks {

MatchingStream::MatchingStream(int n, bool perfect_only)
    : n_(n), perfect_only_(perfect_only), partner_(std::max(n, 0), -2) {
    if (n < 0) throw std::invalid_argument("MatchingStream: negative size");
}

int MatchingStream::first_free_after(int j) const {
    for (int k = j + 1; k < n_; ++k)
        if (partner_[k] == -2) return k;
    return -1;
}

std::optional<int> MatchingStream::next_choice(int index, int choice) const {
    const int j = first_free_after(choice == -1 ? index : choice);
    if (j < 0) return std::nullopt;
    return j;
}

void MatchingStream::apply(int index, int choice) {
    partner_[index] = choice;
    if (choice >= 0) partner_[choice] = index;
}

void MatchingStream::undo(int index, int choice) {
    partner_[index] = -2;
    if (choice >= 0) partner_[choice] = -2;
}

bool MatchingStream::descend() {
    for (int i = first_free_after(-1); i >= 0; i = first_free_after(i)) {
        int choice = -1;
        if (perfect_only_) {
            const int j = first_free_after(i);
            if (j < 0) return false;
            choice = j;
        }
        apply(i, choice);
        stack_.push_back({i, choice});
    }
    return true;
}

bool MatchingStream::backtrack_and_descend() {
    while (!stack_.empty()) {
        Frame& top = stack_.back();
        undo(top.index, top.choice);
        if (auto c = next_choice(top.index, top.choice)) {
            top.choice = *c;
            apply(top.index, top.choice);
            if (descend()) return true;
        } else {
            stack_.pop_back();
        }
    }
    return false;
}

Matching MatchingStream::current() const {
    Matching m;
    m.n = n_;
    for (int i = 0; i < n_; ++i) {
        if (partner_[i] == -1)
            m.singletons.push_back(i);
        else if (partner_[i] > i)
            m.pairs.emplace_back(i, partner_[i]);
    }
    return m;
}

std::optional<Matching> MatchingStream::next() {
    if (done_) return std::nullopt;
    bool ok;
    if (!started_) {
        started_ = true;
        ok = descend() || backtrack_and_descend();
    } else {
        ok = backtrack_and_descend();
    }
    if (!ok) {
        done_ = true;
        return std::nullopt;
    }
    return current();
}

void for_each_matching(int n, bool perfect_only, const std::function<void(const Matching&)>& fn) {
    MatchingStream s(n, perfect_only);
    while (auto m = s.next()) fn(*m);
}

Integer count_matchings(int n, bool perfect_only) {
    Integer count = 0;
    for_each_matching(n, perfect_only, [&](const Matching&) { ++count; });
    return count;
}

Rational isserlis_moment(const CovMatrix& C, std::span<const int> indices) {
    const int m = static_cast<int>(indices.size());
    for (int i : indices)
        if (i < 0 || i >= C.rows()) throw std::out_of_range("isserlis_moment: index out of range");
    if (m % 2 == 1) return 0;
    Rational sum = 0;
    for_each_matching(m, true, [&](const Matching& match) {
        Rational prod = 1;
        for (auto [a, b] : match.pairs) prod *= C(indices[a], indices[b]);
        sum += prod;
    });
    return sum;
}

namespace {

using Memo = std::map<std::vector<int>, Rational>;

Rational monomial_expectation(const CovMatrix& C, std::vector<int>& e, Memo& memo) {
    int total = 0;
    int first = -1;
    for (std::size_t i = 0; i < e.size(); ++i) {
        total += e[i];
        if (first < 0 && e[i] > 0) first = static_cast<int>(i);
    }
    if (total == 0) return 1;
    if (total % 2 == 1) return 0;
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    const std::vector<int> key = e;
    Rational sum = 0;
    e[first] -= 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0 || C(first, j) == 0) continue;
        const int mult = e[j];
        e[j] -= 1;
        sum += C(first, j) * mult * monomial_expectation(C, e, memo);
        e[j] += 1;
    }
    e[first] += 1;
    memo.emplace(key, sum);
    return sum;
}

}  // namespace

Rational gaussian_monomial_expectation(const CovMatrix& C, std::span<const int> exponents) {
    if (static_cast<Eigen::Index>(exponents.size()) != C.rows())
        throw std::invalid_argument("gaussian_monomial_expectation: size mismatch");
    std::vector<int> e(exponents.begin(), exponents.end());
    Memo memo;
    return monomial_expectation(C, e, memo);
}

Rational gaussian_poly_expectation(const CovMatrix& C, const MultiPoly& p) {
    if (p.nvars() != C.rows()) throw std::invalid_argument("gaussian_poly_expectation: size mismatch");
    Memo memo;
    Rational sum = 0;
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> ex = e;
        sum += c * monomial_expectation(C, ex, memo);
    }
    return sum;
}

std::pair<Rational, Rational> ibp_check(const CovMatrix& C, int i, const MultiPoly& p) {
    if (i < 0 || i >= C.rows()) throw std::out_of_range("ibp_check: index out of range");
    const Rational lhs = gaussian_poly_expectation(C, MultiPoly::variable(p.nvars(), i) * p);
    Rational rhs = 0;
    for (int j = 0; j < C.rows(); ++j)
        if (C(i, j) != 0) rhs += C(i, j) * gaussian_poly_expectation(C, p.derivative(j));
    return {lhs, rhs};
}

}  // namespace wickworks
