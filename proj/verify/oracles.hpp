#pragma once

// Independent reference computations. Each oracle follows a different route
// from the library code it is compared against (brute force, a definition
// instead of a recursion, or a closed form).

#include "wickworks/chaos.hpp"
#include "wickworks/diagram.hpp"
#include "wickworks/cumulants.hpp"
#include "wickworks/multipoly.hpp"
#include "wickworks/pairings.hpp"
#include "wickworks/polynomial.hpp"
#include "wickworks/torusfield.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace wickworks::oracle {

// Sum over all matchings of [n] with k pairs of (-1)^k x^{n-2k}.
Polynomial hermite_by_matchings(int n);

// H_n(sum a_i X_i) and sum_{|k|=n} n!/k! prod a_i^{k_i} H_{k_i}(X_i).
MultiPoly multinomial_hermite_lhs(const std::vector<Rational>& a, int n);
MultiPoly multinomial_hermite_rhs(const std::vector<Rational>& a, int n);

// Small random rationals num/den with |num| <= 9, 1 <= den <= 6.
Rational random_rational(std::mt19937_64& rng);
Functional<Rational> random_functional(std::mt19937_64& rng, int degree, bool zero_at_one, bool one_at_one);

// Set partitions of [n], as block-size lists.
std::vector<std::vector<int>> set_partition_block_sizes(int n);
// Moments from cumulants by summing over set partitions.
Functional<Rational> moments_by_set_partitions(const Functional<Rational>& kappa);
// sum_k (unit - phi)^{*k}, truncated.
Functional<Rational> inverse_by_neumann(const Functional<Rational>& phi);
// sum_k phi^{*k} / k!.
Functional<Rational> exp_by_series(const Functional<Rational>& phi);
// Coefficients of Lambda(phi) * Lambda(psi) as an ordinary power series.
std::vector<Rational> cauchy_product_of_transforms(const Functional<Rational>& phi, const Functional<Rational>& psi);

// Number of set partitions of [n] with the given multiset of block sizes.
Integer count_partitions_with_blocks(int n, std::vector<int> sizes);

// Random symmetric rational matrix (not necessarily positive).
CovMatrix random_cov(std::mt19937_64& rng, int n);
// Random polynomial in n variables, total degree <= deg, a few terms.
MultiPoly random_multipoly(std::mt19937_64& rng, int n, int deg, int terms);

// Symmetrisation by explicit sum over all n! permutations.
SymTensor symmetrize_by_permutations(const Tensor& raw);

// Periodic solution of f'' = kappa^2 (f - delta) on T^1 with kappa^2 = 2 pi,
// from the 2x2 transfer matrix U(t) = [[cosh t, sinh t], [sinh t, cosh t]].
// Its Fourier coefficients are 1 / (1 + 2 pi k^2), the d = 1 eigenvalues.
double periodic_resolvent_green_d1(double x);

// n! sum over all (k_1, ..., k_{n-1}) in the l1 ball with k_n = -sum k_i
// also in the ball, by nested loops.
double wick_variance_brute_force(int d, int N, int n);

// Isomorphism by trying every vertex permutation that respects arity and
// label (small diagrams only).
bool isomorphic_brute_force(const Diagram& a, const Diagram& b);

// Every loop-free perfect matching of the legs, grouped by brute-force
// isomorphism: (representative, number of matchings).
std::vector<std::pair<Diagram, Integer>> classes_by_matchings(const std::vector<int>& arities,
                                                              const std::vector<std::string>& labels = {});

// Sum over all edge-momentum assignments in the l1 ball, keeping those
// conserved at every vertex, of prod_e lambda_{k_e}^{-1}.
double vacuum_sum_brute_force(const Diagram& g, int d, int N);

}  // namespace wickworks::oracle
