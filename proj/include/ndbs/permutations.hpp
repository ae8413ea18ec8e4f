/**
 * Copyright 2026 Mismatch Sampler Contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NDBS_PERMUTATIONS_HPP
#define NDBS_PERMUTATIONS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace ndbs {

/// Permutation of {1..N} stored 0-based: image[a] = sigma(a) - 1.
using Permutation = std::vector<int>;

/// Cycle-type of a permutation: counts[k] = number of k-cycles, k = 1..n.
/// Invariant: sum over k of k*counts[k] == n.
struct CycleStructure {
    int n = 0;
    std::vector<int> counts; // size n+1, index 0 unused

    int fixed_points() const { return n >= 1 ? counts[1] : 0; }
};

/// Integer partition of n with parts in descending order. Equivalent to a
/// cycle structure where each part is a cycle length.
struct IntegerPartition {
    int n = 0;
    std::vector<int> parts;

    CycleStructure cycle_structure() const;
};

/// Visits all N! permutations in lexicographic order of image. N <= 10.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit);

/// Cycle-type extraction; throws validation_error if image is not a bijection.
CycleStructure cycle_structure(const Permutation& sigma);

/// Visits every partition of n exactly once, parts descending, starting from
/// {n} and ending at {1,...,1}. Iterative successor algorithm (no recursion,
/// nothing materialized). 1 <= n <= 80.
void for_each_partition(int n, const std::function<void(const IntegerPartition&)>& visit);

/// Number of permutations in S_N with the given cycle type,
/// N!/(prod_k k^{C_k} C_k!), as an exact integer. Requires n <= 20.
std::uint64_t partition_multiplicity_exact(const IntegerPartition& p);

/// Natural log of the multiplicity, valid for any n.
double log_partition_multiplicity(const IntegerPartition& p);

/// chi(n) = sum_{k=0}^{n} n!/k!, via chi(n) = n*chi(n-1) + 1, chi(0) = 1.
/// Exact 128-bit value for n <= 33.
unsigned __int128 chi_exact(int n);

/// chi(n) as a double (overflows to +inf for very large n; prefer log_chi).
double chi(int n);

/// log(chi(n)), valid for any n >= 0.
double log_chi(int n);

} // namespace ndbs

#endif
