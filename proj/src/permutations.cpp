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

#include "ndbs/permutations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ndbs/errors.hpp"

namespace ndbs {

CycleStructure IntegerPartition::cycle_structure() const {
    CycleStructure cs;
    cs.n = n;
    cs.counts.assign(n + 1, 0);
    for (int part : parts) ++cs.counts[part];
    return cs;
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit) {
    if (n < 1 || n > 10)
        throw capacity_error("for_each_permutation: 1 <= N <= 10 (N! stream), got N = " +
                             std::to_string(n));
    Permutation sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        visit(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
}

CycleStructure cycle_structure(const Permutation& sigma) {
    const int n = static_cast<int>(sigma.size());
    if (n < 1)
        throw validation_error("cycle_structure: empty permutation");
    std::vector<bool> seen(n, false);
    for (int v : sigma) {
        if (v < 0 || v >= n || seen[v])
            throw validation_error("cycle_structure: image is not a bijection on {1..N}");
        seen[v] = true;
    }

    CycleStructure cs;
    cs.n = n;
    cs.counts.assign(n + 1, 0);
    std::vector<bool> visited(n, false);
    for (int start = 0; start < n; ++start) {
        if (visited[start]) continue;
        int len = 0;
        int cur = start;
        while (!visited[cur]) {
            visited[cur] = true;
            cur = sigma[cur];
            ++len;
        }
        ++cs.counts[len];
    }
    return cs;
}

void for_each_partition(int n, const std::function<void(const IntegerPartition&)>& visit) {
    if (n < 1 || n > 80)
        throw capacity_error("for_each_partition: 1 <= N <= 80, got N = " + std::to_string(n));

    IntegerPartition p;
    p.n = n;
    p.parts = {n};
    while (true) {
        visit(p);
        // Successor: strip trailing ones, decrement the last part > 1, and
        // re-lay the stripped mass greedily in parts no larger than it.
        auto& parts = p.parts;
        int k = static_cast<int>(parts.size());
        int ones = 0;
        while (k > 0 && parts[k - 1] == 1) {
            ++ones;
            --k;
        }
        if (k == 0) break;
        const int v = parts[k - 1] - 1;
        int remaining = ones + parts[k - 1];
        parts.resize(k - 1);
        while (remaining > v) {
            parts.push_back(v);
            remaining -= v;
        }
        parts.push_back(remaining);
    }
}

std::uint64_t partition_multiplicity_exact(const IntegerPartition& p) {
    if (p.n < 1 || p.n > 20)
        throw capacity_error(
            "partition_multiplicity_exact: N <= 20 (64-bit overflow beyond), got N = " +
            std::to_string(p.n));
    unsigned __int128 numerator = 1;
    for (int i = 2; i <= p.n; ++i) numerator *= static_cast<unsigned>(i);
    const CycleStructure cs = p.cycle_structure();
    unsigned __int128 denominator = 1;
    for (int k = 1; k <= p.n; ++k) {
        for (int c = 0; c < cs.counts[k]; ++c) denominator *= static_cast<unsigned>(k);
        for (int c = 2; c <= cs.counts[k]; ++c) denominator *= static_cast<unsigned>(c);
    }
    return static_cast<std::uint64_t>(numerator / denominator);
}

double log_partition_multiplicity(const IntegerPartition& p) {
    const CycleStructure cs = p.cycle_structure();
    double log_den = 0.0;
    for (int k = 1; k <= p.n; ++k) {
        if (cs.counts[k] == 0) continue;
        log_den += cs.counts[k] * std::log(static_cast<double>(k));
        log_den += std::lgamma(cs.counts[k] + 1.0);
    }
    return std::lgamma(p.n + 1.0) - log_den;
}

unsigned __int128 chi_exact(int n) {
    if (n < 0)
        throw validation_error("chi: n >= 0 required");
    if (n > 33)
        throw capacity_error("chi_exact: n <= 33 (128-bit overflow beyond), got n = " +
                             std::to_string(n));
    unsigned __int128 value = 1;
    for (int i = 1; i <= n; ++i) value = value * static_cast<unsigned>(i) + 1;
    return value;
}

double chi(int n) {
    if (n <= 33) {
        unsigned __int128 v = chi_exact(n);
        // exact up to 2^128; convert via two 64-bit halves
        const double hi = static_cast<double>(static_cast<std::uint64_t>(v >> 64));
        const double lo = static_cast<double>(static_cast<std::uint64_t>(v));
        return hi * 18446744073709551616.0 + lo;
    }
    return std::exp(log_chi(n));
}

double log_chi(int n) {
    if (n < 0)
        throw validation_error("chi: n >= 0 required");
    if (n <= 33) return std::log(chi(n));
    double value = std::log(chi(33));
    for (int i = 34; i <= n; ++i) {
        // log(i*chi(i-1) + 1) in log space
        const double base = std::log(static_cast<double>(i)) + value;
        value = base + std::log1p(std::exp(-base));
    }
    return value;
}

} // namespace ndbs
