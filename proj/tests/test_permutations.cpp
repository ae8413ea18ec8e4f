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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "ndbs/errors.hpp"
#include "ndbs/permutations.hpp"
#include "ndbs/rng.hpp"

using ndbs::CycleStructure;
using ndbs::IntegerPartition;
using ndbs::Permutation;

namespace {

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Independent partition-count oracle: p(n) by the classic DP over largest part.
std::uint64_t partition_count(int n) {
    std::vector<std::uint64_t> p(n + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int total = part; total <= n; ++total) p[total] += p[total - part];
    return p[n];
}

} // namespace

TEST_CASE("permutation enumeration: count and lexicographic order") {
    std::vector<Permutation> perms;
    ndbs::for_each_permutation(3, [&](const Permutation& s) { perms.push_back(s); });
    REQUIRE(perms.size() == 6);
    CHECK(perms.front() == Permutation{0, 1, 2});
    CHECK(perms.back() == Permutation{2, 1, 0});
    for (std::size_t i = 1; i < perms.size(); ++i) CHECK(perms[i - 1] < perms[i]);

    std::uint64_t count = 0;
    ndbs::for_each_permutation(8, [&](const Permutation&) { ++count; });
    CHECK(count == 40320);

    std::uint64_t one = 0;
    ndbs::for_each_permutation(1, [&](const Permutation& s) {
        ++one;
        CHECK(s == Permutation{0});
    });
    CHECK(one == 1);

    CHECK_THROWS_AS(ndbs::for_each_permutation(11, [](const Permutation&) {}),
                    ndbs::capacity_error);
}

TEST_CASE("cycle structure extraction") {
    const auto identity5 = ndbs::cycle_structure({0, 1, 2, 3, 4});
    CHECK(identity5.counts[1] == 5);

    const auto swap3 = ndbs::cycle_structure({1, 0, 2});
    CHECK(swap3.counts[1] == 1);
    CHECK(swap3.counts[2] == 1);

    const auto four_cycle = ndbs::cycle_structure({1, 2, 3, 0});
    CHECK(four_cycle.counts[4] == 1);
    CHECK(four_cycle.counts[1] == 0);

    CHECK_THROWS_AS(ndbs::cycle_structure({0, 0, 1}), ndbs::validation_error);
}

TEST_CASE("cycle structure invariants on random permutations") {
    ndbs::Xoshiro256pp rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 7);
        Permutation sigma(n);
        for (int i = 0; i < n; ++i) sigma[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(sigma[i], sigma[rng.next() % (i + 1)]);

        Permutation inverse(n), composed(n);
        for (int i = 0; i < n; ++i) inverse[sigma[i]] = i;
        for (int i = 0; i < n; ++i) composed[i] = sigma[inverse[i]];

        // sigma o sigma^{-1} = identity
        CHECK(ndbs::cycle_structure(composed).counts[1] == n);
        // inverse has the same cycle structure
        CHECK(ndbs::cycle_structure(sigma).counts == ndbs::cycle_structure(inverse).counts);
        // sum k C_k = n
        const auto cs = ndbs::cycle_structure(sigma);
        int total = 0;
        for (int k = 1; k <= n; ++k) total += k * cs.counts[k];
        CHECK(total == n);
    }
}

TEST_CASE("partition enumeration: counts and canonical form") {
    std::vector<std::vector<int>> parts3;
    ndbs::for_each_partition(3, [&](const IntegerPartition& p) { parts3.push_back(p.parts); });
    REQUIRE(parts3.size() == 3);
    CHECK(parts3[0] == std::vector<int>{3});
    CHECK(parts3[1] == std::vector<int>{2, 1});
    CHECK(parts3[2] == std::vector<int>{1, 1, 1});

    std::uint64_t count5 = 0;
    ndbs::for_each_partition(5, [&](const IntegerPartition&) { ++count5; });
    CHECK(count5 == partition_count(5));
    CHECK(count5 == 7);

    std::uint64_t count50 = 0;
    ndbs::for_each_partition(50, [&](const IntegerPartition& p) {
        ++count50;
        int sum = 0;
        for (std::size_t i = 0; i < p.parts.size(); ++i) {
            sum += p.parts[i];
            if (i > 0) CHECK(p.parts[i] <= p.parts[i - 1]);
        }
        CHECK(sum == 50);
    });
    CHECK(count50 == 204226);
    CHECK(count50 == partition_count(50));

    CHECK_THROWS_AS(ndbs::for_each_partition(81, [](const IntegerPartition&) {}),
                    ndbs::capacity_error);
}

TEST_CASE("partition multiplicity: hand values and the class equation") {
    IntegerPartition ones3{3, {1, 1, 1}};
    CHECK(ndbs::partition_multiplicity_exact(ones3) == 1);
    IntegerPartition three{3, {3}};
    CHECK(ndbs::partition_multiplicity_exact(three) == 2);
    IntegerPartition two_one{3, {2, 1}};
    CHECK(ndbs::partition_multiplicity_exact(two_one) == 3);
    IntegerPartition two_two{4, {2, 2}};
    CHECK(ndbs::partition_multiplicity_exact(two_two) == 3);

    // class equation: multiplicities over all partitions of N sum to N!
    for (int n = 1; n <= 8; ++n) {
        std::uint64_t total = 0;
        ndbs::for_each_partition(n, [&](const IntegerPartition& p) {
            total += ndbs::partition_multiplicity_exact(p);
        });
        CHECK(total == factorial(n));
    }

    // cross-check against brute-force class sizes for N = 6
    std::map<std::vector<int>, std::uint64_t> class_sizes;
    ndbs::for_each_permutation(6, [&](const Permutation& sigma) {
        ++class_sizes[ndbs::cycle_structure(sigma).counts];
    });
    ndbs::for_each_partition(6, [&](const IntegerPartition& p) {
        CHECK(class_sizes.at(p.cycle_structure().counts) ==
              ndbs::partition_multiplicity_exact(p));
    });
}

TEST_CASE("log multiplicity agrees with the exact value") {
    ndbs::for_each_partition(18, [&](const IntegerPartition& p) {
        const double exact = static_cast<double>(ndbs::partition_multiplicity_exact(p));
        CHECK(std::abs(ndbs::log_partition_multiplicity(p) - std::log(exact)) < 1e-10);
    });
}

TEST_CASE("chi values and identities") {
    CHECK(static_cast<std::uint64_t>(ndbs::chi_exact(0)) == 1);
    CHECK(static_cast<std::uint64_t>(ndbs::chi_exact(1)) == 2);
    CHECK(static_cast<std::uint64_t>(ndbs::chi_exact(2)) == 5);
    CHECK(static_cast<std::uint64_t>(ndbs::chi_exact(3)) == 16);

    // chi(n) = sum over S_n of 2^{C_1}
    for (int n = 1; n <= 8; ++n) {
        double total = 0.0;
        ndbs::for_each_permutation(n, [&](const Permutation& sigma) {
            total += std::pow(2.0, ndbs::cycle_structure(sigma).counts[1]);
        });
        CHECK(total == doctest::Approx(ndbs::chi(n)).epsilon(1e-12));
    }

    // chi(n)/n! increases to e from below (non-strict in floating point:
    // the increments drop below double resolution near n = 20)
    double previous = 0.0;
    for (int n = 0; n <= 20; ++n) {
        const double ratio = ndbs::chi(n) / std::tgamma(n + 1.0);
        CHECK(ratio >= previous);
        CHECK(ratio <= 2.718281828459045236 * (1.0 + 4e-16));
        previous = ratio;
    }
    CHECK(ndbs::chi(20) / std::tgamma(21.0) ==
          doctest::Approx(2.718281828459045236).epsilon(1e-15));

    // log_chi continues the exact values smoothly past the 128-bit range
    CHECK(ndbs::log_chi(33) == doctest::Approx(std::log(ndbs::chi(33))).epsilon(1e-14));
    CHECK(ndbs::log_chi(50) ==
          doctest::Approx(std::lgamma(51.0) + 1.0).epsilon(1e-10)); // ~ log(e * 50!)

    CHECK_THROWS_AS(ndbs::chi_exact(34), ndbs::capacity_error);
    CHECK_THROWS_AS(ndbs::chi(-1), ndbs::validation_error);
}
