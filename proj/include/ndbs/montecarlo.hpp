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

#ifndef NDBS_MONTECARLO_HPP
#define NDBS_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ndbs/sources.hpp"

namespace ndbs {

/// Empirical moments of P0 - P_eta over the i.i.d. Gaussian submatrix
/// ensemble, against the zero-mean and variance identities.
struct MonteCarloReport {
    int photons = 0;
    int modes = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double mean_standard_error = 0.0;
    double variance_standard_error = 0.0; // from the sample fourth moment
    double theory_mean = 0.0;             // identically zero
    double theory_variance = 0.0;         // (N!/M^N)^2 * V
    double mean_zscore = 0.0;
    double variance_relative_error = 0.0;
    bool short_circuited = false; // g == 1: difference identically zero

    std::optional<double> tail_epsilon;
    std::optional<double> empirical_tail;    // frequency of |P0-P_eta| < eps N!/M^N
    std::optional<double> tail_standard_error;
    std::optional<double> chebyshev_floor;   // 1 - V/eps^2

    std::string to_json() const;
};

/// Draws `samples` Gaussian N x N submatrices, evaluates P0 (ideal g) and
/// P_eta (given g) on output modes 1..N, and reports moments of the
/// difference. N <= 6, samples >= 1000. Deterministic given the seed.
MonteCarloReport estimate_difference_moments(int n, int modes, const GVector& g,
                                             std::uint64_t samples, std::uint64_t seed);

/// Same ensemble; also records the empirical tail frequency at `epsilon`
/// against the Chebyshev floor.
MonteCarloReport empirical_tail(int n, int modes, const GVector& g, double epsilon,
                                std::uint64_t samples, std::uint64_t seed);

struct BirthdayRow {
    int modes = 0;
    double mean_bunching_mass = 0.0;
    double standard_error = 0.0;
};

/// Haar-averaged bunched-output mass for each M in the list (sorted output).
/// Full M x M unitaries are drawn: bunching normalization needs unitarity.
/// N <= 3.
std::vector<BirthdayRow> birthday_bunching(int n, std::vector<int> modes_list,
                                           std::uint64_t haar_samples, const GVector& g,
                                           std::uint64_t seed);

std::string birthday_csv(const std::vector<BirthdayRow>& rows);

} // namespace ndbs

#endif
