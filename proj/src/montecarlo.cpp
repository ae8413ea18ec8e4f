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

#include "ndbs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ndbs/errors.hpp"
#include "ndbs/probability.hpp"
#include "ndbs/rng.hpp"
#include "ndbs/variance.hpp"

namespace ndbs {

std::string MonteCarloReport::to_json() const {
    nlohmann::json j;
    j["photons"] = photons;
    j["modes"] = modes;
    j["samples"] = samples;
    j["seed"] = seed;
    j["empirical_mean"] = empirical_mean;
    j["empirical_variance"] = empirical_variance;
    j["mean_standard_error"] = mean_standard_error;
    j["variance_standard_error"] = variance_standard_error;
    j["theory_mean"] = theory_mean;
    j["theory_variance"] = theory_variance;
    j["mean_zscore"] = mean_zscore;
    j["variance_relative_error"] = variance_relative_error;
    j["short_circuited"] = short_circuited;
    if (tail_epsilon) {
        j["tail_epsilon"] = *tail_epsilon;
        j["empirical_tail"] = *empirical_tail;
        j["tail_standard_error"] = *tail_standard_error;
        j["chebyshev_floor"] = *chebyshev_floor;
    }
    return j.dump(2);
}

namespace {

double scale_factor(int n, int modes) {
    // N! / M^N
    double value = 1.0;
    for (int i = 1; i <= n; ++i) value *= static_cast<double>(i) / modes;
    return value;
}

MonteCarloReport run_ensemble(int n, int modes, const GVector& g,
                              std::optional<double> tail_epsilon,
                              std::uint64_t samples, std::uint64_t seed) {
    if (n < 1 || n > 6)
        throw capacity_error("ensemble run: N <= 6 (general path per sample), got N = " +
                             std::to_string(n));
    if (modes < n)
        throw validation_error("ensemble run: M >= N required");
    if (samples < 1000)
        throw validation_error("ensemble run: samples >= 1000 required");
    if (g.size() != n)
        throw validation_error("ensemble run: g-vector must have length N");

    MonteCarloReport report;
    report.photons = n;
    report.modes = modes;
    report.samples = samples;
    report.seed = seed;
    report.theory_mean = 0.0;
    const double prefactor = scale_factor(n, modes);
    report.theory_variance = prefactor * prefactor * variance_partition(g);
    if (tail_epsilon) {
        report.tail_epsilon = *tail_epsilon;
        report.chebyshev_floor = chebyshev_success(variance_partition(g), *tail_epsilon);
    }

    if (g.is_ideal()) {
        // P0 and P_eta coincide term by term; no sampling noise to estimate.
        report.short_circuited = true;
        if (tail_epsilon) {
            report.empirical_tail = 1.0;
            report.tail_standard_error = 0.0;
        }
        return report;
    }

    std::vector<int> inputs(n);
    std::iota(inputs.begin(), inputs.end(), 0);
    std::vector<int> occ(n, 1); // fixed output modes l = 1..N
    const ModeAssignment assignment(n, inputs, occ);
    const GVector ideal = GVector::ideal(n);

    Xoshiro256pp rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_4 = 0.0;
    std::uint64_t inside = 0;
    const double tail_threshold = tail_epsilon ? *tail_epsilon * prefactor : 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const ComplexMatrix a = gaussian_submatrix(n, modes, rng);
        const double p0 = output_probability(a, assignment, ideal).value;
        const double p_eta = output_probability(a, assignment, g).value;
        const double diff = p0 - p_eta;
        if (!std::isfinite(diff))
            throw std::runtime_error("ensemble run: non-finite sample at index " +
                                     std::to_string(s));
        sum += diff;
        sum_sq += diff * diff;
        sum_4 += diff * diff * diff * diff;
        if (tail_epsilon && std::abs(diff) < tail_threshold) ++inside;
    }

    const double count = static_cast<double>(samples);
    report.empirical_mean = sum / count;
    report.empirical_variance =
        (sum_sq - count * report.empirical_mean * report.empirical_mean) / (count - 1.0);
    report.mean_standard_error = std::sqrt(report.empirical_variance / count);
    // error bar on the sample variance from the fourth moment (the
    // difference is heavy-tailed at small N, so a Gaussian bar would lie)
    const double m2 = sum_sq / count;
    const double m4 = sum_4 / count;
    report.variance_standard_error =
        std::sqrt(std::max(m4 - m2 * m2, 0.0) / count);
    report.mean_zscore = report.mean_standard_error > 0.0
                             ? report.empirical_mean / report.mean_standard_error
                             : 0.0;
    report.variance_relative_error =
        std::abs(report.empirical_variance - report.theory_variance) /
        report.theory_variance;
    if (tail_epsilon) {
        const double frequency = static_cast<double>(inside) / count;
        report.empirical_tail = frequency;
        report.tail_standard_error =
            std::sqrt(std::max(frequency * (1.0 - frequency), 1.0 / count) / count);
    }
    return report;
}

} // namespace

MonteCarloReport estimate_difference_moments(int n, int modes, const GVector& g,
                                             std::uint64_t samples, std::uint64_t seed) {
    return run_ensemble(n, modes, g, std::nullopt, samples, seed);
}

MonteCarloReport empirical_tail(int n, int modes, const GVector& g, double epsilon,
                                std::uint64_t samples, std::uint64_t seed) {
    if (!(epsilon > 0.0))
        throw validation_error("empirical_tail: epsilon > 0 required");
    return run_ensemble(n, modes, g, epsilon, samples, seed);
}

std::vector<BirthdayRow> birthday_bunching(int n, std::vector<int> modes_list,
                                           std::uint64_t haar_samples, const GVector& g,
                                           std::uint64_t seed) {
    if (n < 1 || n > 3)
        throw capacity_error("birthday_bunching: N <= 3 (exhaustive bunching mass)");
    if (modes_list.empty())
        throw validation_error("birthday_bunching: empty M list");
    if (haar_samples < 1)
        throw validation_error("birthday_bunching: at least one Haar sample required");
    if (g.size() != n)
        throw validation_error("birthday_bunching: g-vector must have length N");
    std::sort(modes_list.begin(), modes_list.end());

    std::vector<int> inputs(n);
    std::iota(inputs.begin(), inputs.end(), 0);

    std::vector<BirthdayRow> rows;
    for (std::size_t idx = 0; idx < modes_list.size(); ++idx) {
        const int modes = modes_list[idx];
        if (modes < n)
            throw validation_error("birthday_bunching: M >= N required");
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::uint64_t s = 0; s < haar_samples; ++s) {
            const std::uint64_t sample_seed =
                Xoshiro256pp::split_seed(seed, idx * haar_samples + s);
            const UnitaryNetwork u = haar_unitary(modes, sample_seed);
            const double mass = bunching_mass(u.matrix, inputs, g);
            sum += mass;
            sum_sq += mass * mass;
        }
        const double count = static_cast<double>(haar_samples);
        BirthdayRow row;
        row.modes = modes;
        row.mean_bunching_mass = sum / count;
        const double var = haar_samples > 1
                               ? (sum_sq - count * row.mean_bunching_mass *
                                               row.mean_bunching_mass) /
                                     (count - 1.0)
                               : 0.0;
        row.standard_error = std::sqrt(std::max(var, 0.0) / count);
        rows.push_back(row);
    }
    return rows;
}

std::string birthday_csv(const std::vector<BirthdayRow>& rows) {
    std::string out = "M,mean_bunching_mass,standard_error\n";
    char line[128];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", row.modes,
                      row.mean_bunching_mass, row.standard_error);
        out += line;
    }
    return out;
}

} // namespace ndbs
