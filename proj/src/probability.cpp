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

#include "ndbs/probability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ndbs/errors.hpp"

namespace ndbs {

ModeAssignment::ModeAssignment(int modes_in, std::vector<int> inputs_in,
                               std::vector<int> occupations_in)
    : modes(modes_in), inputs(std::move(inputs_in)), occupations(std::move(occupations_in)) {
    if (modes < 1)
        throw validation_error("ModeAssignment: M >= 1 required");
    if (inputs.empty())
        throw validation_error("ModeAssignment: at least one photon required");
    std::set<int> seen;
    for (int k : inputs) {
        if (k < 0 || k >= modes)
            throw validation_error("ModeAssignment: input mode out of range");
        if (!seen.insert(k).second)
            throw validation_error("ModeAssignment: input modes must be distinct");
    }
    if (static_cast<int>(occupations.size()) != modes)
        throw validation_error("ModeAssignment: occupation list must have length M");
    int total = 0;
    for (int m : occupations) {
        if (m < 0)
            throw validation_error("ModeAssignment: occupations must be non-negative");
        total += m;
    }
    if (total != photons())
        throw validation_error("ModeAssignment: occupations must sum to N");
}

std::vector<int> ModeAssignment::output_list() const {
    std::vector<int> out;
    out.reserve(photons());
    for (int l = 0; l < modes; ++l)
        for (int c = 0; c < occupations[l]; ++c) out.push_back(l);
    return out;
}

double ModeAssignment::occupation_factorial() const {
    double prod = 1.0;
    for (int m : occupations)
        for (int c = 2; c <= m; ++c) prod *= c;
    return prod;
}

double j_weight(const CycleStructure& cs, const GVector& g) {
    if (cs.n != g.size())
        throw validation_error("j_weight: cycle structure and g-vector sizes differ");
    double prod = 1.0;
    for (int k = 2; k <= cs.n; ++k)
        for (int c = 0; c < cs.counts[k]; ++c) prod *= g[k];
    return prod;
}

double j_weight_gaussian_closed(const CycleStructure& cs, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw validation_error("j_weight_gaussian_closed: gamma must lie in [0,1)");
    if (gamma == 0.0) return 1.0;
    double value = std::pow(1.0 - gamma, 0.5 * cs.n);
    for (int k = 1; k <= cs.n; ++k)
        if (cs.counts[k] > 0)
            value *= std::pow(1.0 - std::pow(gamma, k), -0.5 * cs.counts[k]);
    return value;
}

namespace {

void check_matrix_indices(const ComplexMatrix& network, const ModeAssignment& a) {
    int max_in = *std::max_element(a.inputs.begin(), a.inputs.end());
    if (max_in >= network.rows())
        throw validation_error("network matrix has fewer rows than the largest input mode");
    for (int l = 0; l < a.modes; ++l)
        if (a.occupations[l] > 0 && l >= network.cols())
            throw validation_error("network matrix has fewer columns than an occupied output");
}

double clamp_probability(double value) {
    if (value < 0.0 && value >= -1e-12) return 0.0;
    if (value > 1.0 && value <= 1.0 + 1e-12) return 1.0;
    return value;
}

ComplexMatrix submatrix(const ComplexMatrix& network, const ModeAssignment& a) {
    const auto outputs = a.output_list();
    const int n = a.photons();
    ComplexMatrix sub(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sub(r, c) = network(a.inputs[r], outputs[c]);
    return sub;
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<Permutation> perms;
    for_each_permutation(n, [&](const Permutation& sigma) { perms.push_back(sigma); });
    return perms;
}

} // namespace

ProbabilityResult output_probability(const ComplexMatrix& network,
                                     const ModeAssignment& assignment,
                                     const GVector& g) {
    const int n = assignment.photons();
    if (g.size() != n)
        throw validation_error("output_probability: g-vector must have length N");
    if (n > 8)
        throw capacity_error(
            "output_probability: general path limited to N <= 8 ((N!)^2 terms); "
            "use the ideal or classical fast path for larger N");
    require_finite(network, "output_probability");
    check_matrix_indices(network, assignment);

    const auto outputs = assignment.output_list();
    // W(a,b,alpha) = conj(U[k_a, l_alpha]) * U[k_b, l_alpha]
    std::vector<Complex> w(static_cast<std::size_t>(n) * n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int alpha = 0; alpha < n; ++alpha)
                w[(static_cast<std::size_t>(a) * n + b) * n + alpha] =
                    std::conj(network(assignment.inputs[a], outputs[alpha])) *
                    network(assignment.inputs[b], outputs[alpha]);

    const auto perms = all_permutations(n);

    // Group the double sum by the relative permutation sigma_R = sigma2 sigma1^{-1}:
    // P = (1/prod m!) sum_{sigma_R} J(sigma_R) T(sigma_R),
    // T(sigma_R) = sum_{sigma1} prod_alpha W(sigma1(alpha), sigma_R(sigma1(alpha)), alpha).
    // The groups of sigma_R and sigma_R^{-1} are conjugates, so only one of
    // each pair is evaluated and doubled via the real part.
    Complex accum(0.0, 0.0);
    Permutation inverse(n);
    for (const auto& rel : perms) {
        for (int i = 0; i < n; ++i) inverse[rel[i]] = i;
        if (inverse < rel) continue; // partner already counted
        const bool involution = (inverse == rel);

        Complex group_sum(0.0, 0.0);
        for (const auto& sigma1 : perms) {
            Complex prod(1.0, 0.0);
            for (int alpha = 0; alpha < n; ++alpha) {
                const int a = sigma1[alpha];
                prod *= w[(static_cast<std::size_t>(a) * n + rel[a]) * n + alpha];
            }
            group_sum += prod;
        }
        const double jw = j_weight(cycle_structure(rel), g);
        if (involution)
            accum += jw * group_sum;
        else
            accum += jw * 2.0 * group_sum.real();
    }

    const double magnitude = std::abs(accum);
    if (magnitude > 0.0 && std::abs(accum.imag()) > 1e-8 * magnitude)
        throw std::logic_error("output_probability: imaginary residue " +
                               std::to_string(accum.imag()) +
                               " exceeds tolerance (implementation bug)");

    ProbabilityResult result;
    result.value = clamp_probability(accum.real() / assignment.occupation_factorial());
    result.photons = n;
    result.modes = assignment.modes;
    result.path = EvalPath::general;
    return result;
}

ProbabilityResult ideal_probability(const ComplexMatrix& network,
                                    const ModeAssignment& assignment) {
    require_finite(network, "ideal_probability");
    check_matrix_indices(network, assignment);
    const Complex perm = permanent_ryser(submatrix(network, assignment));
    ProbabilityResult result;
    result.value = clamp_probability(std::norm(perm) / assignment.occupation_factorial());
    result.photons = assignment.photons();
    result.modes = assignment.modes;
    result.path = EvalPath::ideal;
    return result;
}

ProbabilityResult classical_probability(const ComplexMatrix& network,
                                        const ModeAssignment& assignment) {
    require_finite(network, "classical_probability");
    check_matrix_indices(network, assignment);
    ComplexMatrix abs2 = submatrix(network, assignment).cwiseAbs2().cast<Complex>();
    const double perm = permanent_ryser(abs2).real();
    ProbabilityResult result;
    result.value = clamp_probability(perm / assignment.occupation_factorial());
    result.photons = assignment.photons();
    result.modes = assignment.modes;
    result.path = EvalPath::classical;
    return result;
}

namespace {

/// Visits every occupation vector of `photons` over `modes` modes.
/// Count is C(M+N-1, N); the caller is responsible for the capacity gate.
void for_each_occupation(int modes, int photons,
                         const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> occ(modes, 0);
    const std::function<void(int, int)> fill = [&](int mode, int left) {
        if (mode == modes - 1) {
            occ[mode] = left;
            visit(occ);
            return;
        }
        for (int take = 0; take <= left; ++take) {
            occ[mode] = take;
            fill(mode + 1, left - take);
        }
    };
    fill(0, photons);
}

double configuration_count(int modes, int photons) {
    double count = 1.0;
    for (int i = 1; i <= photons; ++i)
        count *= static_cast<double>(modes - 1 + i) / i;
    return count;
}

void check_enumeration_capacity(int modes, int photons, const char* op) {
    if (photons > 4)
        throw capacity_error(std::string(op) + ": N <= 4 (exhaustive output enumeration)");
    if (configuration_count(modes, photons) > 2e5)
        throw capacity_error(std::string(op) +
                             ": too many output configurations (C(M+N-1,N) > 2e5)");
}

double output_mass(const ComplexMatrix& network, const std::vector<int>& inputs,
                   const GVector& g, bool bunched_only, const char* op) {
    const int n = static_cast<int>(inputs.size());
    int modes = static_cast<int>(network.cols());
    check_enumeration_capacity(modes, n, op);
    double total = 0.0;
    for_each_occupation(modes, n, [&](const std::vector<int>& occ) {
        if (bunched_only) {
            const bool bunched = std::any_of(occ.begin(), occ.end(),
                                             [](int m) { return m >= 2; });
            if (!bunched) return;
        }
        ModeAssignment a(modes, inputs, occ);
        total += output_probability(network, a, g).value;
    });
    return total;
}

} // namespace

double normalization_check(const ComplexMatrix& network, const std::vector<int>& inputs,
                           const GVector& g) {
    return output_mass(network, inputs, g, false, "normalization_check");
}

double bunching_mass(const ComplexMatrix& network, const std::vector<int>& inputs,
                     const GVector& g) {
    return output_mass(network, inputs, g, true, "bunching_mass");
}

} // namespace ndbs
