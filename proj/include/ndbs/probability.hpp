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

#ifndef NDBS_PROBABILITY_HPP
#define NDBS_PROBABILITY_HPP

#include <vector>

#include "ndbs/linalg.hpp"
#include "ndbs/permutations.hpp"
#include "ndbs/sources.hpp"

namespace ndbs {

/// Input/output configuration of a run: N photons in distinct input modes and
/// an occupation vector over the M output modes with total N.
/// Mode indices are 0-based here; the CLI and file formats use 1-based.
struct ModeAssignment {
    int modes = 0;
    std::vector<int> inputs;      // distinct, 0-based
    std::vector<int> occupations; // length M, non-negative, sums to N

    /// Validates and constructs; throws validation_error.
    ModeAssignment(int modes, std::vector<int> inputs, std::vector<int> occupations);

    int photons() const { return static_cast<int>(inputs.size()); }

    /// Output index list l_1..l_N: mode j repeated occupations[j] times.
    std::vector<int> output_list() const;

    /// Product of occupation factorials.
    double occupation_factorial() const;
};

enum class EvalPath { general, ideal, classical };

struct ProbabilityResult {
    double value = 0.0;
    int photons = 0;
    int modes = 0;
    EvalPath path = EvalPath::general;
};

/// J(sigma) = prod_{k>=2} g_k^{C_k(sigma)}; equals 1 on the identity class.
double j_weight(const CycleStructure& cs, const GVector& g);

/// Gaussian-model closed form (1-gamma)^{N/2} prod_k (1-gamma^k)^{-C_k/2}.
double j_weight_gaussian_closed(const CycleStructure& cs, double gamma);

/// Exact output probability by the double sum over permutation pairs,
/// grouped by the relative permutation so J is evaluated N! (not (N!)^2)
/// times, with the conjugate-pair halving. N <= 8.
ProbabilityResult output_probability(const ComplexMatrix& network,
                                     const ModeAssignment& assignment,
                                     const GVector& g);

/// Ideal-source fast path |perm(U_sub)|^2 / prod m_l!. N <= 30.
ProbabilityResult ideal_probability(const ComplexMatrix& network,
                                    const ModeAssignment& assignment);

/// Classical fast path perm(|U_sub|^2) / prod m_l!. N <= 30.
ProbabilityResult classical_probability(const ComplexMatrix& network,
                                        const ModeAssignment& assignment);

/// Sum of the general-path probability over every output occupation vector;
/// 1 within 1e-9 for model-derived g. N <= 4 and M <= 8.
double normalization_check(const ComplexMatrix& network,
                           const std::vector<int>& inputs, const GVector& g);

/// Total probability of outputs with some m_l >= 2. Same capacity limits as
/// normalization_check.
double bunching_mass(const ComplexMatrix& network, const std::vector<int>& inputs,
                     const GVector& g);

} // namespace ndbs

#endif
