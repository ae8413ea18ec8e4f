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

#ifndef NDBS_VARIANCE_HPP
#define NDBS_VARIANCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ndbs/sources.hpp"

namespace ndbs {

/// V = (1/N!) sum over all permutations of chi(C_1) [1 - J]^2.
/// Brute-force oracle path; N <= 8.
double variance_direct(const GVector& g);

/// Same quantity as a sum over integer partitions weighted by conjugacy-class
/// sizes; log-space weights, so valid up to N = 80.
double variance_partition(const GVector& g);

/// Small-mismatch cubic approximation eta^4 (N^3/3 - N^2/2 + 7N/6 - 1).
double variance_small_eta(int n, double eta);

/// Chebyshev success floor 1 - v/eps^2 (<= 0 means the bound is vacuous).
double chebyshev_success(double v, double epsilon);

/// Sufficient scalability condition v <= eps^2 * delta. eps, delta in (0,1).
bool sufficient_bound_check(double v, double epsilon, double delta);

/// Variational-distance success floor 1 - v/(4 eps^2).
double variational_success(double v, double epsilon);

struct BudgetResult {
    double leading_order = 0.0; // sqrt(3 eps^2 delta) / N^{3/2}
    double refined = 0.0;       // 1 - <F> at the solved eta*
    double eta_star = 0.0;
    bool refined_found = false; // false: no crossing in eta <= 10 (budget above classical regime)
};

/// Maximum tolerable mode mismatch 1 - <F> for V(N,eta) <= eps^2 delta,
/// leading order plus a bisection-refined value for the Gaussian model.
BudgetResult mismatch_budget(int n, double epsilon, double delta);

struct Fig2Row {
    double g2 = 0.0;
    int n = 0;
    double v = 0.0;
    double v_cuberoot = 0.0;
    double v_approx_cuberoot = 0.0;
};

/// V(N) curves for the Gaussian model over a g2 list.
std::vector<Fig2Row> fig2_curve(const std::vector<double>& g2_list, int n_min, int n_max);

/// CSV with header g2,N,V,V_cuberoot,V_approx_cuberoot, 17 significant digits.
std::string fig2_csv(const std::vector<Fig2Row>& rows);

} // namespace ndbs

#endif
