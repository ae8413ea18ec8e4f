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

#include "ndbs/variance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ndbs/errors.hpp"
#include "ndbs/permutations.hpp"
#include "ndbs/probability.hpp"

namespace ndbs {

double variance_direct(const GVector& g) {
    const int n = g.size();
    if (n > 8)
        throw capacity_error("variance_direct: N <= 8 (N! enumeration), got N = " +
                             std::to_string(n));
    double sum = 0.0;
    for_each_permutation(n, [&](const Permutation& sigma) {
        const CycleStructure cs = cycle_structure(sigma);
        const double bracket = 1.0 - j_weight(cs, g);
        sum += chi(cs.fixed_points()) * bracket * bracket;
    });
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    return sum / factorial;
}

double variance_partition(const GVector& g) {
    const int n = g.size();
    if (n > 80)
        throw capacity_error("variance_partition: N <= 80, got N = " + std::to_string(n));

    double total = 0.0;
    for_each_partition(n, [&](const IntegerPartition& p) {
        const CycleStructure cs = p.cycle_structure();

        // class weight / N! = 1 / prod_k (k^{C_k} C_k!), combined with chi in log space
        double log_weight = log_chi(cs.fixed_points());
        for (int k = 1; k <= n; ++k) {
            if (cs.counts[k] == 0) continue;
            log_weight -= cs.counts[k] * std::log(static_cast<double>(k));
            log_weight -= std::lgamma(cs.counts[k] + 1.0);
        }

        // bracket = 1 - prod_{k>=2} g_k^{C_k}, via expm1 of the log-product so
        // the eta^4 leading behavior survives cancellation near g == 1
        double log_j = 0.0;
        bool zero_factor = false;
        for (int k = 2; k <= n; ++k) {
            if (cs.counts[k] == 0) continue;
            if (g[k] == 0.0) {
                zero_factor = true;
                break;
            }
            log_j += cs.counts[k] * std::log(g[k]);
        }
        const double bracket = zero_factor ? 1.0 : -std::expm1(log_j);
        total += std::exp(log_weight) * bracket * bracket;
    });
    return total;
}

double variance_small_eta(int n, double eta) {
    if (n < 1)
        throw validation_error("variance_small_eta: N >= 1 required");
    if (!(eta >= 0.0))
        throw validation_error("variance_small_eta: eta >= 0 required");
    const double nd = n;
    const double poly = nd * nd * nd / 3.0 - nd * nd / 2.0 + 7.0 * nd / 6.0 - 1.0;
    return eta * eta * eta * eta * poly;
}

double chebyshev_success(double v, double epsilon) {
    if (!(epsilon > 0.0))
        throw validation_error("chebyshev_success: epsilon > 0 required");
    return 1.0 - v / (epsilon * epsilon);
}

bool sufficient_bound_check(double v, double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw validation_error("sufficient_bound_check: epsilon, delta must lie in (0,1)");
    return v <= epsilon * epsilon * delta;
}

double variational_success(double v, double epsilon) {
    if (!(epsilon > 0.0))
        throw validation_error("variational_success: epsilon > 0 required");
    return 1.0 - v / (4.0 * epsilon * epsilon);
}

BudgetResult mismatch_budget(int n, double epsilon, double delta) {
    if (n < 2)
        throw validation_error("mismatch_budget: N >= 2 required");
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw validation_error("mismatch_budget: epsilon, delta must lie in (0,1)");

    BudgetResult result;
    const double target = epsilon * epsilon * delta;
    result.leading_order = std::sqrt(3.0 * target) / std::pow(static_cast<double>(n), 1.5);

    const auto v_of_eta = [n](double eta) {
        return variance_partition(GaussianSource::from_eta(eta).gvector(n));
    };

    // V is monotone increasing in eta (every g_k decreases in gamma), so
    // bisection on [1e-8, 10] is exact.
    double lo = 1e-8;
    double hi = 10.0;
    if (v_of_eta(hi) < target) {
        result.refined_found = false;
        return result;
    }
    if (v_of_eta(lo) > target) {
        result.refined_found = false;
        return result;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (v_of_eta(mid) <= target)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-10 * hi) break;
    }
    result.eta_star = lo;
    result.refined = 1.0 - fidelity_from_eta(lo);
    result.refined_found = true;
    return result;
}

std::vector<Fig2Row> fig2_curve(const std::vector<double>& g2_list, int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min)
        throw validation_error("fig2_curve: need 1 <= n_min <= n_max");
    if (n_max > 80)
        throw capacity_error("fig2_curve: N <= 80 (partition capacity)");
    std::vector<Fig2Row> rows;
    for (double g2 : g2_list) {
        const GaussianSource source = GaussianSource::from_g2(g2);
        const double eta = source.eta();
        for (int n = n_min; n <= n_max; ++n) {
            Fig2Row row;
            row.g2 = g2;
            row.n = n;
            row.v = variance_partition(source.gvector(n));
            row.v_cuberoot = std::cbrt(row.v);
            row.v_approx_cuberoot = std::cbrt(variance_small_eta(n, eta));
            rows.push_back(row);
        }
    }
    return rows;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
    std::string out = "g2,N,V,V_cuberoot,V_approx_cuberoot\n";
    char line[256];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g,%.17g\n", row.g2, row.n,
                      row.v, row.v_cuberoot, row.v_approx_cuberoot);
        out += line;
    }
    return out;
}

} // namespace ndbs
