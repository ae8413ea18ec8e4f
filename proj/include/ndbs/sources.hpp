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

#ifndef NDBS_SOURCES_HPP
#define NDBS_SOURCES_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ndbs/linalg.hpp"

namespace ndbs {

/// Indistinguishability parameters g_1..g_N of a source model.
/// Construction enforces g_1 = 1, 0 <= g_k <= 1, monotone non-increase,
/// and submultiplicativity g_n <= g_k * g_{n-k} (all to 1e-12 slack).
class GVector {
public:
    explicit GVector(std::vector<double> g);

    static GVector ideal(int n);     // all g_k = 1
    static GVector classical(int n); // g_1 = 1, g_k = 0 for k >= 2

    int size() const { return static_cast<int>(g_.size()); }
    double operator[](int k) const { return g_[k - 1]; } // 1-based, matches g_k
    const std::vector<double>& values() const { return g_; }

    bool is_ideal() const;
    bool is_classical() const;

private:
    std::vector<double> g_;
};

/// Parameter conversions for the Gaussian random-arrival-time source.
/// gamma = 2 eta^2 / (1 + 2 eta^2) = (1 - g2^2) / (1 + g2^2).
double gamma_from_g2(double g2);
double g2_from_gamma(double gamma);
double gamma_from_eta(double eta);
double eta_from_gamma(double gamma);
double g2_from_fidelity(double fidelity); // g2 = F / sqrt(2 - F^2)
double fidelity_from_eta(double eta);     // <F> = 1 / sqrt(1 + 2 eta^2)

/// Single photons with Gaussian spectra and Gaussian-distributed random
/// arrival times. Canonical internal parameter is gamma in [0,1); eta and g2
/// are converted at the boundary.
class GaussianSource {
public:
    static GaussianSource from_gamma(double gamma);
    static GaussianSource from_eta(double eta);
    static GaussianSource from_g2(double g2);

    double gamma() const { return gamma_; }
    double eta() const { return eta_from_gamma(gamma_); }
    double g2() const { return g2_from_gamma(gamma_); }
    double mean_fidelity() const { return fidelity_from_eta(eta()); }

    /// g_k = (1 - gamma)^{k/2} (1 - gamma^k)^{-1/2}; exactly 1 for k = 1 or gamma = 0.
    double gk(int k) const;

    GVector gvector(int n) const;

private:
    explicit GaussianSource(double gamma) : gamma_(gamma) {}
    double gamma_;
};

/// Weighted set of unit-norm spectral amplitude vectors: a discretization of
/// the fluctuating single-photon state. Weights sum to 1.
struct SampledSpectralEnsemble {
    Eigen::VectorXd weights;  // length S
    ComplexMatrix states;     // D x S, unit-norm columns
};

/// Generic numeric source: the one-particle density matrix rho with cached
/// eigenvalues; g_k = tr rho^k. Construction validates Hermiticity (1e-12),
/// positive semidefiniteness (eigenvalues >= -1e-12, clamped to 0) and unit
/// trace (1e-12).
class DensityMatrixSource {
public:
    explicit DensityMatrixSource(ComplexMatrix rho);

    int dimension() const { return static_cast<int>(rho_.rows()); }
    const ComplexMatrix& rho() const { return rho_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    double gk(int k) const;
    GVector gvector(int n) const;

private:
    ComplexMatrix rho_;
    Eigen::VectorXd eigenvalues_;
};

/// rho = sum_s p_s |Phi_s><Phi_s|.
DensityMatrixSource build_density_matrix(const SampledSpectralEnsemble& ensemble);

/// <F> = sum_{s,t} p_s p_t |<Phi_s|Phi_t>|.
double average_fidelity(const SampledSpectralEnsemble& ensemble);

/// Discretized Gaussian random-arrival-time model: frequency grid of
/// `grid_size` points over +-6 spectral widths, arrival-time average by
/// `quadrature_nodes`-node Gauss-Hermite quadrature. Defaults reproduce the
/// closed forms to better than 1e-8 for eta <= 1.
SampledSpectralEnsemble gaussian_ensemble(double eta, int grid_size = 256,
                                          int quadrature_nodes = 64);

/// CLI-facing source specification:
///   {"model":"gaussian","g2":0.99} | {"model":"gaussian","eta":0.1}
///   | {"model":"gaussian","gamma":0.3}
///   | {"model":"density","rho_file":"path"}
///   | {"model":"gvector","g":[1,0.98,...]}
GVector gvector_from_spec_text(const std::string& json_text, int n);

} // namespace ndbs

#endif
