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

#include "ndbs/sources.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <nlohmann/json.hpp>

#include "ndbs/errors.hpp"

namespace ndbs {

namespace {
constexpr double kSlack = 1e-12;
}

GVector::GVector(std::vector<double> g) : g_(std::move(g)) {
    const int n = static_cast<int>(g_.size());
    if (n < 1)
        throw validation_error("GVector: N >= 1 required");
    if (std::abs(g_[0] - 1.0) > kSlack)
        throw validation_error("GVector: g_1 must equal 1");
    g_[0] = 1.0;
    for (int k = 0; k < n; ++k) {
        if (!(g_[k] >= -kSlack && g_[k] <= 1.0 + kSlack))
            throw validation_error("GVector: g_" + std::to_string(k + 1) +
                                   " outside [0,1]");
        if (k > 0 && g_[k] > g_[k - 1] + kSlack)
            throw validation_error("GVector: sequence must be non-increasing at k = " +
                                   std::to_string(k + 1));
    }
    // Submultiplicativity g_n <= g_k g_{n-k}: holds for any tr rho^k family.
    for (int m = 2; m <= n; ++m)
        for (int k = 1; k < m; ++k)
            if (g_[m - 1] > g_[k - 1] * g_[m - k - 1] + kSlack)
                throw validation_error("GVector: g_" + std::to_string(m) +
                                       " > g_" + std::to_string(k) + " * g_" +
                                       std::to_string(m - k));
}

GVector GVector::ideal(int n) {
    return GVector(std::vector<double>(n, 1.0));
}

GVector GVector::classical(int n) {
    std::vector<double> g(n, 0.0);
    g[0] = 1.0;
    return GVector(std::move(g));
}

bool GVector::is_ideal() const {
    for (double v : g_)
        if (v != 1.0) return false;
    return true;
}

bool GVector::is_classical() const {
    for (std::size_t i = 1; i < g_.size(); ++i)
        if (g_[i] != 0.0) return false;
    return true;
}

double gamma_from_g2(double g2) {
    if (!(g2 > 0.0 && g2 <= 1.0))
        throw validation_error("g2 must lie in (0,1]");
    return (1.0 - g2 * g2) / (1.0 + g2 * g2);
}

double g2_from_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw validation_error("gamma must lie in [0,1)");
    return std::sqrt((1.0 - gamma) / (1.0 + gamma));
}

double gamma_from_eta(double eta) {
    if (!(eta >= 0.0))
        throw validation_error("eta must be non-negative");
    return 2.0 * eta * eta / (1.0 + 2.0 * eta * eta);
}

double eta_from_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw validation_error("gamma must lie in [0,1)");
    return std::sqrt(gamma / (2.0 * (1.0 - gamma)));
}

double g2_from_fidelity(double fidelity) {
    if (!(fidelity > 0.0 && fidelity <= 1.0))
        throw validation_error("fidelity must lie in (0,1]");
    return fidelity / std::sqrt(2.0 - fidelity * fidelity);
}

double fidelity_from_eta(double eta) {
    if (!(eta >= 0.0))
        throw validation_error("eta must be non-negative");
    return 1.0 / std::sqrt(1.0 + 2.0 * eta * eta);
}

GaussianSource GaussianSource::from_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw validation_error("gamma must lie in [0,1)");
    return GaussianSource(gamma);
}

GaussianSource GaussianSource::from_eta(double eta) {
    return GaussianSource(gamma_from_eta(eta));
}

GaussianSource GaussianSource::from_g2(double g2) {
    return GaussianSource(gamma_from_g2(g2));
}

double GaussianSource::gk(int k) const {
    if (k < 1)
        throw validation_error("gk: k >= 1 required");
    if (k == 1 || gamma_ == 0.0) return 1.0;
    return std::pow(1.0 - gamma_, 0.5 * k) / std::sqrt(1.0 - std::pow(gamma_, k));
}

GVector GaussianSource::gvector(int n) const {
    if (n < 1)
        throw validation_error("gvector: N >= 1 required");
    std::vector<double> g(n);
    for (int k = 1; k <= n; ++k) g[k - 1] = gk(k);
    return GVector(std::move(g));
}

DensityMatrixSource::DensityMatrixSource(ComplexMatrix rho) : rho_(std::move(rho)) {
    require_finite(rho_, "DensityMatrixSource");
    if (rho_.rows() != rho_.cols())
        throw validation_error("DensityMatrixSource: rho must be square");
    const double hermitian_defect = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (hermitian_defect > kSlack)
        throw validation_error("DensityMatrixSource: rho not Hermitian (defect " +
                               std::to_string(hermitian_defect) + ")");
    const double trace_defect = std::abs(rho_.trace() - Complex(1.0, 0.0));
    if (trace_defect > kSlack)
        throw validation_error("DensityMatrixSource: tr(rho) != 1 (defect " +
                               std::to_string(trace_defect) + ")");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        (rho_ + rho_.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    eigenvalues_ = solver.eigenvalues();
    for (int i = 0; i < eigenvalues_.size(); ++i) {
        if (eigenvalues_[i] < -kSlack)
            throw validation_error("DensityMatrixSource: rho not PSD (eigenvalue " +
                                   std::to_string(eigenvalues_[i]) + ")");
        if (eigenvalues_[i] < 0.0) eigenvalues_[i] = 0.0;
    }
}

double DensityMatrixSource::gk(int k) const {
    if (k < 1)
        throw validation_error("gk: k >= 1 required");
    if (k == 1) return 1.0;
    double sum = 0.0;
    for (int i = 0; i < eigenvalues_.size(); ++i)
        sum += std::pow(eigenvalues_[i], k);
    return sum;
}

GVector DensityMatrixSource::gvector(int n) const {
    if (n < 1)
        throw validation_error("gvector: N >= 1 required");
    std::vector<double> g(n);
    for (int k = 1; k <= n; ++k) g[k - 1] = gk(k);
    return GVector(std::move(g));
}

DensityMatrixSource build_density_matrix(const SampledSpectralEnsemble& ensemble) {
    const int samples = static_cast<int>(ensemble.weights.size());
    if (samples < 1 || ensemble.states.cols() != samples)
        throw validation_error("build_density_matrix: weight/state count mismatch");
    if (std::abs(ensemble.weights.sum() - 1.0) > kSlack)
        throw validation_error("build_density_matrix: weights must sum to 1");
    for (int s = 0; s < samples; ++s) {
        if (ensemble.weights[s] < 0.0)
            throw validation_error("build_density_matrix: negative weight");
        if (std::abs(ensemble.states.col(s).norm() - 1.0) > kSlack)
            throw validation_error("build_density_matrix: state " + std::to_string(s) +
                                   " is not unit norm");
    }
    const int dim = static_cast<int>(ensemble.states.rows());
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (int s = 0; s < samples; ++s)
        rho += ensemble.weights[s] * ensemble.states.col(s) *
               ensemble.states.col(s).adjoint();
    // symmetrize and renormalize away accumulation noise before validation
    rho = (rho + rho.adjoint().eval()) * 0.5;
    rho /= rho.trace().real();
    return DensityMatrixSource(std::move(rho));
}

double average_fidelity(const SampledSpectralEnsemble& ensemble) {
    const int samples = static_cast<int>(ensemble.weights.size());
    if (samples < 1 || ensemble.states.cols() != samples)
        throw validation_error("average_fidelity: weight/state count mismatch");
    double total = 0.0;
    for (int s = 0; s < samples; ++s)
        for (int t = 0; t < samples; ++t)
            total += ensemble.weights[s] * ensemble.weights[t] *
                     std::abs(ensemble.states.col(s).dot(ensemble.states.col(t)));
    return total;
}

namespace {

/// Gauss-Hermite nodes/weights by Golub-Welsch: eigen-decomposition of the
/// symmetric tridiagonal Jacobi matrix with off-diagonals sqrt(i/2).
/// Weights are returned already normalized (sum 1), i.e. divided by sqrt(pi).
void gauss_hermite(int nodes, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 1; i < nodes; ++i) {
        const double b = std::sqrt(0.5 * i);
        jacobi(i, i - 1) = b;
        jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    x = solver.eigenvalues();
    w.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double first = solver.eigenvectors()(0, i);
        w[i] = first * first;
    }
}

} // namespace

SampledSpectralEnsemble gaussian_ensemble(double eta, int grid_size,
                                          int quadrature_nodes) {
    if (!(eta >= 0.0))
        throw validation_error("gaussian_ensemble: eta >= 0 required");
    if (grid_size < 2 || quadrature_nodes < 1)
        throw validation_error("gaussian_ensemble: bad discretization sizes");

    // Units: spectral width 1, center frequency 0; arrival-time spread eta.
    // The spectral density |phi|^2 has standard deviation 1, so the amplitude
    // is exp(-omega^2/4).
    Eigen::VectorXd omega(grid_size);
    Eigen::VectorXd amplitude(grid_size);
    for (int j = 0; j < grid_size; ++j) {
        omega[j] = -6.0 + 12.0 * j / (grid_size - 1);
        amplitude[j] = std::exp(-omega[j] * omega[j] / 4.0);
    }
    amplitude /= amplitude.norm();

    Eigen::VectorXd nodes, weights;
    gauss_hermite(quadrature_nodes, nodes, weights);

    SampledSpectralEnsemble ensemble;
    ensemble.weights = weights;
    ensemble.states.resize(grid_size, quadrature_nodes);
    for (int s = 0; s < quadrature_nodes; ++s) {
        const double tau = std::sqrt(2.0) * eta * nodes[s];
        for (int j = 0; j < grid_size; ++j)
            ensemble.states(j, s) =
                amplitude[j] * std::exp(Complex(0.0, omega[j] * tau));
    }
    return ensemble;
}

GVector gvector_from_spec_text(const std::string& json_text, int n) {
    if (n < 1)
        throw validation_error("source spec: N >= 1 required");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("source spec parse failure: ") + e.what());
    }
    const std::string model = j.value("model", "");
    if (model == "gaussian") {
        if (j.contains("g2")) return GaussianSource::from_g2(j.at("g2").get<double>()).gvector(n);
        if (j.contains("eta")) return GaussianSource::from_eta(j.at("eta").get<double>()).gvector(n);
        if (j.contains("gamma")) return GaussianSource::from_gamma(j.at("gamma").get<double>()).gvector(n);
        throw validation_error("gaussian source spec needs one of g2, eta, gamma");
    }
    if (model == "density") {
        if (!j.contains("rho_file"))
            throw validation_error("density source spec needs rho_file");
        ComplexMatrix rho = matrix_from_json_file(j.at("rho_file").get<std::string>());
        return DensityMatrixSource(std::move(rho)).gvector(n);
    }
    if (model == "gvector") {
        if (!j.contains("g"))
            throw validation_error("gvector source spec needs g array");
        auto g = j.at("g").get<std::vector<double>>();
        if (static_cast<int>(g.size()) < n)
            throw validation_error("gvector source spec shorter than N");
        g.resize(n);
        return GVector(std::move(g));
    }
    throw validation_error("unknown source model: '" + model + "'");
}

} // namespace ndbs
