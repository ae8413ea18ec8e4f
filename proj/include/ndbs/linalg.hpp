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

#ifndef NDBS_LINALG_HPP
#define NDBS_LINALG_HPP

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "ndbs/rng.hpp"

namespace ndbs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// M-mode linear optical network: an M x M matrix, unitary to 1e-10 in max-norm.
struct UnitaryNetwork {
    int modes = 0;
    ComplexMatrix matrix;
};

/// Max-norm deviation of A†A from the identity.
double unitarity_defect(const ComplexMatrix& a);

/// Throws validation_error if entries contain NaN/Inf or the matrix is empty.
void require_finite(const ComplexMatrix& a, const std::string& name);

/// Permanent by direct sum over all N! permutations. Oracle only; N <= 10.
Complex permanent_naive(const ComplexMatrix& a);

/// Permanent by Ryser's formula with Gray-code row-sum updates, O(N 2^N).
/// N <= 30 (hard cap; a capacity_error names the limit beyond it).
Complex permanent_ryser(const ComplexMatrix& a);

/// Haar-random M x M unitary: complex Ginibre draw, Householder QR, and a
/// column phase fix making the R diagonal real positive. Deterministic in seed.
UnitaryNetwork haar_unitary(int modes, std::uint64_t seed);

/// N x N matrix of i.i.d. complex Gaussians with <U_kl> = 0, <|U_kl|^2> = 1/M
/// (the dilute-limit approximation of a Haar submatrix).
ComplexMatrix gaussian_submatrix(int n, int modes, std::uint64_t seed);

/// Same ensemble, drawing from a caller-owned stream (for sampling loops).
ComplexMatrix gaussian_submatrix(int n, int modes, Xoshiro256pp& rng);

/// JSON exchange format: {"rows":R,"cols":C,"re":[...],"im":[...]}, row-major.
ComplexMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const ComplexMatrix& a);
ComplexMatrix matrix_from_json_file(const std::string& path);

} // namespace ndbs

#endif
