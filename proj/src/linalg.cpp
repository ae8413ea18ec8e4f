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

#include "ndbs/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "ndbs/errors.hpp"

namespace ndbs {

double unitarity_defect(const ComplexMatrix& a) {
    ComplexMatrix gram = a.adjoint() * a;
    gram -= ComplexMatrix::Identity(a.cols(), a.cols());
    return gram.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& a, const std::string& name) {
    if (a.rows() < 1 || a.cols() < 1)
        throw validation_error(name + ": matrix must be non-empty");
    if (!a.allFinite())
        throw validation_error(name + ": matrix contains NaN or Inf entries");
}

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
    if (a.rows() != a.cols())
        throw validation_error(std::string(op) + ": matrix must be square, got " +
                               std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

} // namespace

Complex permanent_naive(const ComplexMatrix& a) {
    require_square(a, "permanent_naive");
    const int n = static_cast<int>(a.rows());
    if (n > 10)
        throw capacity_error("permanent_naive: N <= 10 (oracle guard), got N = " +
                             std::to_string(n));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum = 0.0;
    do {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= a(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

Complex permanent_ryser(const ComplexMatrix& a) {
    require_square(a, "permanent_ryser");
    const int n = static_cast<int>(a.rows());
    if (n < 1 || n > 30)
        throw capacity_error("permanent_ryser: 1 <= N <= 30 (2^N subset loop), got N = " +
                             std::to_string(n));

    // Ryser with binary-reflected Gray code: each step flips one column in the
    // running row sums, so the 2^N loop costs O(N) per subset.
    std::vector<Complex> rowsum(n, Complex(0.0, 0.0));
    Complex total = 0.0;
    const std::uint64_t count = std::uint64_t(1) << n;
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t next_gray = k ^ (k >> 1);
        const int bit = std::countr_zero(gray ^ next_gray);
        const double sign = (next_gray > gray) ? 1.0 : -1.0; // bit added vs removed
        gray = next_gray;
        for (int i = 0; i < n; ++i) rowsum[i] += sign * a(i, bit);

        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        const int popcount = std::popcount(gray);
        total += ((n - popcount) % 2 == 0) ? prod : -prod;
    }
    return total;
}

UnitaryNetwork haar_unitary(int modes, std::uint64_t seed) {
    if (modes < 1)
        throw validation_error("haar_unitary: M >= 1 required");
    Xoshiro256pp rng(seed);
    ComplexMatrix ginibre(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) ginibre(i, j) = rng.complex_normal();

    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase fix: scale column j by phase(r_jj) so the decomposition has a real
    // positive diagonal; this makes the distribution exactly Haar and the
    // output independent of any column scaling of the Ginibre draw.
    for (int j = 0; j < modes; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        const Complex phase = (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return UnitaryNetwork{modes, std::move(q)};
}

ComplexMatrix gaussian_submatrix(int n, int modes, Xoshiro256pp& rng) {
    if (n < 1 || modes < 1)
        throw validation_error("gaussian_submatrix: N >= 1 and M >= 1 required");
    const double scale = 1.0 / std::sqrt(2.0 * modes);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * rng.complex_normal();
    return a;
}

ComplexMatrix gaussian_submatrix(int n, int modes, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    return gaussian_submatrix(n, modes, rng);
}

ComplexMatrix matrix_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("matrix JSON parse failure: ") + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("re") || !j.contains("im"))
        throw validation_error("matrix JSON requires fields rows, cols, re, im");
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    if (rows < 1 || cols < 1)
        throw validation_error("matrix JSON: rows and cols must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    const std::size_t expected = static_cast<std::size_t>(rows) * cols;
    if (re.size() != expected || im.size() != expected)
        throw validation_error("matrix JSON: re/im length must equal rows*cols");
    ComplexMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const std::size_t idx = static_cast<std::size_t>(i) * cols + k;
            a(i, k) = Complex(re[idx], im[idx]);
        }
    require_finite(a, "matrix JSON");
    return a;
}

std::string matrix_to_json_text(const ComplexMatrix& a) {
    nlohmann::json j;
    j["rows"] = static_cast<int>(a.rows());
    j["cols"] = static_cast<int>(a.cols());
    std::vector<double> re, im;
    re.reserve(a.size());
    im.reserve(a.size());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            re.push_back(a(i, k).real());
            im.push_back(a(i, k).imag());
        }
    j["re"] = re;
    j["im"] = im;
    return j.dump();
}

ComplexMatrix matrix_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw validation_error("cannot open matrix file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return matrix_from_json_text(buf.str());
}

} // namespace ndbs
