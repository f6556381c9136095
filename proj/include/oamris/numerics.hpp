// SPDX-License-Identifier: Apache-2.0
//
// oamris - RIS-assisted multi-user OAM downlink simulation library
// Copyright (C) 2026 The oamris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

// Dense complex linear algebra used by every other module. All numerically
// delicate choices (rank thresholds, phase conventions, factorizations) live here.

namespace oamris
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

class NumericsError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Singular values below this fraction of the largest one are treated as zero.
inline constexpr double kRankTolerance = 1e-9;

struct SvdResult
{
    CMatrix u;               // rows(a) x rows(a), unitary
    RVector singular_values; // min(rows, cols), non-increasing
    CMatrix v;               // cols(a) x cols(a), unitary

    // Number of singular values above rel_tol * largest.
    Index numerical_rank(double rel_tol = kRankTolerance) const
    {
        if (singular_values.size() == 0 || singular_values(0) == 0.0)
            return 0;
        const double cut = rel_tol * singular_values(0);
        Index r = 0;
        while (r < singular_values.size() && singular_values(r) > cut)
            ++r;
        return r;
    }
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived> &a, std::string_view what)
{
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
        {
            const auto x = a(i, j);
            if (!std::isfinite(std::real(x)) || !std::isfinite(std::imag(x)))
                throw NumericsError(std::string(what) + ": non-finite entry at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
        }
}

// Argument in (-pi, pi]; arg(0) = 0.
inline double arg_or_zero(Complex z)
{
    if (z == Complex(0.0, 0.0))
        return 0.0;
    const double a = std::arg(z);
    return a <= -std::numbers::pi ? std::numbers::pi : a;
}

inline Complex unit_phasor(double angle) { return std::polar(1.0, angle); }

namespace detail
{
// Rotates a column so that its first non-negligible entry is real and positive.
// Returns the applied unit factor.
inline Complex phase_normalizer(const Eigen::Ref<const CVector> &col)
{
    const double n = col.norm();
    if (n == 0.0)
        return {1.0, 0.0};
    for (Index i = 0; i < col.size(); ++i)
        if (std::abs(col(i)) > 1e-10 * n)
            return std::conj(col(i)) / std::abs(col(i));
    return {1.0, 0.0};
}
} // namespace detail

// Full SVD a = U diag(s) V^H with singular values sorted descending. Columns of V
// carry a fixed phase convention (first non-negligible entry real positive), and
// paired columns of U are rotated by the same factor so the product is unchanged.
inline SvdResult svd_full(const CMatrix &a)
{
    if (a.rows() < 1 || a.cols() < 1)
        throw NumericsError("svd_full: empty matrix");
    require_finite(a, "svd_full");

    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

    const Index paired = out.singular_values.size();
    for (Index c = 0; c < out.v.cols(); ++c)
    {
        const Complex f = detail::phase_normalizer(out.v.col(c));
        out.v.col(c) *= f;
        if (c < paired)
            out.u.col(c) *= f;
    }
    return out;
}

// Solves J X = B for Hermitian positive-definite J via Cholesky.
inline CMatrix solve_hermitian(const CMatrix &j, const CMatrix &b)
{
    if (j.rows() != j.cols() || j.rows() != b.rows())
        throw NumericsError("solve_hermitian: dimension mismatch");
    require_finite(j, "solve_hermitian(j)");
    require_finite(b, "solve_hermitian(b)");
    const double scale = std::max(j.norm(), 1e-300);
    if ((j - j.adjoint()).norm() > 1e-8 * scale)
        throw NumericsError("solve_hermitian: matrix is not Hermitian");

    Eigen::LLT<CMatrix> llt(j);
    if (llt.info() != Eigen::Success)
        throw NumericsError("solve_hermitian: matrix is not positive definite (Cholesky breakdown)");
    for (Index i = 0; i < j.rows(); ++i)
        if (!(std::real(llt.matrixLLT()(i, i)) > 0.0))
            throw NumericsError("solve_hermitian: matrix is not positive definite (pivot " + std::to_string(i) + ")");
    return llt.solve(b);
}

// Non-zero eigenvalue of J^{-1} u v^H, i.e. v^H J^{-1} u.
inline Complex rank_one_eigenvalue(const CMatrix &j, const CVector &u, const CVector &v)
{
    if (u.size() != j.rows() || v.size() != j.rows())
        throw NumericsError("rank_one_eigenvalue: dimension mismatch");
    if (u.isZero(0.0) || v.isZero(0.0))
        return {0.0, 0.0};
    const CVector x = solve_hermitian(j, u);
    return v.dot(x); // conjugates v
}

// log2 det(A) for Hermitian positive-definite A.
inline double log2_det_hpd(const CMatrix &a)
{
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericsError("log2_det_hpd: matrix is not positive definite");
    double acc = 0.0;
    for (Index i = 0; i < a.rows(); ++i)
        acc += std::log(std::real(llt.matrixLLT()(i, i)));
    return 2.0 * acc / std::numbers::ln2;
}

// log2(1 + x) without cancellation for tiny x.
inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

} // namespace oamris
