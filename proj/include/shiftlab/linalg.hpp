#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace shiftlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Singular values in nonincreasing order.
std::vector<double> singular_values(const CMatrix& a);

/// Spectral norm.
double operator_norm(const CMatrix& a);

struct RankInfo {
    std::size_t rank = 0;
    double sigma_max = 0.0;
    double threshold = 0.0;   // tol * sigma_max
    /// sigma_rank / max(sigma_{rank+1}, threshold); +inf for the zero matrix.
    double gap = 0.0;
    std::vector<double> singular_values;
};

/// Numerical rank with relative threshold tol * sigma_max.
RankInfo numerical_rank(const CMatrix& a, double tol);

/// Orthonormal basis of the numerical right kernel of `a`: right singular
/// vectors whose singular value is <= tol * sigma_max.  When `min_dim` is
/// larger than the thresholded kernel, the `min_dim` smallest right singular
/// vectors are returned instead.
CMatrix right_kernel(const CMatrix& a, double tol, std::size_t min_dim = 0);

/// ||P_U - P_V|| for subspaces given by orthonormal columns.
///
/// Equal dimensions use ||(1 - P_U) V|| (sine of the largest principal
/// angle), which stays accurate for nearly equal subspaces.
double projection_distance(const CMatrix& u, const CMatrix& v);

/// Smallest singular value of `b` after scaling every column to unit norm.
double normalized_min_singular_value(const CMatrix& b);

/// Zero-pad or truncate rows so that `v` has `rows` rows.
CMatrix resize_rows(const CMatrix& v, Eigen::Index rows);

}  // namespace shiftlab

namespace shiftlab {

/// Least-squares slope of log(y) against log(x).  NaN with fewer than two
/// usable points (y must be > 0).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace shiftlab
