#include "shiftlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftlab {

std::vector<double> singular_values(const CMatrix& a) {
    if (a.size() == 0) return {};
    Eigen::BDCSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

double operator_norm(const CMatrix& a) {
    const auto s = singular_values(a);
    return s.empty() ? 0.0 : s.front();
}

RankInfo numerical_rank(const CMatrix& a, double tol) {
    RankInfo info;
    info.singular_values = singular_values(a);
    const auto& s = info.singular_values;
    info.sigma_max = s.empty() ? 0.0 : s.front();
    info.threshold = tol * info.sigma_max;
    if (info.sigma_max == 0.0) {
        info.gap = std::numeric_limits<double>::infinity();
        return info;
    }
    info.rank = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [&](double x) { return x > info.threshold; }));
    const double below = info.rank < s.size() ? std::max(s[info.rank], info.threshold) : info.threshold;
    info.gap = s[info.rank - 1] / below;
    return info;
}

CMatrix right_kernel(const CMatrix& a, double tol, std::size_t min_dim) {
    const Eigen::Index n = a.cols();
    if (n == 0) return CMatrix(0, 0);
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double threshold = tol * (s.size() > 0 ? s(0) : 0.0);

    // singular values beyond min(rows, cols) are exactly zero
    Eigen::Index kept = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++kept;
    Eigen::Index kernel_dim = n - kept;
    kernel_dim = std::max<Eigen::Index>(kernel_dim, static_cast<Eigen::Index>(min_dim));
    kernel_dim = std::min(kernel_dim, n);
    return svd.matrixV().rightCols(kernel_dim);
}

double projection_distance(const CMatrix& u, const CMatrix& v) {
    if (u.cols() != v.cols()) return 1.0;
    if (u.cols() == 0) return 0.0;
    const CMatrix residual = v - u * (u.adjoint() * v);
    return std::min(1.0, operator_norm(residual));
}

double normalized_min_singular_value(const CMatrix& b) {
    if (b.cols() == 0) return std::numeric_limits<double>::infinity();
    CMatrix scaled = b;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double norm = scaled.col(j).norm();
        if (norm == 0.0) return 0.0;
        scaled.col(j) /= norm;
    }
    const auto s = singular_values(scaled);
    return s.size() < static_cast<std::size_t>(b.cols()) ? 0.0 : s.back();
}

CMatrix resize_rows(const CMatrix& v, Eigen::Index rows) {
    CMatrix out = CMatrix::Zero(rows, v.cols());
    const Eigen::Index common = std::min(rows, v.rows());
    out.topRows(common) = v.topRows(common);
    return out;
}

}  // namespace shiftlab

namespace shiftlab {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace shiftlab
