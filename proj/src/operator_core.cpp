#include "shiftlab/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shiftlab/errors.hpp"

namespace shiftlab {

std::string to_string(WindowTag tag) {
    switch (tag) {
        case WindowTag::shift: return "shift";
        case WindowTag::adjoint: return "adjoint";
        case WindowTag::polynomial_in_adjoint: return "polynomial_in_adjoint";
        case WindowTag::perturbed: return "perturbed";
        case WindowTag::custom: return "custom";
    }
    return "custom";
}

OperatorWindow shift_window(const WeightSequence& w, std::size_t n) {
    if (n == 0) throw InvalidArgument("window dimension must be >= 1");
    const auto cols = static_cast<Eigen::Index>(n);
    CMatrix m = CMatrix::Zero(cols + 1, cols);
    for (Eigen::Index j = 0; j < cols; ++j) m(j + 1, j) = alpha_at(w, static_cast<std::size_t>(j));
    return {std::move(m), WindowTag::shift};
}

OperatorWindow adjoint_window(const WeightSequence& w, std::size_t n) {
    if (n == 0) throw InvalidArgument("window dimension must be >= 1");
    const auto rows = static_cast<Eigen::Index>(n);
    CMatrix m = CMatrix::Zero(rows, rows + 1);
    for (Eigen::Index i = 0; i < rows; ++i) m(i, i + 1) = alpha_at(w, static_cast<std::size_t>(i));
    return {std::move(m), WindowTag::adjoint};
}

OperatorWindow compressed_adjoint(const WeightSequence& w, std::size_t n) {
    const auto full = adjoint_window(w, n);
    const auto dim = static_cast<Eigen::Index>(n);
    return {full.entries().leftCols(dim), WindowTag::adjoint};
}

OperatorWindow direct_sum(const OperatorWindow& a, const OperatorWindow& b) {
    CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a.entries();
    m.bottomRightCorner(b.rows(), b.cols()) = b.entries();
    const auto tag = a.tag() == b.tag() ? a.tag() : WindowTag::custom;
    return {std::move(m), tag};
}

namespace {

double point_radius(const WeightSequence& w, std::size_t n) {
    return radius_estimates(w, std::max<std::size_t>(n, 64)).r_point;
}

// ||(T* - lambda) f - prev|| using coordinates 0..N-2, where T* reads f_{n+1}.
double link_residual(const WeightSequence& w, Complex lambda, const CVector& f, const CVector* prev) {
    const Eigen::Index len = f.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < len; ++i) {
        Complex r = alpha_at(w, static_cast<std::size_t>(i)) * f(i + 1) - lambda * f(i);
        if (prev) r -= (*prev)(i);
        sum += std::norm(r);
    }
    return std::sqrt(sum);
}

}  // namespace

JordanChain jordan_chain(const WeightSequence& w, Complex lambda, std::size_t m, std::size_t n) {
    if (m == 0) throw InvalidArgument("chain length must be >= 1");
    if (n < m + 2 && m > 1) throw InvalidArgument("window must satisfy N >= m + 2");
    if (n == 0) throw InvalidArgument("window dimension must be >= 1");

    const auto len = static_cast<Eigen::Index>(n);
    std::vector<double> alpha(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = alpha_at(w, i);

    JordanChain chain;
    chain.lambda = lambda;
    chain.r_point = point_radius(w, n);

    CVector f1 = CVector::Zero(len);
    f1(0) = 1.0;
    for (Eigen::Index i = 0; i + 1 < len; ++i) f1(i + 1) = lambda * f1(i) / alpha[i];
    chain.vectors.push_back(std::move(f1));

    // (T* - lambda) f_{k+1} = f_k, first k coordinates of f_{k+1} zero:
    // alpha_i x_{i+1} = f_k(i) + lambda x_i
    for (std::size_t k = 1; k < m; ++k) {
        const CVector& prev = chain.vectors.back();
        CVector next = CVector::Zero(len);
        for (Eigen::Index i = static_cast<Eigen::Index>(k) - 1; i + 1 < len; ++i)
            next(i + 1) = (prev(i) + lambda * next(i)) / alpha[i];
        chain.vectors.push_back(std::move(next));
    }

    for (std::size_t k = 0; k < m; ++k)
        chain.residuals.push_back(
            link_residual(w, lambda, chain.vectors[k], k == 0 ? nullptr : &chain.vectors[k - 1]));

    // geometric majorization of the remaining coordinates of f_m
    const double q = std::norm(lambda) / (chain.r_point * chain.r_point);
    const double growth =
        std::pow(static_cast<double>(n) / static_cast<double>(n - 1), 2.0 * static_cast<double>(m - 1));
    const double ratio = n > 1 ? q * growth : q;
    const double last = std::norm(chain.vectors.back()(len - 1));
    if (std::abs(lambda) >= chain.r_point || ratio >= 1.0) {
        chain.in_l2 = false;
        chain.tail_bound = std::numeric_limits<double>::infinity();
        chain.warning = "|lambda| >= r_point: chain not certified in l2";
    } else {
        chain.tail_bound = last * ratio / (1.0 - ratio);
    }
    return chain;
}

JordanChain eigenvector_f1(const WeightSequence& w, Complex lambda, std::size_t n) {
    return jordan_chain(w, lambda, 1, n);
}

double chain_continuity_probe(const WeightSequence& w, std::size_t k, double radius,
                              std::size_t steps, std::size_t n) {
    if (k == 0 || steps < 2) throw InvalidArgument("continuity probe needs k >= 1 and steps >= 2");
    if (radius < 0.0) throw InvalidArgument("radius must be nonnegative");
    if (radius >= 0.98 * point_radius(w, n))
        throw InvalidArgument("radius too close to r_point: tail bounds blow up");
    if (radius == 0.0) return 0.0;

    std::vector<CVector> grid;
    grid.reserve(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(steps);
        grid.push_back(jordan_chain(w, std::polar(radius, theta), k, n).vectors.back());
    }
    double modulus = 0.0;
    for (std::size_t j = 0; j < steps; ++j)
        modulus = std::max(modulus, (grid[j] - grid[(j + 1) % steps]).norm());
    return modulus;
}

}  // namespace shiftlab
