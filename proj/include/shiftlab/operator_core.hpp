#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shiftlab/linalg.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

enum class WindowTag { shift, adjoint, polynomial_in_adjoint, perturbed, custom };

std::string to_string(WindowTag tag);

/// A finite window of an operator: an exact linear map from coordinates
/// 0..cols-1 to coordinates 0..rows-1.  Immutable once built.
class OperatorWindow {
public:
    OperatorWindow(CMatrix entries, WindowTag tag) : entries_(std::move(entries)), tag_(tag) {}

    const CMatrix& entries() const noexcept { return entries_; }
    WindowTag tag() const noexcept { return tag_; }
    Eigen::Index rows() const noexcept { return entries_.rows(); }
    Eigen::Index cols() const noexcept { return entries_.cols(); }
    bool square() const noexcept { return rows() == cols(); }

private:
    CMatrix entries_;
    WindowTag tag_;
};

/// (N+1) x N window of the shift: subdiagonal alpha_0..alpha_{N-1}.
OperatorWindow shift_window(const WeightSequence& w, std::size_t n);

/// N x (N+1) window of the adjoint: superdiagonal alpha_0..alpha_{N-1}.
OperatorWindow adjoint_window(const WeightSequence& w, std::size_t n);

/// N x N compression of the adjoint (leading block of adjoint_window).
OperatorWindow compressed_adjoint(const WeightSequence& w, std::size_t n);

/// Block-diagonal direct sum of two windows.
OperatorWindow direct_sum(const OperatorWindow& a, const OperatorWindow& b);

/// Vectors f_1..f_m with (T* - lambda) f_{k+1} = f_k and (T* - lambda) f_1 = 0,
/// each truncated to coordinates 0..N-1.
struct JordanChain {
    Complex lambda;
    std::vector<CVector> vectors;
    /// residuals[k] = ||(T* - lambda) f_{k+1} - f_k|| on the window (f_0 = 0).
    std::vector<double> residuals;
    /// Estimated squared l2 mass of the last vector beyond the window.
    double tail_bound = 0.0;
    bool in_l2 = true;
    double r_point = 0.0;
    std::string warning;
};

/// Eigenvector of T*: beta_0 = 1, beta_n = lambda^n / pi_n.
JordanChain eigenvector_f1(const WeightSequence& w, Complex lambda, std::size_t n);

/// Jordan chain of length m; f_k has k-1 leading zeros and a positive
/// leading coordinate.
JordanChain jordan_chain(const WeightSequence& w, Complex lambda, std::size_t m, std::size_t n);

/// max ||f_{lambda,k} - f_{lambda',k}|| over adjacent points of a uniform
/// grid of `steps` points on the circle of radius r.
double chain_continuity_probe(const WeightSequence& w, std::size_t k, double radius,
                              std::size_t steps, std::size_t n = 200);

}  // namespace shiftlab
