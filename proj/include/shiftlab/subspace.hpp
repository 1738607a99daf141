#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "shiftlab/linalg.hpp"
#include "shiftlab/operator_core.hpp"
#include "shiftlab/random.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

/// Columns spanning a subspace of C^N.
class SubspaceBasis {
public:
    /// Validates linear independence (normalized smallest singular value
    /// >= 1e-10); throws RankDeficient otherwise.
    explicit SubspaceBasis(CMatrix vectors, bool orthonormal = false);

    static SubspaceBasis whole_space(Eigen::Index n);

    const CMatrix& vectors() const noexcept { return vectors_; }
    bool orthonormal() const noexcept { return orthonormal_; }
    Eigen::Index ambient_dim() const noexcept { return vectors_.rows(); }
    Eigen::Index dim() const noexcept { return vectors_.cols(); }

private:
    struct Unchecked {};
    SubspaceBasis(CMatrix vectors, bool orthonormal, Unchecked);
    friend SubspaceBasis make_orthonormal_basis(CMatrix q);

    CMatrix vectors_;
    bool orthonormal_;
};

/// Wraps columns already known to be orthonormal (no rank check).
SubspaceBasis make_orthonormal_basis(CMatrix q);

/// Orthogonal projection onto a subspace: P = sum q_i q_i^*.
class Projection {
public:
    static Projection onto(const SubspaceBasis& orthonormal);

    const CMatrix& matrix() const noexcept { return matrix_; }
    std::size_t rank() const noexcept { return rank_; }

    double idempotency_defect() const;   // ||P^2 - P||
    double hermitian_defect() const;     // ||P - P^*||
    double trace_defect() const;         // |tr P - rank|

private:
    Projection(CMatrix m, std::size_t rank) : matrix_(std::move(m)), rank_(rank) {}
    CMatrix matrix_;
    std::size_t rank_;
};

struct OrthonormalizedSubspace {
    SubspaceBasis basis;
    Projection projection;
};

/// Modified Gram-Schmidt with one reorthogonalization pass.
OrthonormalizedSubspace gram_schmidt_projection(const SubspaceBasis& b);

struct InvarianceCheck {
    bool invariant = false;
    double defect = 0.0;   // ||(1 - P_out) T P||
};

/// Tests (1 - P) T P = 0 on a window.  T maps C^C -> C^R and P acts on C^C.
/// When R > C the codomain projection is diag(P, I): coordinates past the
/// domain window count as inside the subspace, so tail subspaces of the
/// shift are not charged for the window edge.  When R < C, T's output is
/// padded with zero rows.
InvarianceCheck is_invariant(const OperatorWindow& t, const Projection& p, double tol);

struct RelIndexResult {
    int index = 0;
    std::size_t dim_out = 0;
    std::size_t image_rank = 0;
    double gap = 0.0;      // singular-value gap of the rank decision
    double defect = 0.0;   // ||(1 - P_out) T Q_in|| / max(1, ||T Q_in||)
};

/// Finite surrogate of ind(T, P) = dim M (-) clos TM:
/// dim(M_out) - rank_tol(T * basis(M_in)).
RelIndexResult rel_index(const OperatorWindow& t, const SubspaceBasis& m_in,
                         const SubspaceBasis& m_out, double tol = 1e-8);

/// Polynomial with complex coefficients c_0 + c_1 z + ... + c_d z^d.
class Polynomial {
public:
    explicit Polynomial(std::vector<Complex> coefficients);
    static Polynomial from_roots(const std::vector<Complex>& roots);

    const std::vector<Complex>& coefficients() const noexcept { return coefficients_; }
    std::size_t degree() const noexcept { return coefficients_.size() - 1; }
    Complex operator()(Complex z) const;
    /// Horner evaluation on a square matrix.
    CMatrix operator()(const CMatrix& a) const;

private:
    std::vector<Complex> coefficients_;
};

struct KernelResult {
    SubspaceBasis basis;
    Projection projection;
    std::vector<double> singular_values;   // of p(A), nonincreasing
};

/// Numerical kernel of p(A).  `min_dim` forces at least that many of the
/// smallest right singular vectors into the kernel.
KernelResult kernel_of_polynomial(const OperatorWindow& a, const Polynomial& p, double tol = 1e-8,
                                  std::size_t min_dim = 0);

struct KrylovResult {
    SubspaceBasis basis;       // orthonormal
    std::size_t requested = 0;
    std::size_t dimension = 0;
};

/// Orthonormalized {v, Av, ..., A^{m-1} v}; stops early when the next
/// direction is numerically dependent (relative tolerance `tol`).
KrylovResult krylov_span(const OperatorWindow& a, const CVector& v, std::size_t m, double tol = 1e-10);

/// Roots grouped with multiplicities, in first-appearance order.
std::vector<std::pair<Complex, std::size_t>> group_roots(const std::vector<Complex>& roots);

struct ReconstructionResult {
    SubspaceBasis reference;    // orthonormal basis of M (Jordan chains)
    SubspaceBasis rebuilt;      // orthonormal basis of M_k
    double distance = 0.0;      // ||P_{M_k} - P_M||
    std::size_t krylov_dim = 0;
    std::vector<double> kernel_singular_values;
};

/// Reference M = span of Jordan chains of T* at the roots of p (truncated to
/// A's dimension); M_k = Krylov span under A of Q_k e, Q_k the projection
/// onto Ker p(A).  `cyclic` defaults to the normalized sum of the chain
/// vectors.
ReconstructionResult kernel_krylov_reconstruct(const WeightSequence& w, const std::vector<Complex>& roots,
                                           const OperatorWindow& a,
                                           std::optional<CVector> cyclic = std::nullopt,
                                           double tol = 1e-8);

/// Polynomials of degree < dim vanishing on `zeros`: columns q z^j,
/// q = prod (z - lambda).  Unweighted coefficient space.
SubspaceBasis vanishing_polynomial_basis(const std::vector<Complex>& zeros, Eigen::Index dim);

/// {x in C^dim : sum_j x_j lambda^j / pi_j = 0 for lambda in zeros}, the
/// zero-based subspace of the weighted shift (orthonormal basis).
SubspaceBasis zero_based_subspace(const WeightSequence& w, const std::vector<Complex>& zeros,
                                  Eigen::Index dim);

/// Zero-based subspace for explicit shift weights alpha_0..alpha_{dim-2}.
SubspaceBasis zero_based_subspace(const std::vector<double>& alpha, const std::vector<Complex>& zeros,
                                  Eigen::Index dim);

/// ||P_delta - P|| where every basis vector is moved by delta * g_j / ||g_j||
/// with seeded Gaussian g_j, for each delta.
std::vector<double> perturbed_basis_distances(const SubspaceBasis& b, const std::vector<double>& deltas,
                                              Rng& rng);

}  // namespace shiftlab
