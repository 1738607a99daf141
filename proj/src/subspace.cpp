#include "shiftlab/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

constexpr double kIndependenceFloor = 1e-10;

struct MgsOutcome {
    CMatrix q;
    std::optional<std::size_t> dependent_column;
    double dependent_residual = 0.0;
};

// Modified Gram-Schmidt, two passes per column.  A column whose residual
// falls below kIndependenceFloor relative to its own norm is dependent.
MgsOutcome modified_gram_schmidt(const CMatrix& b) {
    MgsOutcome out;
    out.q = CMatrix::Zero(b.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        CVector v = b.col(j);
        const double original = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < j; ++i) v -= out.q.col(i) * out.q.col(i).dot(v);
        const double residual = v.norm();
        if (original == 0.0 || residual <= kIndependenceFloor * original) {
            out.dependent_column = static_cast<std::size_t>(j);
            out.dependent_residual = original == 0.0 ? 0.0 : residual / original;
            return out;
        }
        out.q.col(j) = v / residual;
    }
    return out;
}

}  // namespace

SubspaceBasis::SubspaceBasis(CMatrix vectors, bool orthonormal, Unchecked)
    : vectors_(std::move(vectors)), orthonormal_(orthonormal) {}

SubspaceBasis::SubspaceBasis(CMatrix vectors, bool orthonormal)
    : vectors_(std::move(vectors)), orthonormal_(orthonormal) {
    if (vectors_.cols() > vectors_.rows())
        throw RankDeficient(static_cast<std::size_t>(vectors_.rows()), 0.0);
    const double smin = normalized_min_singular_value(vectors_);
    if (smin < kIndependenceFloor) {
        const auto mgs = modified_gram_schmidt(vectors_);
        throw RankDeficient(mgs.dependent_column.value_or(static_cast<std::size_t>(vectors_.cols() - 1)),
                            smin);
    }
}

SubspaceBasis SubspaceBasis::whole_space(Eigen::Index n) {
    return make_orthonormal_basis(CMatrix::Identity(n, n));
}

SubspaceBasis make_orthonormal_basis(CMatrix q) {
    return SubspaceBasis(std::move(q), true, SubspaceBasis::Unchecked{});
}

Projection Projection::onto(const SubspaceBasis& basis) {
    if (!basis.orthonormal()) return gram_schmidt_projection(basis).projection;
    const CMatrix& q = basis.vectors();
    return Projection(q * q.adjoint(), static_cast<std::size_t>(q.cols()));
}

double Projection::idempotency_defect() const { return operator_norm(matrix_ * matrix_ - matrix_); }

double Projection::hermitian_defect() const { return operator_norm(matrix_ - matrix_.adjoint()); }

double Projection::trace_defect() const {
    return std::abs(matrix_.trace() - Complex(static_cast<double>(rank_)));
}

OrthonormalizedSubspace gram_schmidt_projection(const SubspaceBasis& b) {
    auto mgs = modified_gram_schmidt(b.vectors());
    if (mgs.dependent_column) throw RankDeficient(*mgs.dependent_column, mgs.dependent_residual);
    auto basis = make_orthonormal_basis(std::move(mgs.q));
    auto projection = Projection::onto(basis);
    return {std::move(basis), std::move(projection)};
}

InvarianceCheck is_invariant(const OperatorWindow& t, const Projection& p, double tol) {
    const CMatrix& pm = p.matrix();
    if (pm.rows() != t.cols()) throw InvalidArgument("projection does not act on the window's domain");
    const Eigen::Index r = t.rows();
    const Eigen::Index c = t.cols();
    const Eigen::Index big = std::max(r, c);

    CMatrix p_out = CMatrix::Zero(big, big);
    p_out.topLeftCorner(c, c) = pm;
    if (r > c) p_out.bottomRightCorner(r - c, r - c).setIdentity();
    const CMatrix image = resize_rows(t.entries() * pm, big);

    InvarianceCheck check;
    check.defect = operator_norm(image - p_out * image);
    check.invariant = check.defect <= tol;
    return check;
}

RelIndexResult rel_index(const OperatorWindow& t, const SubspaceBasis& m_in, const SubspaceBasis& m_out,
                         double tol) {
    if (m_in.ambient_dim() != t.cols() || m_out.ambient_dim() != t.rows())
        throw InvalidArgument("subspace ambient dimensions do not match the window");
    const CMatrix q_in = m_in.orthonormal() ? m_in.vectors() : gram_schmidt_projection(m_in).basis.vectors();
    const CMatrix q_out =
        m_out.orthonormal() ? m_out.vectors() : gram_schmidt_projection(m_out).basis.vectors();

    const CMatrix image = t.entries() * q_in;
    RelIndexResult res;
    const double scale = std::max(1.0, operator_norm(image));
    res.defect = operator_norm(image - q_out * (q_out.adjoint() * image)) / scale;
    if (res.defect > tol) throw InvarianceViolation(res.defect);

    const auto rank = numerical_rank(image, tol);
    res.dim_out = static_cast<std::size_t>(q_out.cols());
    res.image_rank = rank.rank;
    res.gap = rank.gap;
    res.index = static_cast<int>(res.dim_out) - static_cast<int>(res.image_rank);
    return res;
}

Polynomial::Polynomial(std::vector<Complex> coefficients) : coefficients_(std::move(coefficients)) {
    while (coefficients_.size() > 1 && coefficients_.back() == Complex(0.0)) coefficients_.pop_back();
    if (coefficients_.empty()) coefficients_.push_back(0.0);
}

Polynomial Polynomial::from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

Complex Polynomial::operator()(Complex z) const {
    Complex acc = coefficients_.back();
    for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

CMatrix Polynomial::operator()(const CMatrix& a) const {
    const Eigen::Index n = a.rows();
    CMatrix acc = coefficients_.back() * CMatrix::Identity(n, n);
    for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
        acc = acc * a;
        acc.diagonal().array() += *it;
    }
    return acc;
}

KernelResult kernel_of_polynomial(const OperatorWindow& a, const Polynomial& p, double tol,
                                  std::size_t min_dim) {
    if (!a.square()) throw InvalidArgument("kernel_of_polynomial needs a square window");
    if (p.degree() < 1) throw InvalidArgument("polynomial must have degree >= 1");
    const CMatrix pa = p(a.entries());
    CMatrix kernel = right_kernel(pa, tol, min_dim);
    auto basis = make_orthonormal_basis(std::move(kernel));
    auto projection = Projection::onto(basis);
    return {std::move(basis), std::move(projection), singular_values(pa)};
}

KrylovResult krylov_span(const OperatorWindow& a, const CVector& v, std::size_t m, double tol) {
    if (!a.square()) throw InvalidArgument("krylov_span needs a square window");
    if (m == 0) throw InvalidArgument("Krylov length must be >= 1");
    if (v.size() != a.cols()) throw InvalidArgument("vector does not match the window");
    const double vnorm = v.norm();
    if (vnorm == 0.0) throw InvalidArgument("Krylov start vector is zero");

    std::vector<CVector> q{v / vnorm};
    while (q.size() < m) {
        CVector w = a.entries() * q.back();
        const double raw = w.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qi : q) w -= qi * qi.dot(w);
        const double residual = w.norm();
        if (raw == 0.0 || residual <= tol * raw) break;
        q.push_back(w / residual);
    }
    CMatrix basis(v.size(), static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = q[i];
    KrylovResult res{make_orthonormal_basis(std::move(basis)), m, q.size()};
    return res;
}

std::vector<std::pair<Complex, std::size_t>> group_roots(const std::vector<Complex>& roots) {
    std::vector<std::pair<Complex, std::size_t>> groups;
    for (const Complex& r : roots) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r; });
        if (it == groups.end())
            groups.emplace_back(r, 1);
        else
            ++it->second;
    }
    return groups;
}

ReconstructionResult kernel_krylov_reconstruct(const WeightSequence& w, const std::vector<Complex>& roots,
                                           const OperatorWindow& a, std::optional<CVector> cyclic,
                                           double tol) {
    if (!a.square()) throw InvalidArgument("reconstruction needs a square window");
    if (roots.empty()) throw InvalidArgument("minimal polynomial must have degree >= 1");
    const auto n = static_cast<std::size_t>(a.rows());
    const double r_point = radius_estimates(w, std::max<std::size_t>(n, 64)).r_point;

    const auto groups = group_roots(roots);
    CMatrix chains(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(roots.size()));
    Eigen::Index col = 0;
    for (const auto& [lambda, mult] : groups) {
        if (std::abs(lambda) > 0.9 * r_point)
            throw InvalidArgument("root outside 0.9 * r_point disc");
        if (mult > 3) throw InvalidArgument("root multiplicity above 3");
        const auto chain = jordan_chain(w, lambda, mult, n);
        for (const auto& f : chain.vectors) chains.col(col++) = f;
    }
    auto reference = gram_schmidt_projection(SubspaceBasis(chains)).basis;

    CVector e = cyclic.value_or(chains.rowwise().sum());
    if (e.size() != static_cast<Eigen::Index>(n)) throw InvalidArgument("cyclic vector has wrong size");
    e /= e.norm();

    const auto p = Polynomial::from_roots(roots);
    const auto kernel = kernel_of_polynomial(a, p, tol, p.degree());
    const CMatrix& qk = kernel.basis.vectors();
    const CVector start = qk * (qk.adjoint() * e);
    if (start.norm() == 0.0) throw CyclicityFailure(0, p.degree());
    auto krylov = krylov_span(a, start, p.degree());
    if (krylov.dimension < p.degree()) throw CyclicityFailure(krylov.dimension, p.degree());

    ReconstructionResult res{std::move(reference), std::move(krylov.basis), 0.0, krylov.dimension,
                             kernel.singular_values};
    res.distance = projection_distance(res.reference.vectors(), res.rebuilt.vectors());
    return res;
}

SubspaceBasis vanishing_polynomial_basis(const std::vector<Complex>& zeros, Eigen::Index dim) {
    const auto q = Polynomial::from_roots(zeros).coefficients();
    const auto m = static_cast<Eigen::Index>(zeros.size());
    if (dim <= m) throw InvalidArgument("window too small for the zero set");
    CMatrix b = CMatrix::Zero(dim, dim - m);
    for (Eigen::Index j = 0; j < dim - m; ++j)
        for (Eigen::Index i = 0; i <= m; ++i) b(i + j, j) = q[static_cast<std::size_t>(i)];
    return SubspaceBasis(std::move(b));
}

SubspaceBasis zero_based_subspace(const std::vector<double>& alpha, const std::vector<Complex>& zeros,
                                  Eigen::Index dim) {
    const auto m = static_cast<Eigen::Index>(zeros.size());
    if (dim <= m) throw InvalidArgument("window too small for the zero set");
    if (static_cast<Eigen::Index>(alpha.size()) < dim - 1)
        throw InvalidArgument("not enough shift weights for the window");
    if (m == 0) return SubspaceBasis::whole_space(dim);

    // columns conj(lambda^j / pi_j): x is orthogonal to them iff the function
    // sum_j x_j z^j / pi_j vanishes at every lambda
    CMatrix v(dim, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Complex lambda = zeros[static_cast<std::size_t>(k)];
        Complex value = 1.0;
        for (Eigen::Index j = 0; j < dim; ++j) {
            v(j, k) = std::conj(value);
            if (j + 1 < dim) value = value * lambda / alpha[static_cast<std::size_t>(j)];
        }
    }
    SubspaceBasis check(v);  // rejects coincident zeros
    Eigen::HouseholderQR<CMatrix> qr(v);
    const CMatrix full = qr.householderQ() * CMatrix::Identity(dim, dim);
    return make_orthonormal_basis(full.rightCols(dim - m));
}

SubspaceBasis zero_based_subspace(const WeightSequence& w, const std::vector<Complex>& zeros,
                                  Eigen::Index dim) {
    std::vector<double> alpha(static_cast<std::size_t>(std::max<Eigen::Index>(dim - 1, 0)));
    for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = alpha_at(w, j);
    return zero_based_subspace(alpha, zeros, dim);
}

std::vector<double> perturbed_basis_distances(const SubspaceBasis& b, const std::vector<double>& deltas,
                                              Rng& rng) {
    const auto reference = gram_schmidt_projection(b).basis;
    CMatrix direction(b.ambient_dim(), b.dim());
    for (Eigen::Index j = 0; j < direction.cols(); ++j) {
        for (Eigen::Index i = 0; i < direction.rows(); ++i) direction(i, j) = rng.complex_gaussian();
        direction.col(j) /= direction.col(j).norm();
    }
    std::vector<double> out;
    for (double delta : deltas) {
        const auto moved = gram_schmidt_projection(SubspaceBasis(b.vectors() + delta * direction)).basis;
        out.push_back(projection_distance(reference.vectors(), moved.vectors()));
    }
    return out;
}

}  // namespace shiftlab
