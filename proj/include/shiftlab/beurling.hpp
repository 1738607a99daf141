#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shiftlab/linalg.hpp"
#include "shiftlab/random.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

/// Finitely supported power series f(z) = sum f^(n) z^n.  Trailing zeros are
/// trimmed; the zero series has degree -1.
class CoefficientSeries {
public:
    CoefficientSeries() = default;
    explicit CoefficientSeries(std::vector<Complex> coeffs);
    CoefficientSeries(std::initializer_list<Complex> coeffs);

    static CoefficientSeries monomial(std::size_t n, Complex c = 1.0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
    /// Coefficient n, zero past the degree.
    Complex operator[](std::size_t n) const noexcept { return n < coeffs_.size() ? coeffs_[n] : Complex(0.0); }
    Complex evaluate(Complex z) const;

private:
    std::vector<Complex> coeffs_;
};

CoefficientSeries operator+(const CoefficientSeries& f, const CoefficientSeries& g);
CoefficientSeries operator-(const CoefficientSeries& f, const CoefficientSeries& g);
CoefficientSeries operator*(Complex c, const CoefficientSeries& f);

/// sqrt(sum |f^(n)|^2 omega_s(n)^2), omega_s(n) = omega(n) (1+n)^-s.
double beurling_norm(const CoefficientSeries& f, const WeightSequence& w, double s = 0.0);

/// Cauchy product.
CoefficientSeries multiply(const CoefficientSeries& f, const CoefficientSeries& g);

/// Coefficients (n+1) f^(n+1).
CoefficientSeries derivative(const CoefficientSeries& f);

/// Uniform random coefficients on the complex square [-1,1]^2, degree exactly d.
CoefficientSeries random_series(std::size_t degree, Rng& rng);

struct AlgebraConstant {
    double constant = 0.0;               // max over n <= N of the kernel sum
    std::vector<double> sums;            // kernel sum at every n
    std::vector<double> running_max;
    std::size_t argmax = 0;
    bool unbounded_trend = false;        // running max grew > 5% from N/2 to N
};

/// max_{n<=N} sum_{k<=n} (omega(n) / (omega(k) omega(n-k)))^2.
AlgebraConstant algebra_constant(const WeightSequence& w, std::size_t n_max);

/// Same with the kernel (n+1)^2 / ((k+1)^2 (n-k+1)^2).
AlgebraConstant algebra_constant_specialized(std::size_t n_max);

/// ||p f1 f2|| / (||p f1|| ||p f2||).
double check_wa(const CoefficientSeries& p, const CoefficientSeries& f1, const CoefficientSeries& f2,
                const WeightSequence& w);

/// Seeded sweep over degree bands {0}, {1}, {2}, [3, 4], [5, 8], ... up to
/// max_degree, with per_band samples in each band.  Band streams do not
/// depend on max_degree, so the sweep for 2d contains the sweep for d.
struct BatchResult {
    double min = 0.0;
    double max = 0.0;
    std::size_t samples = 0;
    std::vector<std::size_t> band_top;  // largest degree of each band
    std::vector<double> running_min;    // over all bands so far
    std::vector<double> running_max;
    std::string warning;  // empty when the weight hypothesis held
};

/// Ratio extremes over random pairs (f1, f2).
BatchResult check_wa_batch(const CoefficientSeries& p, const WeightSequence& w, std::size_t per_band,
                           std::size_t max_degree, std::uint64_t seed);

/// f with (z-1) f = g - g(1), by backward sums f^(k) = sum_{n>k} g^(n).
CoefficientSeries divide_by_z_minus_1(const CoefficientSeries& g);

/// ||(z-1) f||_omega / ||f||_{omega_1}.
double check_wc(const CoefficientSeries& f, const WeightSequence& w);

/// Ratio extremes over random f.  A warning is attached
/// when omega_2 is not increasing on the tail up to max(4 max_degree, 256).
BatchResult check_wc_batch(const WeightSequence& w, std::size_t per_band, std::size_t max_degree,
                           std::uint64_t seed);

struct DerivativeProbe {
    double norm;        // ||f||_omega
    double derivative;  // |f(0)| + ||f'||_{omega_1}
    double ratio() const noexcept { return norm / derivative; }
};

DerivativeProbe derivative_equivalence_probe(const CoefficientSeries& f, const WeightSequence& w);

/// Min and max of the probe ratio over random f.
BatchResult derivative_equivalence_batch(const WeightSequence& w, std::size_t per_band, std::size_t max_degree,
                                         std::uint64_t seed);

}  // namespace shiftlab
