#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shiftlab/beurling.hpp"
#include "shiftlab/errors.hpp"

using namespace shiftlab;

namespace {

const WeightSequence& linear_weight() {
    static const auto w = WeightSequence::polynomial(1.0, 1 << 16);
    return w;
}

double max_coeff_error(const CoefficientSeries& a, const CoefficientSeries& b) {
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

// Partial fractions: (n+1)/((k+1)(n-k+1)) = (n+1)/(n+2) (1/(k+1) + 1/(n-k+1)).
double kernel_sum_oracle(std::size_t n) {
    double h = 0.0, h2 = 0.0;
    for (std::size_t j = 1; j <= n + 1; ++j) {
        h += 1.0 / static_cast<double>(j);
        h2 += 1.0 / (static_cast<double>(j) * static_cast<double>(j));
    }
    const double a = static_cast<double>(n + 1) / static_cast<double>(n + 2);
    return a * a * (2.0 * h2 + 4.0 * h / static_cast<double>(n + 2));
}

}  // namespace

TEST_CASE("series normalization and degree") {
    CHECK(CoefficientSeries{}.degree() == -1);
    CHECK(CoefficientSeries{Complex(0.0), Complex(0.0)}.degree() == -1);
    CHECK(CoefficientSeries{Complex(1.0), Complex(2.0), Complex(0.0)}.degree() == 1);
    CHECK(CoefficientSeries::monomial(3).degree() == 3);
    CHECK(CoefficientSeries{Complex(-2.0), Complex(1.0), Complex(1.0)}.evaluate(1.0) == Complex(0.0));
}

TEST_CASE("beurling norm examples") {
    const auto w = WeightSequence::quasianalytic_sqrt();
    CHECK(beurling_norm(CoefficientSeries{Complex(1.0)}, w) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beurling_norm(CoefficientSeries::monomial(3), w) == doctest::Approx(std::exp(std::sqrt(3.0))).epsilon(1e-14));
    CHECK(beurling_norm(CoefficientSeries::monomial(3), w) == doctest::Approx(5.6522).epsilon(1e-4));
    CHECK(beurling_norm(CoefficientSeries{Complex(1.0), Complex(2.0)}, linear_weight()) ==
          doctest::Approx(std::sqrt(17.0)).epsilon(1e-15));
    CHECK(beurling_norm(CoefficientSeries{}, w) == 0.0);
    // omega_1 = omega / (n+1) is identically 1 for omega = n+1
    CHECK(beurling_norm(CoefficientSeries{Complex(3.0), Complex(0.0, 4.0)}, linear_weight(), 1.0) ==
          doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("multiply examples") {
    const CoefficientSeries f{Complex(1.0, 2.0), Complex(-3.0), Complex(0.5)};
    CHECK(max_coeff_error(multiply(f, CoefficientSeries{Complex(1.0)}), f) == 0.0);
    CHECK(max_coeff_error(multiply(CoefficientSeries{Complex(1.0), Complex(1.0)},
                                   CoefficientSeries{Complex(1.0), Complex(-1.0)}),
                          CoefficientSeries{Complex(1.0), Complex(0.0), Complex(-1.0)}) == 0.0);
    const auto prod = multiply(CoefficientSeries{Complex(-1.0), Complex(1.0)}, CoefficientSeries{Complex(2.0), Complex(1.0)});
    CHECK(max_coeff_error(prod, CoefficientSeries{Complex(-2.0), Complex(1.0), Complex(1.0)}) == 0.0);
    CHECK(prod.degree() == 2);
    CHECK(multiply(f, CoefficientSeries{}).degree() == -1);
}

TEST_CASE("multiply is commutative and associative") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_series(static_cast<std::size_t>(rng.uniform_int(0, 20)), rng);
        const auto b = random_series(static_cast<std::size_t>(rng.uniform_int(0, 20)), rng);
        const auto c = random_series(static_cast<std::size_t>(rng.uniform_int(0, 20)), rng);
        CHECK(max_coeff_error(multiply(a, b), multiply(b, a)) <= 1e-12);
        CHECK(max_coeff_error(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) <= 1e-12);
        CHECK(multiply(a, b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("specialized algebra constant") {
    const auto small = algebra_constant_specialized(2);
    CHECK(small.running_max[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(small.running_max[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(small.running_max[2] == doctest::Approx(2.5625).epsilon(1e-15));

    const std::size_t n = 10000;
    const auto big = algebra_constant_specialized(n);
    double oracle_max = 0.0;
    for (std::size_t k = 0; k <= n; k += 1) {
        const double s = kernel_sum_oracle(k);
        if (k % 997 == 0 || k < 64) CHECK(big.sums[k] == doctest::Approx(s).epsilon(1e-12));
        oracle_max = std::max(oracle_max, s);
    }
    CHECK(big.constant == doctest::Approx(oracle_max).epsilon(1e-12));
    CHECK_FALSE(big.unbounded_trend);
    // the sums approach 2 zeta(2) from above, slowly
    const double limit = std::numbers::pi * std::numbers::pi / 3.0;
    CHECK(big.sums[n] > limit);
    CHECK(big.sums[n] - limit < 4.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
    for (std::size_t k = 1; k <= n; ++k) CHECK(big.running_max[k] >= big.running_max[k - 1]);
}

TEST_CASE("general algebra constant") {
    const auto lin = algebra_constant(linear_weight(), 300);
    const auto spec = algebra_constant_specialized(300);
    for (std::size_t k = 0; k <= 300; ++k) CHECK(lin.sums[k] == doctest::Approx(spec.sums[k]).epsilon(1e-12));
    CHECK_FALSE(lin.unbounded_trend);

    const auto flat = algebra_constant(WeightSequence::unweighted(), 200);
    for (std::size_t k = 0; k <= 200; ++k) CHECK(flat.sums[k] == doctest::Approx(static_cast<double>(k + 1)));
    CHECK(flat.unbounded_trend);
    CHECK(flat.argmax == 200);
    CHECK_THROWS_AS(algebra_constant(WeightSequence::unweighted(), 0), InvalidArgument);
}

TEST_CASE("convolution is bounded by the algebra constant") {
    const auto c = algebra_constant(linear_weight(), 128).constant;
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        const auto f = random_series(static_cast<std::size_t>(rng.uniform_int(0, 64)), rng);
        const auto g = random_series(static_cast<std::size_t>(rng.uniform_int(0, 64)), rng);
        const double lhs = beurling_norm(multiply(f, g), linear_weight());
        const double rhs = beurling_norm(f, linear_weight()) * beurling_norm(g, linear_weight());
        CHECK(lhs <= c * rhs);
        CHECK(lhs <= std::sqrt(c) * rhs * (1.0 + 1e-12));
        CHECK(check_wa(CoefficientSeries{Complex(1.0)}, f, g, linear_weight()) <= c);
    }
}

TEST_CASE("check_wa examples") {
    const CoefficientSeries one{Complex(1.0)};
    const CoefficientSeries p{Complex(-1.0), Complex(1.0)};
    CHECK(check_wa(p, one, one, linear_weight()) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    // ||(z-1)^2|| / ||z-1||^2 with omega = (1, 2, 3)
    CHECK(check_wa(one, p, p, linear_weight()) == doctest::Approx(std::sqrt(26.0) / 5.0).epsilon(1e-15));
    CHECK_THROWS_AS(check_wa(p, CoefficientSeries{}, one, linear_weight()), InvalidArgument);

    const auto b32 = check_wa_batch(p, linear_weight(), 1000, 32, 3);
    const auto b64 = check_wa_batch(p, linear_weight(), 1000, 64, 3);
    CHECK(std::isfinite(b32.max));
    CHECK(b64.max <= 1.05 * b32.max);
    CHECK(b32.samples == 1000 * b32.band_top.size());
    REQUIRE(b64.band_top.size() == b32.band_top.size() + 1);
    for (std::size_t i = 0; i < b32.band_top.size(); ++i) CHECK(b64.running_max[i] == b32.running_max[i]);
    CHECK(b32.band_top.back() == 32);
    const auto again = check_wa_batch(p, linear_weight(), 1000, 32, 3);
    CHECK(again.max == b32.max);
    CHECK(again.min == b32.min);
}

TEST_CASE("division by z - 1") {
    const CoefficientSeries z_minus_1{Complex(-1.0), Complex(1.0)};
    const CoefficientSeries g{Complex(-2.0), Complex(1.0), Complex(1.0)};
    const auto f = divide_by_z_minus_1(g);
    CHECK(max_coeff_error(f, CoefficientSeries{Complex(2.0), Complex(1.0)}) == 0.0);
    CHECK(max_coeff_error(multiply(z_minus_1, f), g) == 0.0);
    CHECK(divide_by_z_minus_1(CoefficientSeries{Complex(1.0)}).is_zero());
    CHECK(divide_by_z_minus_1(CoefficientSeries{}).is_zero());
    const auto geo = divide_by_z_minus_1(CoefficientSeries::monomial(7));
    CHECK(geo.degree() == 6);
    for (std::size_t k = 0; k < 7; ++k) CHECK(geo[k] == Complex(1.0));

    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        std::vector<Complex> c(static_cast<std::size_t>(rng.uniform_int(0, 64)) + 1);
        for (auto& x : c) x = Complex(static_cast<double>(rng.uniform_int(-50, 50)), static_cast<double>(rng.uniform_int(-50, 50)));
        const CoefficientSeries h(c);
        const auto back = multiply(z_minus_1, divide_by_z_minus_1(h)) + CoefficientSeries{h.evaluate(1.0)};
        CHECK(max_coeff_error(back, h) == 0.0);
    }
}

TEST_CASE("check_wc examples") {
    const CoefficientSeries one{Complex(1.0)};
    CHECK(check_wc(one, linear_weight()) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(check_wc(one, WeightSequence::quasianalytic_sqrt()) ==
          doctest::Approx(std::sqrt(1.0 + std::exp(2.0))).epsilon(1e-14));
    CHECK_THROWS_AS(check_wc(CoefficientSeries{}, linear_weight()), InvalidArgument);

    const auto cubic = WeightSequence::polynomial(3.0, 1 << 12);
    const auto b32 = check_wc_batch(cubic, 1000, 32, 5);
    const auto b64 = check_wc_batch(cubic, 1000, 64, 5);
    CHECK(b32.warning.empty());
    CHECK(b32.min >= 1.0);
    CHECK(b64.min >= 0.95 * b32.min);
}

TEST_CASE("check_wc outside the hypothesis warns") {
    const auto flat = check_wc_batch(WeightSequence::unweighted(), 300, 64, 5);
    CHECK_FALSE(flat.warning.empty());
    // f^(n)/(n+1) is the Cesaro mean of -(z-1)f, so Hardy's inequality gives 1/2
    CHECK(flat.min >= 0.5);
    for (std::size_t d : {8u, 64u, 512u}) {
        const CoefficientSeries ones(std::vector<Complex>(d + 1, Complex(1.0)));
        CHECK(check_wc(ones, WeightSequence::unweighted()) >= 0.5);
    }
}

TEST_CASE("derivative equivalence probe") {
    const auto p1 = derivative_equivalence_probe(CoefficientSeries{Complex(1.0)}, linear_weight());
    CHECK(p1.norm == doctest::Approx(1.0));
    CHECK(p1.derivative == doctest::Approx(1.0));
    for (std::size_t n : {1u, 5u, 40u}) {
        const auto p = derivative_equivalence_probe(CoefficientSeries::monomial(n), linear_weight());
        CHECK(p.norm == doctest::Approx(static_cast<double>(n + 1)).epsilon(1e-14));
        CHECK(p.derivative == doctest::Approx(static_cast<double>(n)).epsilon(1e-14));
    }
    const auto f = CoefficientSeries{Complex(1.0), Complex(-2.0), Complex(0.5, 1.0)};
    const auto scaled = derivative_equivalence_probe(Complex(3.0) * f, linear_weight());
    const auto base = derivative_equivalence_probe(f, linear_weight());
    CHECK(scaled.ratio() == doctest::Approx(base.ratio()).epsilon(1e-14));

    const auto batch = derivative_equivalence_batch(linear_weight(), 500, 64, 9);
    CHECK(batch.min >= 0.1);
    CHECK(batch.max <= 10.0);
}
