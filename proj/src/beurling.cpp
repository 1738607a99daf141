#include "shiftlab/beurling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shiftlab/errors.hpp"

namespace shiftlab {

CoefficientSeries::CoefficientSeries(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

CoefficientSeries::CoefficientSeries(std::initializer_list<Complex> coeffs)
    : CoefficientSeries(std::vector<Complex>(coeffs)) {}

CoefficientSeries CoefficientSeries::monomial(std::size_t n, Complex c) {
    std::vector<Complex> v(n + 1, Complex(0.0));
    v[n] = c;
    return CoefficientSeries(std::move(v));
}

Complex CoefficientSeries::evaluate(Complex z) const {
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

CoefficientSeries operator+(const CoefficientSeries& f, const CoefficientSeries& g) {
    const std::size_t n = std::max(f.coeffs().size(), g.coeffs().size());
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f[i] + g[i];
    return CoefficientSeries(std::move(v));
}

CoefficientSeries operator-(const CoefficientSeries& f, const CoefficientSeries& g) {
    return f + Complex(-1.0) * g;
}

CoefficientSeries operator*(Complex c, const CoefficientSeries& f) {
    std::vector<Complex> v = f.coeffs();
    for (auto& x : v) x *= c;
    return CoefficientSeries(std::move(v));
}

double beurling_norm(const CoefficientSeries& f, const WeightSequence& w, double s) {
    double acc = 0.0;
    for (std::size_t n = 0; n < f.coeffs().size(); ++n) {
        if (f[n] == Complex(0.0)) continue;
        const double ws = omega_s_at(w, s, n);
        acc += std::norm(f[n]) * ws * ws;
    }
    return std::sqrt(acc);
}

CoefficientSeries multiply(const CoefficientSeries& f, const CoefficientSeries& g) {
    if (f.is_zero() || g.is_zero()) return {};
    const auto& a = f.coeffs();
    const auto& b = g.coeffs();
    std::vector<Complex> c(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return CoefficientSeries(std::move(c));
}

CoefficientSeries derivative(const CoefficientSeries& f) {
    if (f.degree() < 1) return {};
    std::vector<Complex> v(f.coeffs().size() - 1);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = static_cast<double>(n + 1) * f[n + 1];
    return CoefficientSeries(std::move(v));
}

CoefficientSeries random_series(std::size_t degree, Rng& rng) {
    std::vector<Complex> v(degree + 1);
    for (auto& x : v) x = rng.uniform_square();
    while (v.back() == Complex(0.0)) v.back() = rng.uniform_square();
    return CoefficientSeries(std::move(v));
}

namespace {

template <class Kernel>
AlgebraConstant kernel_maxima(std::size_t n_max, Kernel kernel) {
    AlgebraConstant out;
    out.sums.resize(n_max + 1);
    out.running_max.resize(n_max + 1);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= n_max; ++n) {
        double s = 0.0;
        for (std::size_t k = 0; k <= n; ++k) s += kernel(n, k);
        out.sums[n] = s;
        if (s > best) {
            best = s;
            out.argmax = n;
        }
        out.running_max[n] = best;
    }
    out.constant = best;
    if (n_max >= 2) out.unbounded_trend = !(out.running_max[n_max] <= 1.05 * out.running_max[n_max / 2]);
    return out;
}

}  // namespace

AlgebraConstant algebra_constant(const WeightSequence& w, std::size_t n_max) {
    if (n_max < 1) throw InvalidArgument("algebra_constant needs N >= 1");
    std::vector<double> lw(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) lw[n] = log_omega_at(w, n);
    return kernel_maxima(n_max, [&](std::size_t n, std::size_t k) {
        return std::exp(2.0 * (lw[n] - lw[k] - lw[n - k]));
    });
}

AlgebraConstant algebra_constant_specialized(std::size_t n_max) {
    if (n_max < 1) throw InvalidArgument("algebra_constant needs N >= 1");
    return kernel_maxima(n_max, [](std::size_t n, std::size_t k) {
        const double r = static_cast<double>(n + 1) / (static_cast<double>(k + 1) * static_cast<double>(n - k + 1));
        return r * r;
    });
}

double check_wa(const CoefficientSeries& p, const CoefficientSeries& f1, const CoefficientSeries& f2,
                const WeightSequence& w) {
    const auto pf1 = multiply(p, f1);
    const auto pf2 = multiply(p, f2);
    const double d = beurling_norm(pf1, w) * beurling_norm(pf2, w);
    if (!(d > 0.0)) throw InvalidArgument("check_wa needs p f1 and p f2 nonzero");
    return beurling_norm(multiply(pf1, f2), w) / d;
}

namespace {

std::size_t random_degree(std::size_t lo, std::size_t hi, Rng& rng) {
    return static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

template <class Sample>
BatchResult band_sweep(std::size_t per_band, std::size_t max_degree, std::uint64_t seed, Sample sample) {
    if (per_band == 0) throw InvalidArgument("batch needs at least one sample per band");
    const Rng root(seed);
    BatchResult out;
    out.min = std::numeric_limits<double>::infinity();
    out.max = -std::numeric_limits<double>::infinity();
    std::size_t lo = 0, hi = 0;
    for (std::size_t band = 0;; ++band) {
        const Rng band_root = root.split(band);
        for (std::size_t i = 0; i < per_band; ++i) {
            Rng rng = band_root.split(i);
            const double r = sample(lo, hi, rng);
            out.min = std::min(out.min, r);
            out.max = std::max(out.max, r);
        }
        out.samples += per_band;
        out.band_top.push_back(hi);
        out.running_min.push_back(out.min);
        out.running_max.push_back(out.max);
        if (hi >= max_degree) break;
        lo = hi + 1;
        hi = std::min(std::max<std::size_t>(2 * hi, 1), max_degree);
    }
    return out;
}

}  // namespace

BatchResult check_wa_batch(const CoefficientSeries& p, const WeightSequence& w, std::size_t per_band,
                           std::size_t max_degree, std::uint64_t seed) {
    return band_sweep(per_band, max_degree, seed, [&](std::size_t lo, std::size_t hi, Rng& rng) {
        const auto f1 = random_series(random_degree(lo, hi, rng), rng);
        const auto f2 = random_series(random_degree(lo, hi, rng), rng);
        return check_wa(p, f1, f2, w);
    });
}

CoefficientSeries divide_by_z_minus_1(const CoefficientSeries& g) {
    if (g.degree() < 1) return {};
    std::vector<Complex> f(g.coeffs().size() - 1);
    Complex acc = 0.0;
    for (std::size_t k = f.size(); k-- > 0;) {
        acc += g[k + 1];
        f[k] = acc;
    }
    return CoefficientSeries(std::move(f));
}

double check_wc(const CoefficientSeries& f, const WeightSequence& w) {
    if (f.is_zero()) throw InvalidArgument("check_wc needs f != 0");
    const CoefficientSeries z_minus_1{Complex(-1.0), Complex(1.0)};
    return beurling_norm(multiply(z_minus_1, f), w) / beurling_norm(f, w, 1.0);
}

BatchResult check_wc_batch(const WeightSequence& w, std::size_t per_band, std::size_t max_degree,
                           std::uint64_t seed) {
    auto out = band_sweep(per_band, max_degree, seed, [&](std::size_t lo, std::size_t hi, Rng& rng) {
        return check_wc(random_series(random_degree(lo, hi, rng), rng), w);
    });
    std::size_t tail = std::max<std::size_t>(4 * max_degree, 256);
    if (const auto hint = w.max_index_hint()) tail = std::min(tail, *hint);
    if (!omega_s_increasing_tail(w, 2.0, tail))
        out.warning = "omega_2 is not increasing on the checked tail; the lower bound is not expected to hold";
    return out;
}

DerivativeProbe derivative_equivalence_probe(const CoefficientSeries& f, const WeightSequence& w) {
    if (f.is_zero()) throw InvalidArgument("derivative probe needs f != 0");
    return {beurling_norm(f, w), std::abs(f[0]) + beurling_norm(derivative(f), w, 1.0)};
}

BatchResult derivative_equivalence_batch(const WeightSequence& w, std::size_t per_band, std::size_t max_degree,
                                         std::uint64_t seed) {
    return band_sweep(per_band, max_degree, seed, [&](std::size_t lo, std::size_t hi, Rng& rng) {
        return derivative_equivalence_probe(random_series(random_degree(lo, hi, rng), rng), w).ratio();
    });
}

}  // namespace shiftlab
