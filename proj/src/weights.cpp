#include "shiftlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_data(const WeightSequence& w, std::size_t n) {
    if (auto hint = w.max_index_hint(); hint && n > *hint) throw IndexOutOfData(n, *hint);
}

// sqrt(n + 1) - sqrt(n) without cancellation
double sqrt_step(std::size_t n) {
    const double a = static_cast<double>(n);
    return 1.0 / (std::sqrt(a + 1.0) + std::sqrt(a));
}

}  // namespace

WeightSequence::WeightSequence(WeightKind kind, std::vector<double> values, std::string label)
    : kind_(kind), values_(std::move(values)), label_(std::move(label)) {}

WeightSequence WeightSequence::unweighted() { return {WeightKind::unweighted, {}, "unweighted"}; }
WeightSequence WeightSequence::bergman() { return {WeightKind::bergman, {}, "bergman"}; }
WeightSequence WeightSequence::quasianalytic_sqrt() {
    return {WeightKind::quasianalytic_sqrt, {}, "quasianalytic_sqrt"};
}

WeightSequence WeightSequence::from_omega(std::vector<double> omega) {
    if (omega.empty()) throw InvalidArgument("explicit weight sequence is empty");
    for (std::size_t n = 0; n < omega.size(); ++n) {
        if (!std::isfinite(omega[n]) || omega[n] < 1.0)
            throw InvalidArgument("omega(" + std::to_string(n) + ") must be finite and >= 1");
    }
    return {WeightKind::explicit_values, std::move(omega), "explicit"};
}

WeightSequence WeightSequence::polynomial(double power, std::size_t max_index) {
    std::vector<double> omega(max_index + 1);
    for (std::size_t n = 0; n <= max_index; ++n)
        omega[n] = std::pow(static_cast<double>(n + 1), power);
    auto w = from_omega(std::move(omega));
    w.label_ = "polynomial(" + std::to_string(power) + ")";
    return w;
}

WeightSequence WeightSequence::preset(std::string_view name) {
    if (name == "unweighted") return unweighted();
    if (name == "bergman") return bergman();
    if (name == "quasianalytic_sqrt") return quasianalytic_sqrt();
    throw InvalidArgument("unknown weight preset '" + std::string(name) + "'");
}

std::string WeightSequence::name() const { return label_; }

std::optional<std::size_t> WeightSequence::max_index_hint() const noexcept {
    if (kind_ != WeightKind::explicit_values) return std::nullopt;
    return values_.size() - 1;
}

double log_omega_at(const WeightSequence& w, std::size_t n) {
    switch (w.kind()) {
        case WeightKind::unweighted: return 0.0;
        // omega = 1 / pi_n
        case WeightKind::bergman: return 0.5 * std::log1p(static_cast<double>(n));
        case WeightKind::quasianalytic_sqrt: return std::sqrt(static_cast<double>(n));
        case WeightKind::explicit_values:
            require_data(w, n);
            return std::log(w.explicit_values()[n]);
    }
    return 0.0;
}

double omega_at(const WeightSequence& w, std::size_t n) {
    switch (w.kind()) {
        case WeightKind::unweighted: return 1.0;
        case WeightKind::bergman: return std::sqrt(static_cast<double>(n) + 1.0);
        case WeightKind::quasianalytic_sqrt: return std::exp(std::sqrt(static_cast<double>(n)));
        case WeightKind::explicit_values:
            require_data(w, n);
            return w.explicit_values()[n];
    }
    return 1.0;
}

double omega_s_at(const WeightSequence& w, double s, std::size_t n) {
    return std::exp(log_omega_at(w, n) - s * std::log1p(static_cast<double>(n)));
}

double alpha_at(const WeightSequence& w, std::size_t n) {
    switch (w.kind()) {
        case WeightKind::unweighted: return 1.0;
        case WeightKind::bergman: {
            const double a = static_cast<double>(n);
            return std::sqrt((a + 1.0) / (a + 2.0));
        }
        case WeightKind::quasianalytic_sqrt: return std::exp(sqrt_step(n));
        case WeightKind::explicit_values:
            require_data(w, n + 1);
            return w.explicit_values()[n + 1] / w.explicit_values()[n];
    }
    return 1.0;
}

double log_pi_product(const WeightSequence& w, std::size_t n) {
    if (n == 0) return 0.0;
    switch (w.kind()) {
        case WeightKind::unweighted: return 0.0;
        case WeightKind::bergman: return -0.5 * std::log1p(static_cast<double>(n));
        case WeightKind::quasianalytic_sqrt: return std::sqrt(static_cast<double>(n));
        case WeightKind::explicit_values:
            require_data(w, n);
            return std::log(w.explicit_values()[n]) - std::log(w.explicit_values()[0]);
    }
    return 0.0;
}

double pi_product(const WeightSequence& w, std::size_t n) { return std::exp(log_pi_product(w, n)); }

std::pair<double, double> alpha_bounds(const WeightSequence& w, std::size_t count) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
        const double a = alpha_at(w, n);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (count > 0 && (!(lo > 0.0) || !std::isfinite(hi)))
        throw InvalidArgument("shift weights are not bounded away from 0 and infinity");
    return {lo, hi};
}

RadiusEstimates radius_estimates(const WeightSequence& w, std::size_t n,
                                 std::optional<std::size_t> window_length) {
    if (n < 64) throw InvalidArgument("radius_estimates needs a window N >= 64");
    RadiusEstimates r;
    r.window_length = window_length.value_or(
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
    if (r.window_length == 0 || r.window_length > n / 2)
        throw InvalidArgument("radius window length must be in [1, N/2]");
    r.tail_start = n / 2;
    r.r_point = std::exp(log_pi_product(w, n) / static_cast<double>(n));

    const double len = static_cast<double>(r.window_length);
    r.r_spec = 0.0;
    r.r0 = std::numeric_limits<double>::infinity();
    for (std::size_t k = r.tail_start; k + r.window_length <= n; ++k) {
        const double mean =
            std::exp((log_pi_product(w, k + r.window_length) - log_pi_product(w, k)) / len);
        r.r_spec = std::max(r.r_spec, mean);
        r.r0 = std::min(r.r0, mean);
    }
    return r;
}

std::string_view to_string(DivergenceVerdict v) {
    switch (v) {
        case DivergenceVerdict::diverges: return "diverges";
        case DivergenceVerdict::converges: return "converges";
        case DivergenceVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Second divided difference of g on the nodes (x0, x1, x2), with a rounding
// allowance proportional to |g|.
struct Curvature {
    double value;
    double noise;
};

Curvature second_divided_difference(double x0, double x1, double x2, double g0, double g1,
                                    double g2) {
    const double d01 = (g1 - g0) / (x1 - x0);
    const double d12 = (g2 - g1) / (x2 - x1);
    const double value = (d12 - d01) / (x2 - x0);
    const double scale = std::abs(g0) + std::abs(g1) + std::abs(g2);
    const double h = std::min(x1 - x0, x2 - x1);
    const double noise = 64.0 * kEps * scale / (h * (x2 - x0));
    return {value, noise};
}

bool convex_on(const std::vector<double>& x, const std::vector<double>& g) {
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const auto c = second_divided_difference(x[i - 1], x[i], x[i + 1], g[i - 1], g[i], g[i + 1]);
        if (c.value < -c.noise) return false;
    }
    return true;
}

bool concave_on(const std::vector<double>& x, const std::vector<double>& g) {
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const auto c = second_divided_difference(x[i - 1], x[i], x[i + 1], g[i - 1], g[i], g[i + 1]);
        if (c.value > c.noise) return false;
    }
    return true;
}

double quasianalytic_term(const WeightSequence& w, std::size_t n) {
    const double a = static_cast<double>(n);
    return log_omega_at(w, n) / (a * std::sqrt(a) + 1.0);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double nx = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nx;
    my /= nx;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

ClassificationReport classify(const WeightSequence& w, std::size_t n) {
    if (n < 64) throw InvalidArgument("classify needs a window N >= 64");
    if (auto hint = w.max_index_hint(); hint && *hint < n) throw IndexOutOfData(n, *hint);

    ClassificationReport rep;
    rep.window = n;
    rep.tail_start = n / 2;

    const auto [lo, hi] = alpha_bounds(w, n);
    rep.alpha_inf = lo;
    rep.alpha_sup = hi;

    // omega(n)^{1/n} -> 1: log omega(n)/n must keep decaying across the tail
    const double rate_mid = log_omega_at(w, rep.tail_start) / static_cast<double>(rep.tail_start);
    const double rate_end = log_omega_at(w, n) / static_cast<double>(n);
    rep.regular = rate_end <= 1e-3 || rate_end <= 0.75 * rate_mid;

    std::vector<double> t, log_w, idx;
    for (std::size_t k = rep.tail_start; k <= n; ++k) {
        idx.push_back(static_cast<double>(k));
        t.push_back(std::log(static_cast<double>(k)));
        log_w.push_back(log_omega_at(w, k));
    }
    rep.log_convex_tail = convex_on(t, log_w);

    for (int s = 1; s <= 3; ++s) {
        std::vector<double> ws, log_ws;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const double l = log_w[i] - s * std::log1p(idx[i]);
            log_ws.push_back(l);
            ws.push_back(std::exp(l));
        }
        rep.omega_s_concave[s] = concave_on(idx, ws);
        rep.log_omega_s_concave[s] = concave_on(idx, log_ws);
    }

    // partial sums of log omega(n) / (n^{3/2} + 1) at log-spaced checkpoints
    constexpr std::size_t checkpoints[] = {64, 256, 1024, 4096};
    const std::size_t limit = w.max_index_hint().value_or(checkpoints[3]);
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t cp : checkpoints) {
        if (cp > limit) break;
        for (; k <= cp; ++k) sum += quasianalytic_term(w, k);
        rep.quasianalytic_partial_sums.emplace_back(cp, sum);
    }

    const auto& ps = rep.quasianalytic_partial_sums;
    std::vector<double> x, y, inc;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        x.push_back(std::log(static_cast<double>(ps[i].first)));
        y.push_back(ps[i].second);
        if (i > 0) inc.push_back(ps[i].second - ps[i - 1].second);
    }
    rep.partial_sum_slope = ps.size() >= 2 ? ls_slope(x, y) : 0.0;
    for (std::size_t i = 1; i < inc.size(); ++i)
        rep.increment_ratios.push_back(inc[i - 1] > 0.0 ? inc[i] / inc[i - 1] : 0.0);

    const bool cauchy =
        !inc.empty() && std::all_of(inc.begin(), inc.end(), [](double d) { return d <= 1e-3; });
    const bool geometric_decay =
        !rep.increment_ratios.empty() &&
        std::all_of(rep.increment_ratios.begin(), rep.increment_ratios.end(),
                    [](double r) { return r <= 0.8; });
    if (cauchy || geometric_decay) {
        rep.divergence_verdict = DivergenceVerdict::converges;
    } else if (!rep.increment_ratios.empty() && rep.partial_sum_slope >= 0.1 &&
               rep.increment_ratios.back() >= 0.9) {
        rep.divergence_verdict = DivergenceVerdict::diverges;
    } else {
        rep.divergence_verdict = DivergenceVerdict::inconclusive;
    }

    bool log_concave_all = true;
    for (const auto& [s, ok] : rep.log_omega_s_concave) log_concave_all = log_concave_all && ok;
    rep.shields_hypotheses_met = rep.regular && rep.log_convex_tail && log_concave_all &&
                                 rep.divergence_verdict == DivergenceVerdict::diverges;
    return rep;
}

bool omega_s_increasing_tail(const WeightSequence& w, double s, std::size_t n) {
    double prev = std::log(omega_s_at(w, s, n / 2));
    for (std::size_t k = n / 2 + 1; k <= n; ++k) {
        const double cur = log_omega_at(w, k) - s * std::log1p(static_cast<double>(k));
        if (cur < prev - 1e-12 * (1.0 + std::abs(prev))) return false;
        prev = cur;
    }
    return true;
}

}  // namespace shiftlab
