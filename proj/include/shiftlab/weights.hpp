#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shiftlab {

enum class WeightKind { unweighted, bergman, quasianalytic_sqrt, explicit_values };

/// A weight omega: Z+ -> [1, inf) together with the shift weights
/// alpha_n it induces.
///
/// Presets are closed forms.  Explicit sequences are supplied as omega
/// values (never alpha values) so that pi_n telescopes exactly.
class WeightSequence {
public:
    static WeightSequence unweighted();
    static WeightSequence bergman();
    static WeightSequence quasianalytic_sqrt();
    /// omega(0..size-1); every value must be finite and >= 1.
    static WeightSequence from_omega(std::vector<double> omega);
    /// omega(n) = (n + 1)^power for n <= max_index.
    static WeightSequence polynomial(double power, std::size_t max_index);
    /// Preset by name ("unweighted", "bergman", "quasianalytic_sqrt").
    static WeightSequence preset(std::string_view name);

    WeightKind kind() const noexcept { return kind_; }
    std::string name() const;
    /// Largest n with trustworthy omega(n); nullopt for presets.
    std::optional<std::size_t> max_index_hint() const noexcept;
    const std::vector<double>& explicit_values() const noexcept { return values_; }

private:
    WeightSequence(WeightKind kind, std::vector<double> values, std::string label);

    WeightKind kind_;
    std::vector<double> values_;
    std::string label_;
};

double omega_at(const WeightSequence& w, std::size_t n);
double log_omega_at(const WeightSequence& w, std::size_t n);
/// omega_s(n) = omega(n) (1 + n)^{-s}.  May be < 1.
double omega_s_at(const WeightSequence& w, double s, std::size_t n);

double alpha_at(const WeightSequence& w, std::size_t n);

/// pi_n = alpha_0 ... alpha_{n-1}; pi_0 = 1.
double pi_product(const WeightSequence& w, std::size_t n);
double log_pi_product(const WeightSequence& w, std::size_t n);

/// Infimum and supremum of alpha_n over n < count.  Throws InvalidArgument
/// when either bound is degenerate (0 or not finite).
std::pair<double, double> alpha_bounds(const WeightSequence& w, std::size_t count);

struct RadiusEstimates {
    double r_point = 0.0;   // pi_N^{1/N}
    double r_spec = 0.0;    // max windowed geometric mean of alpha on the tail
    double r0 = 0.0;        // min windowed geometric mean of alpha on the tail
    std::size_t window_length = 0;
    std::size_t tail_start = 0;
};

/// Numerical surrogates for the spectral radii.  Window length defaults to
/// floor(sqrt(N)); windows start in the tail [N/2, N - L].
RadiusEstimates radius_estimates(const WeightSequence& w, std::size_t n,
                                 std::optional<std::size_t> window_length = std::nullopt);

enum class DivergenceVerdict { diverges, converges, inconclusive };
std::string_view to_string(DivergenceVerdict v);

struct ClassificationReport {
    bool regular = false;
    double alpha_inf = 0.0;
    double alpha_sup = 0.0;
    std::size_t tail_start = 0;
    std::size_t window = 0;
    /// t -> log omega(e^t) convex on the tail.
    bool log_convex_tail = false;
    /// omega_s(n) concave on the tail (literal check), s = 1, 2, 3.
    std::map<int, bool> omega_s_concave;
    /// log omega_s(n) concave on the tail, s = 1, 2, 3.
    std::map<int, bool> log_omega_s_concave;
    std::vector<std::pair<std::size_t, double>> quasianalytic_partial_sums;
    double partial_sum_slope = 0.0;            // LS slope of S_N vs log N
    std::vector<double> increment_ratios;      // d_{i+1} / d_i
    DivergenceVerdict divergence_verdict = DivergenceVerdict::inconclusive;
    bool shields_hypotheses_met = false;
};

ClassificationReport classify(const WeightSequence& w, std::size_t n);

/// Whether omega_s(n) is nondecreasing on [n/2, n].
bool omega_s_increasing_tail(const WeightSequence& w, double s, std::size_t n);

}  // namespace shiftlab
