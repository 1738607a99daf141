#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/linalg.hpp"
#include "shiftlab/operator_core.hpp"
#include "shiftlab/random.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

enum class PerturbationKind { dense_random, weight_jitter, compact_zeroing };

std::string to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(const std::string& name);

/// How a window is perturbed, with the schedule of sizes and the seed.
struct PerturbationPlan {
    PerturbationKind kind = PerturbationKind::dense_random;
    std::vector<double> epsilon_schedule;
    std::uint64_t seed = 0;
    std::vector<std::size_t> zero_set;   // compact_zeroing only

    /// Schedule strictly decreasing and positive, zero_set strictly
    /// increasing.  Throws InvalidArgument.
    void validate() const;
};

struct Perturbed {
    OperatorWindow window;
    double distance = 0.0;   // ||S - T||, computed
};

/// dense_random: T + eps G / ||G|| with seeded complex Gaussian G.
/// weight_jitter: every weight multiplied by (1 + delta), |delta| <= eps/||T||.
/// compact_zeroing: weights alpha_n, n in zero_set, replaced by 0; eps unused.
///
/// Jitter and zeroing need a weighted-shift pattern (at most one nonzero
/// entry per row and column).  Each call reseeds from plan.seed, so the same
/// plan gives the same direction for every eps.
Perturbed perturb(const OperatorWindow& t, const PerturbationPlan& plan, double eps);

/// As above with an explicit stream (per-trial randomness).
Perturbed perturb(const OperatorWindow& t, const PerturbationPlan& plan, double eps, Rng& rng);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct StepRecord {
    double epsilon = 0.0;
    std::map<std::string, double> metrics;
};

/// Structured record of a seeded experiment.
struct ExperimentReport {
    std::string experiment;
    nlohmann::json inputs = nlohmann::json::object();
    std::vector<StepRecord> per_step;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::inconclusive;
    nlohmann::json summary = nlohmann::json::object();
};

struct NormStabilityConfig {
    WeightSequence weight = WeightSequence::bergman();
    std::vector<Complex> roots{Complex(0.3), Complex(-0.4)};
    std::size_t n = 200;
    double tol = 1e-8;
};

/// Perturbed-adjoint reconstruction of M for every eps of the schedule;
/// pass iff the log-log slope of ||P_{M_k} - P_M|| vs eps is in [0.9, 1.1],
/// the final distance is <= 10 eps_min and no reconstruction failed.
ExperimentReport norm_stability_run(const NormStabilityConfig& config, const PerturbationPlan& plan);

struct SemicontinuityConfig {
    WeightSequence weight = WeightSequence::unweighted();
    std::size_t copies = 1;               // T = S (+) ... (+) S
    std::vector<Complex> zeros;           // empty: M is the whole window
    std::size_t n = 64;
    std::size_t trials = 200;
    double tol = 1e-8;
    double max_skipped_fraction = 0.1;
};

/// Checks ind(T, P) <= ind(S_n, P_n) along the schedule for every trial.
/// P_n is manufactured by projecting M's basis onto the zero-based subspace
/// of S_n's weights; trials whose transport loses rank or never reaches
/// defect <= tol are skipped and counted.
ExperimentReport semicontinuity_run(const SemicontinuityConfig& config, const PerturbationPlan& plan);

/// Seeded random zero sets: sizes 1..max_size, |lambda| <= radius,
/// pairwise distance >= min_separation.
std::vector<std::vector<Complex>> random_zero_sets(std::size_t count, std::uint64_t seed,
                                                   std::size_t max_size = 5, double radius = 0.8,
                                                   double min_separation = 1e-2);

/// rel_index of the unweighted shift on M_Lambda for every zero set; pass
/// iff every index is 1 with gap >= 1e3 and no set is ill-conditioned.
ExperimentReport beurling_index_sweep(const std::vector<std::vector<Complex>>& zero_sets, std::size_t n,
                                      double tol = 1e-8);

}  // namespace shiftlab
