#include "shiftlab/stability_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shiftlab/errors.hpp"
#include "shiftlab/subspace.hpp"

namespace shiftlab {

using nlohmann::json;

std::string to_string(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::dense_random: return "dense_random";
        case PerturbationKind::weight_jitter: return "weight_jitter";
        case PerturbationKind::compact_zeroing: return "compact_zeroing";
    }
    return "dense_random";
}

PerturbationKind perturbation_kind_from_string(const std::string& name) {
    if (name == "dense_random") return PerturbationKind::dense_random;
    if (name == "weight_jitter") return PerturbationKind::weight_jitter;
    if (name == "compact_zeroing") return PerturbationKind::compact_zeroing;
    throw InvalidArgument("unknown perturbation kind '" + name + "'");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

void PerturbationPlan::validate() const {
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
        if (!(epsilon_schedule[i] > 0.0)) throw InvalidArgument("epsilon schedule must be positive");
        if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw InvalidArgument("epsilon schedule must be strictly decreasing");
    }
    for (std::size_t i = 1; i < zero_set.size(); ++i)
        if (zero_set[i] <= zero_set[i - 1]) throw InvalidArgument("zero_set must be strictly increasing");
    if (kind == PerturbationKind::compact_zeroing && epsilon_schedule.size() > 1)
        throw InvalidArgument("compact_zeroing is a fixed perturbation; it cannot drive a convergence schedule");
}

namespace {

struct PatternEntry {
    Eigen::Index row;
    Eigen::Index col;
};

// Nonzero entries of a weighted-shift-like window, column by column.
std::vector<PatternEntry> shift_pattern(const CMatrix& m) {
    std::vector<PatternEntry> entries;
    std::vector<int> row_count(static_cast<std::size_t>(m.rows()), 0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        int col_count = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) == Complex(0.0)) continue;
            entries.push_back({i, j});
            ++col_count;
            ++row_count[static_cast<std::size_t>(i)];
        }
        if (col_count > 1) throw InvalidArgument("window is not a weighted-shift pattern");
    }
    if (std::any_of(row_count.begin(), row_count.end(), [](int c) { return c > 1; }))
        throw InvalidArgument("window is not a weighted-shift pattern");
    return entries;
}

// Index n of the weight alpha_n stored at a pattern entry.
Eigen::Index weight_index(const OperatorWindow& t, const PatternEntry& e) {
    return t.tag() == WindowTag::adjoint ? e.row : e.col;
}

}  // namespace

Perturbed perturb(const OperatorWindow& t, const PerturbationPlan& plan, double eps) {
    Rng rng(plan.seed);
    return perturb(t, plan, eps, rng);
}

Perturbed perturb(const OperatorWindow& t, const PerturbationPlan& plan, double eps, Rng& rng) {
    plan.validate();
    if (!(eps > 0.0)) throw InvalidArgument("perturbation size must be > 0");
    CMatrix s = t.entries();

    switch (plan.kind) {
        case PerturbationKind::dense_random: {
            CMatrix g(s.rows(), s.cols());
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_gaussian();
            s += (eps / operator_norm(g)) * g;
            break;
        }
        case PerturbationKind::weight_jitter: {
            const auto pattern = shift_pattern(s);
            double norm = 0.0;
            for (const auto& e : pattern) norm = std::max(norm, std::abs(s(e.row, e.col)));
            if (norm == 0.0) throw InvalidArgument("cannot jitter the zero window");
            const double bound = eps / norm;
            for (const auto& e : pattern) s(e.row, e.col) *= 1.0 + rng.uniform(-bound, bound);
            break;
        }
        case PerturbationKind::compact_zeroing: {
            if (t.tag() != WindowTag::shift && t.tag() != WindowTag::adjoint)
                throw InvalidArgument("compact_zeroing needs a shift or adjoint window");
            for (const auto& e : shift_pattern(s)) {
                const auto n = static_cast<std::size_t>(weight_index(t, e));
                if (std::binary_search(plan.zero_set.begin(), plan.zero_set.end(), n)) s(e.row, e.col) = 0.0;
            }
            break;
        }
    }
    const double distance = operator_norm(s - t.entries());
    return {OperatorWindow(std::move(s), WindowTag::perturbed), distance};
}

namespace {

json complex_list(const std::vector<Complex>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back({z.real(), z.imag()});
    return out;
}

json plan_json(const PerturbationPlan& plan) {
    return {{"kind", to_string(plan.kind)},
            {"epsilon_schedule", plan.epsilon_schedule},
            {"seed", plan.seed},
            {"zero_set", plan.zero_set}};
}

CMatrix block_diagonal(const std::vector<CMatrix>& blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

// Orthonormal basis of (+)_copies M_Lambda(alpha_copy) in windows of size dim.
CMatrix zero_based_sum(const std::vector<std::vector<double>>& alphas, const std::vector<Complex>& zeros,
                       Eigen::Index dim) {
    std::vector<CMatrix> blocks;
    for (const auto& a : alphas) blocks.push_back(zero_based_subspace(a, zeros, dim).vectors());
    return block_diagonal(blocks);
}

OperatorWindow shift_sum(const std::vector<std::vector<double>>& alphas, std::size_t n) {
    std::vector<CMatrix> blocks;
    for (const auto& a : alphas) {
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n) + 1, static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j)
            m(static_cast<Eigen::Index>(j) + 1, static_cast<Eigen::Index>(j)) = a[j];
        blocks.push_back(std::move(m));
    }
    return {block_diagonal(blocks), WindowTag::shift};
}

// Weights of copy c read back from a (perturbed) direct-sum shift window.
std::vector<std::vector<double>> read_weights(const CMatrix& s, std::size_t copies, std::size_t n) {
    std::vector<std::vector<double>> alphas(copies, std::vector<double>(n));
    const auto rows = static_cast<Eigen::Index>(n) + 1;
    const auto cols = static_cast<Eigen::Index>(n);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            alphas[c][j] = std::abs(s(static_cast<Eigen::Index>(c) * rows + jj + 1, static_cast<Eigen::Index>(c) * cols + jj));
        }
    return alphas;
}

}  // namespace

ExperimentReport norm_stability_run(const NormStabilityConfig& config, const PerturbationPlan& plan) {
    plan.validate();
    if (plan.kind == PerturbationKind::compact_zeroing)
        throw InvalidArgument("norm_stability_run does not accept compact_zeroing");
    if (plan.epsilon_schedule.empty()) throw InvalidArgument("epsilon schedule is empty");

    ExperimentReport rep;
    rep.experiment = "norm_stability";
    rep.inputs = {{"weight", config.weight.name()},
                  {"roots", complex_list(config.roots)},
                  {"N", config.n},
                  {"tol", config.tol},
                  {"plan", plan_json(plan)}};

    const auto base = compressed_adjoint(config.weight, config.n);
    std::vector<double> eps_ok, dist_ok;
    std::size_t failures = 0;
    for (double eps : plan.epsilon_schedule) {
        StepRecord step{eps, {}};
        const auto perturbed = perturb(base, plan, eps);
        step.metrics["perturbation_norm"] = perturbed.distance;
        try {
            const auto res = kernel_krylov_reconstruct(config.weight, config.roots, perturbed.window, std::nullopt,
                                                   config.tol);
            step.metrics["distance"] = res.distance;
            step.metrics["distance_over_eps"] = res.distance / eps;
            step.metrics["krylov_dim"] = static_cast<double>(res.krylov_dim);
            step.metrics["failed"] = 0.0;
            eps_ok.push_back(eps);
            dist_ok.push_back(res.distance);
        } catch (const CyclicityFailure& e) {
            ++failures;
            step.metrics["krylov_dim"] = static_cast<double>(e.achieved());
            step.metrics["failed"] = 1.0;
        }
        rep.per_step.push_back(std::move(step));
    }

    rep.fitted_slope = loglog_slope(eps_ok, dist_ok);
    const double eps_min = plan.epsilon_schedule.back();
    const bool have_final = !dist_ok.empty() && eps_ok.back() == eps_min;
    const double final_distance = have_final ? dist_ok.back() : std::numeric_limits<double>::quiet_NaN();
    rep.summary = {{"reconstruction_failures", failures},
                   {"final_distance", final_distance},
                   {"final_distance_bound", 10.0 * eps_min}};

    if (failures > 0 || !have_final) {
        rep.verdict = Verdict::fail;
    } else if (std::isnan(rep.fitted_slope)) {
        rep.verdict = Verdict::inconclusive;
    } else {
        const bool slope_ok = rep.fitted_slope >= 0.9 && rep.fitted_slope <= 1.1;
        rep.verdict = slope_ok && final_distance <= 10.0 * eps_min ? Verdict::pass : Verdict::fail;
    }
    return rep;
}

ExperimentReport semicontinuity_run(const SemicontinuityConfig& config, const PerturbationPlan& plan) {
    plan.validate();
    if (plan.kind == PerturbationKind::compact_zeroing)
        throw InvalidArgument("semicontinuity_run does not accept compact_zeroing");
    if (config.copies == 0 || config.n < 2) throw InvalidArgument("need at least one copy and N >= 2");

    const std::size_t n = config.n;
    const auto dim_in = static_cast<Eigen::Index>(n);
    std::vector<double> base_alpha(n);
    for (std::size_t j = 0; j < n; ++j) base_alpha[j] = alpha_at(config.weight, j);
    const std::vector<std::vector<double>> base(config.copies, base_alpha);

    const auto t = shift_sum(base, n);
    const double smin = singular_values(t.entries()).back();
    if (smin < 0.1) throw InvalidArgument("T is not bounded below on the window (sigma_min < 0.1)");

    const CMatrix b_in = zero_based_sum(base, config.zeros, dim_in);
    const CMatrix b_out = zero_based_sum(base, config.zeros, dim_in + 1);
    const auto ref = rel_index(t, make_orthonormal_basis(b_in), make_orthonormal_basis(b_out), config.tol);

    ExperimentReport rep;
    rep.experiment = "semicontinuity";
    rep.inputs = {{"weight", config.weight.name()},
                  {"copies", config.copies},
                  {"zeros", complex_list(config.zeros)},
                  {"N", n},
                  {"trials", config.trials},
                  {"tol", config.tol},
                  {"max_skipped_fraction", config.max_skipped_fraction},
                  {"plan", plan_json(plan)}};

    const std::size_t steps = plan.epsilon_schedule.size();
    std::vector<std::size_t> accepted(steps, 0), violations(steps, 0);
    std::vector<int> min_index(steps, std::numeric_limits<int>::max());
    std::vector<int> max_index(steps, std::numeric_limits<int>::min());
    std::vector<double> max_defect(steps, 0.0);
    std::size_t skipped = 0, violating_trials = 0;

    const Rng root(plan.seed);
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        Rng rng = root.split(trial);
        bool started = false, transport_failed = false, violated = false;
        for (std::size_t k = 0; k < steps && !transport_failed; ++k) {
            const auto s = perturb(t, plan, plan.epsilon_schedule[k], rng);
            const auto alphas = read_weights(s.window.entries(), config.copies, n);
            try {
                const CMatrix cand_in = zero_based_sum(alphas, config.zeros, dim_in);
                const CMatrix cand_out = zero_based_sum(alphas, config.zeros, dim_in + 1);
                const SubspaceBasis moved_in(cand_in * (cand_in.adjoint() * b_in));
                const SubspaceBasis moved_out(cand_out * (cand_out.adjoint() * b_out));
                const auto idx = rel_index(s.window, moved_in, moved_out, config.tol);
                started = true;
                ++accepted[k];
                max_defect[k] = std::max(max_defect[k], idx.defect);
                min_index[k] = std::min(min_index[k], idx.index);
                max_index[k] = std::max(max_index[k], idx.index);
                if (ref.index > idx.index) {
                    ++violations[k];
                    violated = true;
                }
            } catch (const RankDeficient&) {
                transport_failed = true;
            } catch (const InvarianceViolation&) {
                // before the first accepted step this is expected; afterwards
                // the step simply does not count
            }
        }
        if (transport_failed || !started)
            ++skipped;
        else if (violated)
            ++violating_trials;
    }

    for (std::size_t k = 0; k < steps; ++k) {
        StepRecord step{plan.epsilon_schedule[k], {}};
        step.metrics["accepted_trials"] = static_cast<double>(accepted[k]);
        step.metrics["violations"] = static_cast<double>(violations[k]);
        step.metrics["max_defect"] = max_defect[k];
        step.metrics["min_index"] = accepted[k] ? min_index[k] : std::numeric_limits<double>::quiet_NaN();
        step.metrics["max_index"] = accepted[k] ? max_index[k] : std::numeric_limits<double>::quiet_NaN();
        rep.per_step.push_back(std::move(step));
    }

    const double skipped_fraction =
        config.trials ? static_cast<double>(skipped) / static_cast<double>(config.trials) : 0.0;
    rep.summary = {{"reference_index", ref.index},
                   {"reference_gap", ref.gap},
                   {"sigma_min_T", smin},
                   {"skipped_trials", skipped},
                   {"skipped_fraction", skipped_fraction},
                   {"violating_trials", violating_trials}};
    rep.verdict = violating_trials == 0 && skipped_fraction <= config.max_skipped_fraction ? Verdict::pass
                                                                                         : Verdict::fail;
    return rep;
}

std::vector<std::vector<Complex>> random_zero_sets(std::size_t count, std::uint64_t seed, std::size_t max_size,
                                                   double radius, double min_separation) {
    const Rng root(seed);
    std::vector<std::vector<Complex>> sets;
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = root.split(i);
        const auto size = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_size)));
        std::vector<Complex> zeros;
        while (zeros.size() < size) {
            // uniform on the disc of the given radius
            const Complex z = std::polar(radius * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
            const bool separated = std::all_of(zeros.begin(), zeros.end(),
                                               [&](Complex y) { return std::abs(y - z) >= min_separation; });
            if (separated) zeros.push_back(z);
        }
        sets.push_back(std::move(zeros));
    }
    return sets;
}

ExperimentReport beurling_index_sweep(const std::vector<std::vector<Complex>>& zero_sets, std::size_t n,
                                      double tol) {
    for (const auto& zeros : zero_sets) {
        if (zeros.empty() || zeros.size() > 5) throw InvalidArgument("zero sets must have 1..5 points");
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            if (std::abs(zeros[i]) > 0.8) throw InvalidArgument("zeros must satisfy |lambda| <= 0.8");
            for (std::size_t j = 0; j < i; ++j)
                if (zeros[i] == zeros[j]) throw InvalidArgument("zero sets must not repeat points");
        }
    }

    ExperimentReport rep;
    rep.experiment = "beurling_index_sweep";
    json sets = json::array();
    for (const auto& zeros : zero_sets) sets.push_back(complex_list(zeros));
    rep.inputs = {{"zero_sets", sets}, {"N", n}, {"tol", tol}};

    const auto dim = static_cast<Eigen::Index>(n);
    const auto t = shift_window(WeightSequence::unweighted(), n);
    std::size_t not_one = 0, ill_conditioned = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < zero_sets.size(); ++s) {
        const auto& zeros = zero_sets[s];
        double separation = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < zeros.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) separation = std::min(separation, std::abs(zeros[i] - zeros[j]));

        StepRecord step{0.0, {}};
        step.metrics["set"] = static_cast<double>(s);
        step.metrics["size"] = static_cast<double>(zeros.size());
        step.metrics["min_separation"] = separation;
        const bool ill = separation < 1e-3;
        step.metrics["ill_conditioned"] = ill ? 1.0 : 0.0;
        if (ill) ++ill_conditioned;

        const auto res = rel_index(t, vanishing_polynomial_basis(zeros, dim), vanishing_polynomial_basis(zeros, dim + 1),
                                   tol);
        step.metrics["index"] = res.index;
        step.metrics["gap"] = res.gap;
        step.metrics["defect"] = res.defect;
        if (res.index != 1) ++not_one;
        min_gap = std::min(min_gap, res.gap);
        rep.per_step.push_back(std::move(step));
    }
    rep.summary = {{"sets", zero_sets.size()},
                   {"index_not_one", not_one},
                   {"ill_conditioned", ill_conditioned},
                   {"min_gap", min_gap}};
    rep.verdict = not_one == 0 && ill_conditioned == 0 && min_gap >= 1e3 ? Verdict::pass : Verdict::fail;
    return rep;
}

}  // namespace shiftlab
