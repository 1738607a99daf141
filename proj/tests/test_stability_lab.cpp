#include <doctest.h>

#include <cmath>

#include "shiftlab/errors.hpp"
#include "shiftlab/stability_lab.hpp"
#include "shiftlab/subspace.hpp"

using namespace shiftlab;

namespace {

PerturbationPlan plan_of(PerturbationKind kind, std::vector<double> schedule, std::uint64_t seed = 7) {
    PerturbationPlan p;
    p.kind = kind;
    p.epsilon_schedule = std::move(schedule);
    p.seed = seed;
    return p;
}

std::vector<double> halving(double start, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(start * std::ldexp(1.0, -i));
    return out;
}

}  // namespace

TEST_CASE("dense perturbation has the requested operator norm") {
    const auto t = compressed_adjoint(WeightSequence::bergman(), 40);
    const auto plan = plan_of(PerturbationKind::dense_random, {1e-3});
    for (double eps : {1e-1, 1e-3, 1e-6}) {
        const auto s = perturb(t, plan, eps);
        CHECK(std::abs(s.distance - eps) <= 1e-12);
        CHECK(std::abs(operator_norm(s.window.entries() - t.entries()) - eps) <= 1e-12);
        CHECK(s.window.tag() == WindowTag::perturbed);
    }
}

TEST_CASE("same plan gives the same direction for every eps") {
    const auto t = compressed_adjoint(WeightSequence::unweighted(), 10);
    const auto plan = plan_of(PerturbationKind::dense_random, {1e-2});
    const CMatrix a = perturb(t, plan, 1e-2).window.entries() - t.entries();
    const CMatrix b = perturb(t, plan, 1e-4).window.entries() - t.entries();
    CHECK((a * 1e-2 - b).norm() <= 1e-15);
    const CMatrix c = perturb(t, plan_of(PerturbationKind::dense_random, {1e-2}, 8), 1e-2).window.entries();
    CHECK((c - t.entries()).norm() > 0.0);
    CHECK((c - perturb(t, plan, 1e-2).window.entries()).norm() > 1e-4);
}

TEST_CASE("weight jitter keeps the shift pattern and stays within eps") {
    const auto w = WeightSequence::bergman();
    const auto t = shift_window(w, 8);
    const auto s = perturb(t, plan_of(PerturbationKind::weight_jitter, {1e-3}), 1e-3);
    const CMatrix& a = s.window.entries();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i == j + 1) {
                CHECK(std::abs(a(i, j) - t.entries()(i, j)) <= 1e-3);
                CHECK(a(i, j).imag() == 0.0);
            } else {
                CHECK(a(i, j) == Complex(0.0));
            }
        }
    CHECK(s.distance <= 1e-3);
    CHECK_THROWS_AS(perturb(OperatorWindow(CMatrix::Ones(3, 3), WindowTag::custom),
                            plan_of(PerturbationKind::weight_jitter, {1e-3}), 1e-3),
                    InvalidArgument);
}

TEST_CASE("compact zeroing splits the shift into a nilpotent block") {
    auto plan = plan_of(PerturbationKind::compact_zeroing, {1.0});
    plan.zero_set = {2};
    const auto t = shift_window(WeightSequence::unweighted(), 6);
    const auto s = perturb(t, plan, 1.0);
    const CMatrix& a = s.window.entries();
    CHECK(a(3, 2) == Complex(0.0));
    CHECK(a(1, 0) == Complex(1.0));
    CHECK(a(2, 1) == Complex(1.0));
    CHECK(a(4, 3) == Complex(1.0));
    // e0 reaches e2 and then dies
    CMatrix sq = a.topRows(6);
    CMatrix cube = sq * sq * sq;
    CHECK(cube.col(0).norm() == 0.0);
    CHECK(std::abs(s.distance - 1.0) <= 1e-14);

    const auto adj = adjoint_window(WeightSequence::unweighted(), 6);
    const auto sa = perturb(adj, plan, 1.0);
    CHECK(sa.window.entries()(2, 3) == Complex(0.0));
    CHECK(sa.window.entries()(1, 2) == Complex(1.0));
}

TEST_CASE("plan validation") {
    CHECK_THROWS_AS(plan_of(PerturbationKind::dense_random, {1e-2, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(plan_of(PerturbationKind::dense_random, {1e-3, 1e-2}).validate(), InvalidArgument);
    CHECK_THROWS_AS(plan_of(PerturbationKind::compact_zeroing, {1e-2, 1e-3}).validate(), InvalidArgument);
    CHECK_NOTHROW(plan_of(PerturbationKind::weight_jitter, halving(1e-2, 5)).validate());
    CHECK(perturbation_kind_from_string("weight_jitter") == PerturbationKind::weight_jitter);
    CHECK_THROWS_AS(perturbation_kind_from_string("gaussian"), InvalidArgument);
    const auto t = shift_window(WeightSequence::unweighted(), 4);
    CHECK_THROWS_AS(perturb(t, plan_of(PerturbationKind::dense_random, {1.0}), 0.0), InvalidArgument);
}

TEST_CASE("norm stability passes for the default bergman configuration") {
    NormStabilityConfig cfg;
    const auto rep = norm_stability_run(cfg, plan_of(PerturbationKind::dense_random, halving(1e-2, 8)));
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.fitted_slope >= 0.9);
    CHECK(rep.fitted_slope <= 1.1);
    REQUIRE(rep.per_step.size() == 8);
    for (const auto& step : rep.per_step) {
        CHECK(step.metrics.at("failed") == 0.0);
        CHECK(step.metrics.at("distance") <= 10.0 * step.epsilon);
    }
    for (std::size_t k = 1; k < rep.per_step.size(); ++k)
        CHECK(rep.per_step[k].metrics.at("distance") < rep.per_step[k - 1].metrics.at("distance"));
    CHECK(rep.summary.at("reconstruction_failures") == 0);
}

TEST_CASE("norm stability for the unweighted shift and p = z - 0.5") {
    NormStabilityConfig cfg;
    cfg.weight = WeightSequence::unweighted();
    cfg.roots = {Complex(0.5)};
    cfg.n = 120;
    for (auto kind : {PerturbationKind::dense_random, PerturbationKind::weight_jitter}) {
        const auto rep = norm_stability_run(cfg, plan_of(kind, halving(1e-3, 6), 3));
        CHECK(rep.verdict == Verdict::pass);
    }
}

TEST_CASE("one eps gives an inconclusive verdict") {
    NormStabilityConfig cfg;
    cfg.n = 60;
    const auto rep = norm_stability_run(cfg, plan_of(PerturbationKind::dense_random, {1e-4}));
    CHECK(rep.verdict == Verdict::inconclusive);
    CHECK(std::isnan(rep.fitted_slope));
    CHECK(rep.per_step.size() == 1);
}

TEST_CASE("norm stability rejects compact zeroing") {
    auto plan = plan_of(PerturbationKind::compact_zeroing, {1.0});
    plan.zero_set = {1};
    CHECK_THROWS_AS(norm_stability_run(NormStabilityConfig{}, plan), InvalidArgument);
}

TEST_CASE("semicontinuity with an unperturbed sequence keeps the index") {
    SemicontinuityConfig cfg;
    cfg.zeros = {Complex(0.2, 0.1), Complex(-0.5)};
    cfg.n = 32;
    cfg.trials = 3;
    // eps this small leaves the weights bitwise unchanged, so S_n = T
    const auto rep = semicontinuity_run(cfg, plan_of(PerturbationKind::weight_jitter, {1e-300}));
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.summary.at("reference_index") == 1);
    CHECK(rep.per_step[0].metrics.at("min_index") == 1.0);
    CHECK(rep.per_step[0].metrics.at("accepted_trials") == 3.0);
}

TEST_CASE("semicontinuity under weight jitter") {
    SemicontinuityConfig cfg;
    cfg.weight = WeightSequence::bergman();
    cfg.copies = 2;
    cfg.zeros = {Complex(0.3), Complex(0.1, -0.4)};
    cfg.n = 24;
    cfg.trials = 10;
    const auto rep = semicontinuity_run(cfg, plan_of(PerturbationKind::weight_jitter, halving(0.5, 6)));
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.summary.at("reference_index") == 2);
    CHECK(rep.summary.at("violating_trials") == 0);
    for (const auto& step : rep.per_step) CHECK(step.metrics.at("min_index") >= 2.0);
}

TEST_CASE("semicontinuity rejects a window that is not bounded below") {
    SemicontinuityConfig cfg;
    cfg.weight = WeightSequence::from_omega({1.0, 1.0, 1000.0, 1000.0, 1000.0, 1000.0, 1000.0, 1000.0});
    cfg.n = 6;
    // alpha_1 = 1000, others 1: bounded below
    CHECK_NOTHROW(semicontinuity_run(cfg, plan_of(PerturbationKind::weight_jitter, {1e-3})));
    cfg.weight = WeightSequence::from_omega({1.0, 100.0, 100.0, 100.0, 100.0, 100.0, 1.0, 1.0});
    CHECK_THROWS_AS(semicontinuity_run(cfg, plan_of(PerturbationKind::weight_jitter, {1e-3})), InvalidArgument);
}

TEST_CASE("random zero sets respect the requested shape") {
    const auto sets = random_zero_sets(30, 11);
    REQUIRE(sets.size() == 30);
    for (const auto& s : sets) {
        CHECK(s.size() >= 1);
        CHECK(s.size() <= 5);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(std::abs(s[i]) <= 0.8);
            for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(s[i] - s[j]) >= 1e-2);
        }
    }
    CHECK(random_zero_sets(30, 11) == sets);
    CHECK(random_zero_sets(30, 12) != sets);
}

TEST_CASE("beurling index sweep gives index one") {
    const auto rep = beurling_index_sweep(random_zero_sets(6, 5), 64);
    CHECK(rep.verdict == Verdict::pass);
    for (const auto& step : rep.per_step) {
        CHECK(step.metrics.at("index") == 1.0);
        CHECK(step.metrics.at("gap") >= 1e3);
    }
}

TEST_CASE("beurling index sweep preconditions") {
    CHECK_THROWS_AS(beurling_index_sweep({{Complex(0.9)}}, 32), InvalidArgument);
    CHECK_THROWS_AS(beurling_index_sweep({{}}, 32), InvalidArgument);
    CHECK_THROWS_AS(beurling_index_sweep({{Complex(0.1), Complex(0.1)}}, 32), InvalidArgument);
    const auto rep = beurling_index_sweep({{Complex(0.1), Complex(0.1 + 1e-4)}}, 32);
    CHECK(rep.per_step[0].metrics.at("ill_conditioned") == 1.0);
    CHECK(rep.verdict == Verdict::fail);
}

TEST_CASE("experiments are deterministic in the seed") {
    NormStabilityConfig cfg;
    cfg.n = 60;
    const auto plan = plan_of(PerturbationKind::dense_random, halving(1e-3, 3), 99);
    const auto a = norm_stability_run(cfg, plan);
    const auto b = norm_stability_run(cfg, plan);
    REQUIRE(a.per_step.size() == b.per_step.size());
    for (std::size_t k = 0; k < a.per_step.size(); ++k) CHECK(a.per_step[k].metrics == b.per_step[k].metrics);
    CHECK(a.inputs == b.inputs);

    SemicontinuityConfig sc;
    sc.zeros = {Complex(0.4)};
    sc.n = 16;
    sc.trials = 4;
    const auto jp = plan_of(PerturbationKind::weight_jitter, halving(0.1, 3), 5);
    const auto c = semicontinuity_run(sc, jp);
    const auto d = semicontinuity_run(sc, jp);
    for (std::size_t k = 0; k < c.per_step.size(); ++k) CHECK(c.per_step[k].metrics == d.per_step[k].metrics);
}

TEST_CASE("compact zeroing of every tenth bergman weight") {
    auto plan = plan_of(PerturbationKind::compact_zeroing, {1.0});
    plan.zero_set = {10, 20, 30};
    const std::size_t n = 40;
    const auto s = perturb(shift_window(WeightSequence::bergman(), n), plan, 1.0);
    const CMatrix sq = s.window.entries().topRows(static_cast<Eigen::Index>(n));
    // blocks [0,10], [11,20], [21,30], [31,39]: each nilpotent of order <= 11
    CMatrix power = CMatrix::Identity(sq.rows(), sq.cols());
    for (int k = 0; k < 11; ++k) power = power * sq;
    CHECK(power.norm() == 0.0);
    const auto block = [](Eigen::Index i) { return i <= 10 ? Eigen::Index(0) : (i - 11) / 10 + 1; };
    for (Eigen::Index i = 0; i < sq.rows(); ++i)
        for (Eigen::Index j = 0; j < sq.cols(); ++j)
            if (sq(i, j) != Complex(0.0)) CHECK(block(i) == block(j));
    CHECK(s.distance == doctest::Approx(alpha_at(WeightSequence::bergman(), 30)));
}

TEST_CASE("semicontinuity on the whole space of two copies") {
    SemicontinuityConfig cfg;
    cfg.copies = 2;
    cfg.n = 20;
    cfg.trials = 10;
    const auto rep = semicontinuity_run(cfg, plan_of(PerturbationKind::weight_jitter, halving(0.1, 4)));
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.summary.at("reference_index") == 2);
    for (const auto& step : rep.per_step) {
        CHECK(step.metrics.at("min_index") == 2.0);
        CHECK(step.metrics.at("max_index") == 2.0);
    }
}
