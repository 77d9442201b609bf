#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qbc/attack.hpp"
#include "qbc/errors.hpp"
#include "qbc/qstate.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using qbc::Complex;
using qbc::ComplexMatrix;
using qbc::StateVector;
using qbc::SystemLayout;

namespace {

// Entangled pair for the two-branch flip/identity protocol at weight p:
//   branch 1: psi0 = |0>, psi1 = |1>    branch 2: psi0 = psi1 = |0>.
struct FlipIdentityPair {
    StateVector psi0;
    StateVector psi1;
    std::vector<qbc::WeightedBranch> branches;
};

FlipIdentityPair make_flip_identity(double p) {
    SystemLayout base(2, 1, 1);
    SystemLayout joint(2, 1, 2);
    StateVector zero = qbc::basis_state(base, 0, 0);
    StateVector one = qbc::basis_state(base, 1, 0);
    double rp = std::sqrt(p), rq = std::sqrt(1.0 - p);
    std::vector<Complex> a0(4, Complex(0.0, 0.0)), a1(4, Complex(0.0, 0.0));
    a0[joint.flat(0, 0, 0)] = rp; // branch 1, psi0 = |0>
    a0[joint.flat(0, 0, 1)] = rq; // branch 2, psi0 = |0>
    a1[joint.flat(1, 0, 0)] = rp; // branch 1, psi1 = |1>
    a1[joint.flat(0, 0, 1)] = rq; // branch 2, psi1 = |0>
    return {StateVector(joint, std::move(a0)), StateVector(joint, std::move(a1)),
            {{"omega_1", zero, one, p}, {"omega_2", zero, zero, 1.0 - p}}};
}

} // namespace

TEST_CASE("cross_gram of a literal pair") {
    SystemLayout layout(2, 1, 1);
    ComplexMatrix c = qbc::cross_gram(qbc::basis_state(layout, 0, 0),
                                      qbc::basis_state(layout, 1, 0));
    REQUIRE(c.rows() == 2);
    CHECK(c(0, 0) == Complex(0.0, 0.0));
    CHECK(c(0, 1) == Complex(1.0, 0.0));
    CHECK(c(1, 0) == Complex(0.0, 0.0));
    CHECK(c(1, 1) == Complex(0.0, 0.0));
    CHECK_THROWS_AS(
        qbc::cross_gram(qbc::basis_state(layout, 0, 0), qbc::basis_state(SystemLayout(3, 1, 1), 0, 0)),
        qbc::ShapeError);
}

TEST_CASE("cheat plan validation") {
    CHECK_THROWS_AS(qbc::CheatPlan(ComplexMatrix(2, 2, {1.0, 1.0, 0.0, 1.0}), 0.5, true),
                    qbc::NumericError);
    qbc::CheatPlan plan(ComplexMatrix::identity(2), 0.25, false);
    CHECK(plan.success_probability == 0.25 * 0.25);
    CHECK_FALSE(plan.optimal);
    CHECK_THROWS_AS(qbc::BranchDiagnostics("w", 0.1, 0.5), qbc::NumericError);
}

TEST_CASE("optimal cheat unitary for the literal flip pair is the bit flip") {
    SystemLayout layout(2, 1, 1);
    qbc::CheatPlan plan =
        qbc::optimal_cheat_unitary(qbc::basis_state(layout, 0, 0), qbc::basis_state(layout, 1, 0));
    CHECK(plan.optimal);
    CHECK(std::abs(plan.achieved_overlap - 1.0) < 1e-12);
    CHECK(std::abs(plan.unitary(0, 1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(plan.unitary(1, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(plan.unitary(0, 0)) < 1e-12);
}

TEST_CASE("optimal overlap equals the trace-norm oracle and is realized by the unitary") {
    auto gen = testsupport::rng(211);
    for (int trial = 0; trial < 25; ++trial) {
        SystemLayout layout(2 + gen() % 3, 1 + gen() % 3, 1 + gen() % 2);
        StateVector psi0 = testsupport::random_state(layout, gen);
        StateVector psi1 = testsupport::random_state(layout, gen);
        qbc::CheatPlan plan = qbc::optimal_cheat_unitary(psi0, psi1);
        CHECK(plan.unitary.is_unitary(1e-10));
        double reference = oracle::trace_norm(oracle::from(qbc::cross_gram(psi0, psi1)));
        // The oracle squares the matrix before diagonalizing, so zero singular
        // values of a rank-deficient cross-Gram surface as sqrt(noise) ~ 1e-8.
        CHECK(std::abs(plan.achieved_overlap - std::min(reference, 1.0)) < 1e-7);
        // The returned unitary actually achieves the claimed overlap.
        double realized =
            std::abs(oracle::joint_overlap(psi1, oracle::from(plan.unitary), psi0));
        CHECK(std::abs(realized - plan.achieved_overlap) < 1e-9);
        // Keystone: the best overlap equals the fidelity of Bob's views.
        double f = qbc::fidelity(qbc::partial_trace_alice(psi0), qbc::partial_trace_alice(psi1));
        CHECK(std::abs(plan.achieved_overlap - f) < 1e-9);
    }
}

TEST_CASE("cheat_success_probability evaluates by contraction") {
    SystemLayout layout(2, 1, 1);
    ComplexMatrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
    double p = qbc::cheat_success_probability(qbc::basis_state(layout, 0, 0),
                                              qbc::basis_state(layout, 1, 0), x);
    CHECK(std::abs(p - 1.0) < 1e-12);
    CHECK_THROWS_AS(qbc::cheat_success_probability(qbc::basis_state(layout, 0, 0),
                                                   qbc::basis_state(layout, 1, 0),
                                                   ComplexMatrix(2, 2, {1.0, 1.0, 0.0, 1.0})),
                    qbc::NumericError);
}

TEST_CASE("exact_hjw_unitary repairs unitarily related purifications") {
    auto gen = testsupport::rng(221);
    for (int trial = 0; trial < 10; ++trial) {
        SystemLayout layout(2 + gen() % 3, 1 + gen() % 3, 1);
        StateVector psi0 = testsupport::random_state(layout, gen);
        ComplexMatrix u = qbc::haar_random_unitary(layout.dim_a, gen);
        StateVector psi1 = qbc::apply_alice_unitary(psi0, u);
        ComplexMatrix repair = qbc::exact_hjw_unitary(psi0, psi1);
        double overlap =
            std::abs(oracle::joint_overlap(psi1, oracle::from(repair), psi0));
        CHECK(overlap >= 1.0 - 1e-9);
    }
    SystemLayout layout(2, 2, 1);
    // |00> and a state with a different Bob marginal cannot be repaired.
    StateVector biased = StateVector::normalized(
        layout, {std::sqrt(0.9), std::sqrt(0.1), 0.0, 0.0});
    CHECK_THROWS_AS(qbc::exact_hjw_unitary(qbc::basis_state(layout, 0, 0), biased),
                    qbc::NotConcealingError);
}

TEST_CASE("common cheat unitary on the flip/identity pair is the Hadamard") {
    FlipIdentityPair fixture = make_flip_identity(0.5);
    qbc::CommonCheatResult result =
        qbc::common_cheat_unitary(fixture.psi0, fixture.psi1, fixture.branches);

    // Entangled overlap sqrt(1/2); per-branch optima are both perfect.
    CHECK(std::abs(result.plan.achieved_overlap - 0.7071067811865476) < 1e-12);
    CHECK(std::abs(result.epsilon_tilde - 0.29289321881345254) < 1e-12);
    REQUIRE(result.diagnostics.size() == 2);
    for (const qbc::BranchDiagnostics& diag : result.diagnostics) {
        CHECK(std::abs(diag.delta - 0.29289321881345254) < 1e-10);
        CHECK(diag.epsilon_solo < 1e-12);
    }
    // Canonical maximizer: the Hadamard.
    const double h = std::sqrt(0.5);
    CHECK(std::abs(result.plan.unitary(0, 0) - Complex(h, 0.0)) < 1e-9);
    CHECK(std::abs(result.plan.unitary(0, 1) - Complex(h, 0.0)) < 1e-9);
    CHECK(std::abs(result.plan.unitary(1, 0) - Complex(h, 0.0)) < 1e-9);
    CHECK(std::abs(result.plan.unitary(1, 1) - Complex(-h, 0.0)) < 1e-9);
    // The weighted bound holds with equality here.
    double bound = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        bound += fixture.branches[i].weight * result.diagnostics[i].delta;
    }
    CHECK(std::abs(result.epsilon_tilde - bound) < 1e-10);
}

TEST_CASE("common cheat unitary validates its inputs") {
    FlipIdentityPair fixture = make_flip_identity(0.5);
    std::vector<qbc::WeightedBranch> bad_weights = fixture.branches;
    bad_weights[0].weight = 0.75;
    CHECK_THROWS_AS(qbc::common_cheat_unitary(fixture.psi0, fixture.psi1, bad_weights),
                    qbc::ValidationError);

    std::vector<qbc::WeightedBranch> swapped = fixture.branches;
    std::swap(swapped[0], swapped[1]);
    CHECK_THROWS_AS(qbc::common_cheat_unitary(fixture.psi0, fixture.psi1, swapped),
                    qbc::ValidationError);

    std::vector<qbc::WeightedBranch> too_few(fixture.branches.begin(),
                                             fixture.branches.begin() + 1);
    too_few[0].weight = 1.0;
    CHECK_THROWS_AS(qbc::common_cheat_unitary(fixture.psi0, fixture.psi1, too_few),
                    qbc::ValidationError);
}

TEST_CASE("entangled overlap with generic weights matches the hand formula") {
    // trace norm of [[1-p, p], [0, 0]] is sqrt(p^2 + (1-p)^2).
    auto gen = testsupport::rng(231);
    for (int trial = 0; trial < 10; ++trial) {
        double p = 0.05 + 0.9 * qbc::detail::uniform_unit(gen);
        FlipIdentityPair fixture = make_flip_identity(p);
        qbc::CommonCheatResult result =
            qbc::common_cheat_unitary(fixture.psi0, fixture.psi1, fixture.branches);
        double expected = std::sqrt(p * p + (1.0 - p) * (1.0 - p));
        CHECK(std::abs(result.plan.achieved_overlap - expected) < 1e-11);
    }
}

TEST_CASE("delta_bound_check arithmetic and validation") {
    CHECK(qbc::delta_bound_check({1.0}, {0.25}, 0.25) == 0.0);
    CHECK(std::abs(qbc::delta_bound_check({0.5, 0.5}, {0.1, 0.3}, 0.25) - 0.05) < 1e-15);
    CHECK_THROWS_AS(qbc::delta_bound_check({0.5, 0.6}, {0.1, 0.1}, 0.1),
                    qbc::ValidationError);
    CHECK_THROWS_AS(qbc::delta_bound_check({1.0}, {1.5}, 0.1), qbc::ValidationError);
    CHECK_THROWS_AS(qbc::delta_bound_check({-0.5, 1.5}, {0.1, 0.1}, 0.1),
                    qbc::ValidationError);
    CHECK_THROWS_AS(qbc::delta_bound_check({1.0}, {0.1, 0.1}, 0.1), qbc::ValidationError);
}

TEST_CASE("brute force oracle is deterministic and never beats the closed form") {
    SystemLayout layout(2, 2, 1);
    auto gen = testsupport::rng(241);
    StateVector psi0 = testsupport::random_state(layout, gen);
    StateVector psi1 = testsupport::random_state(layout, gen);

    qbc::CheatPlan run1 = qbc::brute_force_unitary_oracle(psi0, psi1, 500, 50, 97);
    qbc::CheatPlan run2 = qbc::brute_force_unitary_oracle(psi0, psi1, 500, 50, 97);
    CHECK(run1.achieved_overlap == run2.achieved_overlap);
    CHECK(testsupport::max_entry_diff(run1.unitary, run2.unitary) == 0.0);
    CHECK_FALSE(run1.optimal);

    for (int trial = 0; trial < 5; ++trial) {
        SystemLayout random_layout(2 + gen() % 3, 1 + gen() % 2, 1);
        StateVector a = testsupport::random_state(random_layout, gen);
        StateVector b = testsupport::random_state(random_layout, gen);
        qbc::CheatPlan closed = qbc::optimal_cheat_unitary(a, b);
        qbc::CheatPlan searched = qbc::brute_force_unitary_oracle(a, b, 2000, 150, 7 + trial);
        CHECK(searched.achieved_overlap <= closed.achieved_overlap + 1e-9);
        CHECK(searched.achieved_overlap >= closed.achieved_overlap - 5e-3);
    }

    CHECK_THROWS_AS(qbc::brute_force_unitary_oracle(
                        testsupport::random_state(SystemLayout(5, 1, 1), gen),
                        testsupport::random_state(SystemLayout(5, 1, 1), gen), 10, 5, 1),
                    qbc::ShapeError);
}
