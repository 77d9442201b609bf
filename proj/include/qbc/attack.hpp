// Synthesis of Alice's optimal commitment-phase attack.
//
// For commitments held as joint pure states psi0, psi1, any unitary u acting
// on Alice's factor alone achieves overlap |<psi1| (u tensor 1) |psi0>| =
// |tr(u C)| with C = M0 M1^dagger the cross-Gram matrix of the amplitude
// matrices. The maximum over unitaries is the trace norm of C, attained in
// closed form from the singular vectors of C. That maximum also equals the
// fidelity of Bob's reduced states, so the attack succeeds exactly to the
// extent the commitment conceals.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qbc/errors.hpp"
#include "qbc/linalg.hpp"
#include "qbc/qstate.hpp"

namespace qbc {

// A concrete Alice-side unitary together with the overlap it achieves.
struct CheatPlan {
    ComplexMatrix unitary;
    double achieved_overlap;     // |<psi1| (u tensor 1) |psi0>|, in [0, 1]
    double success_probability;  // achieved_overlap squared
    bool optimal;                // true when produced by the closed form

    CheatPlan(ComplexMatrix u, double overlap, bool is_optimal)
        : unitary(std::move(u)),
          achieved_overlap(overlap),
          success_probability(overlap * overlap),
          optimal(is_optimal) {
        if (!unitary.is_unitary(1e-9)) {
            throw NumericError("cheat plan requires a unitary matrix");
        }
        if (achieved_overlap < 0.0 || achieved_overlap > 1.0 + 1e-12) {
            throw NumericError("cheat overlap must lie in [0, 1]");
        }
    }
};

// Per-branch outcome of a common attack across a family of branches.
struct BranchDiagnostics {
    std::string omega_label;
    double delta;         // 1 - overlap the common unitary achieves on this branch
    double epsilon_solo;  // 1 - best overlap achievable on this branch alone

    BranchDiagnostics(std::string label, double d, double solo)
        : omega_label(std::move(label)), delta(d), epsilon_solo(solo) {
        if (delta < epsilon_solo - 1e-9) {
            throw NumericError("branch delta cannot beat the per-branch optimum");
        }
    }
};

// Cross-Gram matrix C = M0 M1^dagger (dim_a x dim_a).
inline ComplexMatrix cross_gram(const StateVector& psi0, const StateVector& psi1) {
    if (psi0.layout() != psi1.layout()) {
        throw ShapeError("cross_gram requires matching layouts");
    }
    return amplitude_matrix(psi0) * amplitude_matrix(psi1).adjoint();
}

namespace detail {

// Unitary maximizing |tr(u C)|: with C = W diag(sigma) V^dagger, take
// u = V_c W_c^dagger where V_c, W_c extend the singular-vector blocks above
// the rank cutoff to full unitaries. The completion is deterministic, so
// degenerate or rank-deficient C still yields a reproducible canonical choice.
inline std::pair<ComplexMatrix, double> maximizing_unitary(const ComplexMatrix& c) {
    SvdResult s = svd(c);
    const std::size_t n = c.rows();
    double sum = 0.0;
    for (double sigma : s.singular_values) {
        sum += sigma;
    }
    const double cutoff = s.singular_values.empty() ? 0.0 : 1e-12 * s.singular_values.front();
    std::size_t rank = 0;
    while (rank < s.singular_values.size() && s.singular_values[rank] > cutoff) {
        ++rank;
    }
    if (rank == 0) {
        // C is numerically zero; any unitary works, pick the identity.
        return {ComplexMatrix::identity(n), sum};
    }
    ComplexMatrix w_r(n, rank);
    ComplexMatrix v_r(n, rank);
    ComplexMatrix right_vectors = s.right_adjoint.adjoint(); // columns are right singular vectors
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < rank; ++k) {
            w_r(i, k) = s.left(i, k);
            v_r(i, k) = right_vectors(i, k);
        }
    }
    ComplexMatrix u = orthonormal_completion(v_r) * orthonormal_completion(w_r).adjoint();
    return {std::move(u), sum};
}

} // namespace detail

// Closed-form optimal attack for a single branch.
inline CheatPlan optimal_cheat_unitary(const StateVector& psi0, const StateVector& psi1) {
    auto [u, overlap] = detail::maximizing_unitary(cross_gram(psi0, psi1));
    return CheatPlan(std::move(u), std::min(overlap, 1.0), true);
}

// Overlap achieved by an explicit unitary, evaluated by direct contraction on
// the joint space (independent of the closed form above).
inline double cheat_success_probability(const StateVector& psi0, const StateVector& psi1,
                                        const ComplexMatrix& u) {
    if (psi0.layout() != psi1.layout()) {
        throw ShapeError("cheat evaluation requires matching layouts");
    }
    Complex overlap = inner_product(psi1, apply_alice_unitary(psi0, u));
    return std::min(std::norm(overlap), 1.0);
}

// The exact repairing unitary when the two commitments are perfectly
// concealing (Bob's reduced states equal). Throws NotConcealingError when the
// achievable overlap falls short of 1 by more than tol.
inline ComplexMatrix exact_hjw_unitary(const StateVector& psi0, const StateVector& psi1,
                                       double tol = 1e-9) {
    CheatPlan plan = optimal_cheat_unitary(psi0, psi1);
    if (plan.achieved_overlap < 1.0 - tol) {
        throw NotConcealingError(
            "states are not unitarily repairable within tolerance: best overlap " +
            std::to_string(plan.achieved_overlap));
    }
    return plan.unitary;
}

// One commitment branch drawn with known probability.
struct WeightedBranch {
    std::string omega_label;
    StateVector psi0;
    StateVector psi1;
    double weight;
};

struct CommonCheatResult {
    CheatPlan plan;
    std::vector<BranchDiagnostics> diagnostics;
    double epsilon_tilde; // 1 - overlap on the entangled pair
};

// Optimal single unitary against the entangled mixture of branches.
// psi0_ent / psi1_ent must decompose branch-by-branch over the ancilla factor
// as sqrt(weight_i) * branch_i, which this function verifies.
inline CommonCheatResult common_cheat_unitary(const StateVector& psi0_ent,
                                              const StateVector& psi1_ent,
                                              const std::vector<WeightedBranch>& branches) {
    if (psi0_ent.layout() != psi1_ent.layout()) {
        throw ShapeError("entangled states must share a layout");
    }
    const SystemLayout& layout = psi0_ent.layout();
    if (branches.empty()) {
        throw ValidationError("at least one branch is required");
    }
    if (layout.dim_anc != branches.size()) {
        throw ValidationError("ancilla dimension must equal the branch count");
    }
    double weight_sum = 0.0;
    for (const WeightedBranch& br : branches) {
        if (br.weight <= 0.0) {
            throw ValidationError("branch weights must be positive");
        }
        weight_sum += br.weight;
        SystemLayout expected(layout.dim_a, layout.dim_b, 1);
        if (br.psi0.layout() != expected || br.psi1.layout() != expected) {
            throw ValidationError("branch states do not match the entangled layout");
        }
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw ValidationError("branch weights must sum to one");
    }
    // Verify the claimed decomposition entrywise.
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const double root = std::sqrt(branches[i].weight);
        for (std::size_t a = 0; a < layout.dim_a; ++a) {
            for (std::size_t b = 0; b < layout.dim_b; ++b) {
                std::size_t flat = layout.flat(a, b, i);
                std::size_t branch_flat = a * layout.dim_b + b;
                if (std::abs(psi0_ent[flat] - root * branches[i].psi0[branch_flat]) > 1e-9 ||
                    std::abs(psi1_ent[flat] - root * branches[i].psi1[branch_flat]) > 1e-9) {
                    throw ValidationError(
                        "entangled states do not decompose over the given branches");
                }
            }
        }
    }

    auto [u, overlap] = detail::maximizing_unitary(cross_gram(psi0_ent, psi1_ent));
    CheatPlan plan(std::move(u), std::min(overlap, 1.0), true);
    CommonCheatResult out{plan, {}, 1.0 - plan.achieved_overlap};
    out.diagnostics.reserve(branches.size());
    for (const WeightedBranch& br : branches) {
        Complex ov = inner_product(br.psi1, apply_alice_unitary(br.psi0, plan.unitary));
        double delta = std::clamp(1.0 - std::abs(ov), 0.0, 1.0);
        double solo = 1.0 - optimal_cheat_unitary(br.psi0, br.psi1).achieved_overlap;
        out.diagnostics.emplace_back(br.omega_label, delta, std::max(solo, 0.0));
    }
    return out;
}

// Residual of the weighted-branch bound: epsilon_tilde - sum_i p_i delta_i.
// Mathematically this is always >= 0; a significantly negative residual
// signals an internal inconsistency.
inline double delta_bound_check(const std::vector<double>& weights,
                                const std::vector<double>& deltas, double epsilon_tilde) {
    if (weights.size() != deltas.size() || weights.empty()) {
        throw ValidationError("weights and deltas must be equal-length and non-empty");
    }
    double sum = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0 || weights[i] > 1.0) {
            throw ValidationError("weights must lie in (0, 1]");
        }
        if (deltas[i] < -1e-12 || deltas[i] > 1.0 + 1e-12) {
            throw ValidationError("deltas must lie in [0, 1]");
        }
        sum += weights[i];
        bound += weights[i] * deltas[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("weights must sum to one");
    }
    return epsilon_tilde - bound;
}

// Randomized search oracle for the best Alice-side unitary. Deliberately
// avoids the closed form: overlaps are evaluated by joint-space contraction,
// candidates come from Haar sampling followed by random two-coordinate
// rotations with an adaptive step. Deterministic for a fixed seed.
inline CheatPlan brute_force_unitary_oracle(const StateVector& psi0, const StateVector& psi1,
                                            std::size_t samples, std::size_t refine_steps,
                                            std::uint64_t seed) {
    if (psi0.layout() != psi1.layout()) {
        throw ShapeError("oracle requires matching layouts");
    }
    const std::size_t n = psi0.layout().dim_a;
    if (n > 4) {
        throw ShapeError("oracle supports Alice dimension at most 4");
    }
    if (samples == 0) {
        throw ValidationError("oracle needs at least one sample");
    }
    std::mt19937_64 rng(seed);

    auto overlap_of = [&](const ComplexMatrix& u) {
        return std::abs(inner_product(psi1, apply_alice_unitary(psi0, u)));
    };

    ComplexMatrix best = haar_random_unitary(n, rng);
    double best_val = overlap_of(best);
    for (std::size_t s = 1; s < samples; ++s) {
        ComplexMatrix cand = haar_random_unitary(n, rng);
        double val = overlap_of(cand);
        if (val > best_val) {
            best = cand;
            best_val = val;
        }
    }

    if (n > 1) {
        double step = 0.3;
        for (std::size_t it = 0; it < refine_steps; ++it) {
            // One refine step sweeps every coordinate plane with a fresh
            // random 2x2 Hermitian generator and a few trial step lengths.
            bool improved = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    double hx = detail::standard_normal(rng);
                    double hy = detail::standard_normal(rng);
                    double hp = detail::standard_normal(rng);
                    double hq = detail::standard_normal(rng);
                    for (double scale : {1.0, -1.0, 0.25, -0.25}) {
                        // exp(i t K) on the (p, q) block for
                        // K = [[hp, hx - i hy], [hx + i hy, hq]].
                        double t = step * scale;
                        double c0 = 0.5 * (hp + hq);
                        double dz = 0.5 * (hp - hq);
                        double mu = std::sqrt(dz * dz + hx * hx + hy * hy);
                        double cosm = std::cos(t * mu);
                        double sinc = mu > 1e-300 ? std::sin(t * mu) / mu : t;
                        Complex phase(std::cos(t * c0), std::sin(t * c0));
                        Complex gpp = phase * Complex(cosm, sinc * dz);
                        Complex gqq = phase * Complex(cosm, -sinc * dz);
                        Complex gpq = phase * Complex(sinc * hy, sinc * hx);
                        Complex gqp = phase * Complex(-sinc * hy, sinc * hx);
                        ComplexMatrix cand = best;
                        for (std::size_t i = 0; i < n; ++i) {
                            Complex cip = cand(i, p);
                            Complex ciq = cand(i, q);
                            cand(i, p) = cip * gpp + ciq * gqp;
                            cand(i, q) = cip * gpq + ciq * gqq;
                        }
                        double val = overlap_of(cand);
                        if (val > best_val) {
                            best = std::move(cand);
                            best_val = val;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            step = improved ? std::min(step * 1.3, 1.0) : std::max(step * 0.5, 1e-10);
        }
    }
    return CheatPlan(std::move(best), std::min(best_val, 1.0), false);
}

} // namespace qbc
