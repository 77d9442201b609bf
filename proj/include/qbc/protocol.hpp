// Protocol specifications: weighted families of commitment branches, the
// entangled secret-choice construction, concealing/binding reports, builtin
// parameter families, and asymptotic sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qbc/attack.hpp"
#include "qbc/errors.hpp"
#include "qbc/linalg.hpp"
#include "qbc/qstate.hpp"

namespace qbc {

// One value of Bob's secret parameter with the two commitment states.
struct ProtocolBranch {
    std::string omega_label;
    StateVector psi0;
    StateVector psi1;
};

class ProtocolSpec {
public:
    ProtocolSpec(std::string name, SystemLayout layout, std::vector<ProtocolBranch> branches,
                 std::vector<double> weights,
                 std::map<std::string, std::string> metadata = {})
        : name_(std::move(name)),
          layout_(layout),
          branches_(std::move(branches)),
          weights_(std::move(weights)),
          metadata_(std::move(metadata)) {
        if (branches_.empty()) {
            throw ValidationError("protocol needs at least one branch");
        }
        if (weights_.size() != branches_.size()) {
            throw ValidationError("weight count must match branch count");
        }
        if (layout_.dim_anc != 1) {
            throw ValidationError("branch states carry no ancilla factor");
        }
        double sum = 0.0;
        std::set<std::string> labels;
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            if (weights_[i] <= 0.0) {
                throw ValidationError("branch weights must be positive");
            }
            sum += weights_[i];
            if (!labels.insert(branches_[i].omega_label).second) {
                throw ValidationError("duplicate branch label: " + branches_[i].omega_label);
            }
            if (branches_[i].psi0.layout() != layout_ || branches_[i].psi1.layout() != layout_) {
                throw ValidationError("branch state layout mismatch");
            }
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ValidationError("branch weights must sum to one");
        }
    }

    const std::string& name() const { return name_; }
    const SystemLayout& layout() const { return layout_; }
    const std::vector<ProtocolBranch>& branches() const { return branches_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }

private:
    std::string name_;
    SystemLayout layout_;
    std::vector<ProtocolBranch> branches_;
    std::vector<double> weights_;
    std::map<std::string, std::string> metadata_;
};

// Purified secret choice: Bob keeps an ancilla recording which branch was
// drawn, so the joint state for bit v is sum_i sqrt(p_i) psi_v_i |i>.
inline std::pair<StateVector, StateVector> entangle_choices(const ProtocolSpec& spec) {
    const SystemLayout& base = spec.layout();
    SystemLayout joint(base.dim_a, base.dim_b, spec.branches().size());
    std::vector<Complex> amps0(joint.total(), Complex(0.0, 0.0));
    std::vector<Complex> amps1(joint.total(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < spec.branches().size(); ++i) {
        const double root = std::sqrt(spec.weights()[i]);
        const ProtocolBranch& br = spec.branches()[i];
        for (std::size_t a = 0; a < base.dim_a; ++a) {
            for (std::size_t b = 0; b < base.dim_b; ++b) {
                std::size_t src = a * base.dim_b + b;
                std::size_t dst = joint.flat(a, b, i);
                amps0[dst] = root * br.psi0[src];
                amps1[dst] = root * br.psi1[src];
            }
        }
    }
    return {StateVector(joint, std::move(amps0)), StateVector(joint, std::move(amps1))};
}

struct BranchConcealing {
    std::string omega_label;
    double fidelity;
    double trace_distance;
};

struct ConcealingReport {
    std::vector<BranchConcealing> per_branch;
    double entangled_fidelity;
    double entangled_trace_distance;
    double epsilon; // 1 - entangled_fidelity
};

inline ConcealingReport concealing_report(const ProtocolSpec& spec) {
    ConcealingReport out;
    out.per_branch.reserve(spec.branches().size());
    for (const ProtocolBranch& br : spec.branches()) {
        DensityMatrix rho0 = partial_trace_alice(br.psi0);
        DensityMatrix rho1 = partial_trace_alice(br.psi1);
        out.per_branch.push_back(
            {br.omega_label, fidelity(rho0, rho1), trace_distance(rho0, rho1)});
    }
    auto [psi0, psi1] = entangle_choices(spec);
    DensityMatrix rho0 = partial_trace_alice(psi0);
    DensityMatrix rho1 = partial_trace_alice(psi1);
    out.entangled_fidelity = fidelity(rho0, rho1);
    out.entangled_trace_distance = trace_distance(rho0, rho1);
    out.epsilon = 1.0 - out.entangled_fidelity;
    return out;
}

struct BindingReport {
    std::vector<CheatPlan> per_branch_plans;
    CheatPlan common;
    std::vector<BranchDiagnostics> diagnostics;
    double epsilon_tilde;
    double bound_residual; // epsilon_tilde - sum_i p_i delta_i, >= 0 up to rounding
};

inline BindingReport binding_report(const ProtocolSpec& spec) {
    std::vector<CheatPlan> per_branch;
    per_branch.reserve(spec.branches().size());
    std::vector<WeightedBranch> weighted;
    weighted.reserve(spec.branches().size());
    for (std::size_t i = 0; i < spec.branches().size(); ++i) {
        const ProtocolBranch& br = spec.branches()[i];
        per_branch.push_back(optimal_cheat_unitary(br.psi0, br.psi1));
        weighted.push_back({br.omega_label, br.psi0, br.psi1, spec.weights()[i]});
    }
    auto [psi0, psi1] = entangle_choices(spec);
    CommonCheatResult common = common_cheat_unitary(psi0, psi1, weighted);
    std::vector<double> deltas;
    deltas.reserve(common.diagnostics.size());
    for (const BranchDiagnostics& d : common.diagnostics) {
        deltas.push_back(d.delta);
    }
    double residual = delta_bound_check(spec.weights(), deltas, common.epsilon_tilde);
    return BindingReport{std::move(per_branch), common.plan, std::move(common.diagnostics),
                         common.epsilon_tilde, residual};
}

struct SweepPoint {
    long n;
    double epsilon;            // concealing defect of the entangled pair
    double cheat_probability;  // common-attack success probability
    double delta_max;          // worst per-branch residual of the common attack
};

using FamilyParams = std::map<std::string, std::string>;

namespace detail {

inline double parse_param_double(const FamilyParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw ValidationError("missing family parameter: " + key);
    }
    std::istringstream in(it->second);
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof() || !std::isfinite(v)) {
        throw ValidationError("invalid value for family parameter " + key + ": " + it->second);
    }
    return v;
}

inline long parse_param_long(const FamilyParams& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw ValidationError("missing family parameter: " + key);
    }
    std::istringstream in(it->second);
    long v = 0;
    in >> v;
    if (in.fail() || !in.eof()) {
        throw ValidationError("invalid value for family parameter " + key + ": " + it->second);
    }
    return v;
}

inline std::vector<double> parse_param_double_list(const FamilyParams& params,
                                                   const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw ValidationError("missing family parameter: " + key);
    }
    std::vector<double> out;
    std::string token;
    std::istringstream in(it->second);
    while (std::getline(in, token, ',')) {
        std::istringstream t(token);
        double v = 0.0;
        t >> v;
        if (t.fail() || !t.eof() || !std::isfinite(v)) {
            throw ValidationError("invalid list value for family parameter " + key + ": " + token);
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError("family parameter " + key + " needs at least one value");
    }
    return out;
}

inline void reject_unknown_params(const FamilyParams& params,
                                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : params) {
        if (allowed.find(key) == allowed.end()) {
            throw ValidationError("unknown family parameter: " + key);
        }
    }
}

inline std::string branch_label(std::size_t i) {
    return "omega_" + std::to_string(i + 1);
}

// Branches indexed by a rotation angle of Bob's secret basis. Both
// commitments are the same maximally entangled pair expressed in the rotated
// basis; they differ by the Alice-side bit flip, so every branch conceals
// perfectly and a single flip repairs all of them at once.
inline ProtocolSpec make_perfect_secret_basis(const FamilyParams& params) {
    reject_unknown_params(params, {"angles", "weights", "N"});
    std::vector<double> angles = parse_param_double_list(params, "angles");
    std::vector<double> weights;
    if (params.count("weights") != 0) {
        weights = parse_param_double_list(params, "weights");
        if (weights.size() != angles.size()) {
            throw ValidationError("weights list must match angles list in length");
        }
    } else {
        weights.assign(angles.size(), 1.0 / static_cast<double>(angles.size()));
    }
    SystemLayout layout(2, 2, 1);
    const double root_half = std::sqrt(0.5);
    std::vector<ProtocolBranch> branches;
    branches.reserve(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double c = std::cos(angles[i]);
        double s = std::sin(angles[i]);
        // psi0 = (1 tensor V) |Phi+>, psi1 = (X tensor V) |Phi+> with
        // V = [[c, -s], [s, c]]; amplitude matrices V^T/sqrt(2) and X V^T/sqrt(2).
        std::vector<Complex> a0(4), a1(4);
        a0[layout.flat(0, 0, 0)] = root_half * c;
        a0[layout.flat(0, 1, 0)] = root_half * s;
        a0[layout.flat(1, 0, 0)] = root_half * -s;
        a0[layout.flat(1, 1, 0)] = root_half * c;
        a1[layout.flat(0, 0, 0)] = root_half * -s;
        a1[layout.flat(0, 1, 0)] = root_half * c;
        a1[layout.flat(1, 0, 0)] = root_half * c;
        a1[layout.flat(1, 1, 0)] = root_half * s;
        branches.push_back({branch_label(i), StateVector(layout, std::move(a0)),
                            StateVector(layout, std::move(a1))});
    }
    std::map<std::string, std::string> metadata;
    metadata["family"] = "perfect_secret_basis";
    for (const auto& [key, value] : params) {
        metadata["param_" + key] = value;
    }
    return ProtocolSpec("perfect_secret_basis", layout, std::move(branches), std::move(weights),
                        std::move(metadata));
}

// Single branch where the bit-1 commitment leaks a little: the overlap
// between Bob's views is cos(theta0 / sqrt(N)), closing as N grows.
inline ProtocolSpec make_imperfect_theta(const FamilyParams& params) {
    reject_unknown_params(params, {"theta0", "N"});
    double theta0 = parse_param_double(params, "theta0");
    long n = parse_param_long(params, "N");
    if (n < 1) {
        throw ValidationError("family parameter N must be a positive integer");
    }
    double angle = theta0 / std::sqrt(static_cast<double>(n));
    SystemLayout layout(2, 2, 1);
    std::vector<Complex> a0(4), a1(4);
    a0[layout.flat(0, 0, 0)] = 1.0;
    a1[layout.flat(0, 0, 0)] = std::cos(angle);
    a1[layout.flat(1, 1, 0)] = std::sin(angle);
    std::vector<ProtocolBranch> branches;
    branches.push_back({branch_label(0), StateVector(layout, std::move(a0)),
                        StateVector::normalized(layout, std::move(a1))});
    std::map<std::string, std::string> metadata;
    metadata["family"] = "imperfect_theta";
    for (const auto& [key, value] : params) {
        metadata["param_" + key] = value;
    }
    return ProtocolSpec("imperfect_theta", layout, std::move(branches), {1.0},
                        std::move(metadata));
}

// Two branches that each conceal perfectly but whose repairing unitaries
// differ (identity vs bit flip). No single unitary repairs both, and the
// entangled pair is no longer perfectly concealing.
inline ProtocolSpec make_omega_dependent_counterexample(const FamilyParams& params) {
    reject_unknown_params(params, {"p", "N"});
    double p = parse_param_double(params, "p");
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("family parameter p must lie strictly between 0 and 1");
    }
    SystemLayout layout(2, 1, 1);
    std::vector<ProtocolBranch> branches;
    // Branch 1: psi0 = |0>, psi1 = |1> on Alice; repaired by the bit flip.
    branches.push_back({branch_label(0), basis_state(layout, 0, 0), basis_state(layout, 1, 0)});
    // Branch 2: psi0 = psi1 = |0>; repaired by the identity.
    branches.push_back({branch_label(1), basis_state(layout, 0, 0), basis_state(layout, 0, 0)});
    std::map<std::string, std::string> metadata;
    metadata["family"] = "omega_dependent_counterexample";
    for (const auto& [key, value] : params) {
        metadata["param_" + key] = value;
    }
    return ProtocolSpec("omega_dependent_counterexample", layout, std::move(branches),
                        {p, 1.0 - p}, std::move(metadata));
}

} // namespace detail

inline ProtocolSpec family_instantiate(const std::string& family, const FamilyParams& params) {
    if (family == "perfect_secret_basis") {
        return detail::make_perfect_secret_basis(params);
    }
    if (family == "imperfect_theta") {
        return detail::make_imperfect_theta(params);
    }
    if (family == "omega_dependent_counterexample") {
        return detail::make_omega_dependent_counterexample(params);
    }
    throw ValidationError("unknown protocol family: " + family);
}

// Instantiates the family at each N (ascending) and reports the concealing
// defect against the common-attack success.
inline std::vector<SweepPoint> sweep(const std::string& family, const FamilyParams& params,
                                     std::vector<long> n_values) {
    if (n_values.empty()) {
        throw ValidationError("sweep needs at least one N value");
    }
    std::sort(n_values.begin(), n_values.end());
    for (long n : n_values) {
        if (n < 1) {
            throw ValidationError("sweep N values must be positive");
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(n_values.size());
    for (long n : n_values) {
        FamilyParams with_n = params;
        with_n["N"] = std::to_string(n);
        ProtocolSpec spec = family_instantiate(family, with_n);
        ConcealingReport conceal = concealing_report(spec);
        BindingReport bind = binding_report(spec);
        double delta_max = 0.0;
        for (const BranchDiagnostics& d : bind.diagnostics) {
            delta_max = std::max(delta_max, d.delta);
        }
        out.push_back({n, conceal.epsilon, bind.common.success_probability, delta_max});
    }
    return out;
}

} // namespace qbc
