// Command-line front end.
//
// Subcommands: analyze (concealing metrics), attack (cheat-unitary
// synthesis), sweep (asymptotic family scans), verify (invariant checks).
// Output is byte-deterministic for a fixed invocation: JSON envelopes use
// canonical key order and shortest round-trip float rendering.
//
// Exit codes: 0 success, 2 input/usage error, 3 internal invariant
// violation, 4 verification failure.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp> // vendored CLI11
#include <json.hpp>  // vendored nlohmann/json

#include "qbc/attack.hpp"
#include "qbc/errors.hpp"
#include "qbc/linalg.hpp"
#include "qbc/protocol.hpp"
#include "qbc/protofile.hpp"
#include "qbc/qstate.hpp"
#include "qbc/version.hpp"

namespace qbc {

namespace cli_detail {

using nlohmann::json;

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string fmt(double x) { return json(x).dump(); }

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json unitary_to_json(const ComplexMatrix& u) {
    json entries = json::array();
    for (std::size_t i = 0; i < u.rows(); ++i) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            entries.push_back(json::array({u(i, j).real(), u(i, j).imag()}));
        }
    }
    json out;
    out["rows"] = u.rows();
    out["cols"] = u.cols();
    out["entries"] = std::move(entries);
    return out;
}

inline FamilyParams parse_params(const std::vector<std::string>& kv_pairs) {
    FamilyParams params;
    for (const std::string& kv : kv_pairs) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("--param expects key=value, got: " + kv);
        }
        std::string key = kv.substr(0, eq);
        if (params.count(key) != 0) {
            throw ValidationError("duplicate --param key: " + key);
        }
        params[key] = kv.substr(eq + 1);
    }
    return params;
}

struct ResolvedInput {
    ProtocolSpec spec;
    std::string digest;
    std::vector<std::string> warnings;
};

inline std::string family_digest_source(const std::string& family, const FamilyParams& params) {
    std::string src = "family=" + family;
    for (const auto& [key, value] : params) {
        src += ";" + key + "=" + value;
    }
    return src;
}

inline ResolvedInput resolve_input(const std::string& path, const std::string& family,
                                   const std::vector<std::string>& param_kv) {
    if (!path.empty() && !family.empty()) {
        throw ValidationError("give either an input file or --family, not both");
    }
    if (path.empty() && family.empty()) {
        throw ValidationError("an input file or --family is required");
    }
    if (!path.empty()) {
        if (!param_kv.empty()) {
            throw ValidationError("--param only applies together with --family");
        }
        std::string text = read_file(path);
        std::vector<std::string> warnings;
        ProtocolSpec spec = protofile::parse(text, &warnings);
        return {std::move(spec), fnv1a_hex(text), std::move(warnings)};
    }
    FamilyParams params = parse_params(param_kv);
    ProtocolSpec spec = family_instantiate(family, params);
    return {std::move(spec), fnv1a_hex(family_digest_source(family, params)), {}};
}

inline void emit_envelope(std::ostream& out, const std::string& command,
                          const std::string& digest, json results,
                          std::optional<std::uint64_t> seed) {
    json envelope;
    envelope["command"] = command;
    envelope["input_digest"] = digest;
    envelope["results"] = std::move(results);
    envelope["tool_version"] = kToolVersion;
    if (seed.has_value()) {
        envelope["seed"] = *seed;
    }
    out << envelope.dump(2) << "\n";
}

inline int emit_error(std::ostream& err, const std::string& code, const std::string& message,
                      int exit_code, std::optional<std::size_t> byte_offset = std::nullopt) {
    json e;
    e["error"]["code"] = code;
    e["error"]["message"] = message;
    if (byte_offset.has_value()) {
        e["error"]["byte_offset"] = *byte_offset;
    }
    err << e.dump(2) << "\n";
    return exit_code;
}

inline void print_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) {
            widths.resize(row.size(), 0);
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size()) {
                out << std::string(widths[i] - row[i].size() + 2, ' ');
            }
        }
        out << "\n";
    }
}

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) {
        err << "warning: " << w << "\n";
    }
}

// ----- analyze ---------------------------------------------------------

inline int cmd_analyze(const ResolvedInput& input, const std::string& format, double tol,
                       std::ostream& out, std::ostream& err) {
    const ProtocolSpec& spec = input.spec;
    ConcealingReport rep = concealing_report(spec);
    if (format == "table") {
        print_warnings(err, input.warnings);
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"branch", "fidelity", "trace_distance"});
        for (const BranchConcealing& br : rep.per_branch) {
            rows.push_back({br.omega_label, fmt(br.fidelity), fmt(br.trace_distance)});
        }
        print_aligned(out, rows);
        out << "entangled_fidelity        " << fmt(rep.entangled_fidelity) << "\n";
        out << "entangled_trace_distance  " << fmt(rep.entangled_trace_distance) << "\n";
        out << "epsilon                   " << fmt(rep.epsilon) << "\n";
        out << "perfectly_concealing      " << (rep.epsilon <= tol ? "true" : "false") << "\n";
        return 0;
    }
    json results;
    results["name"] = spec.name();
    json per_branch = json::array();
    for (const BranchConcealing& br : rep.per_branch) {
        json node;
        node["omega"] = br.omega_label;
        node["fidelity"] = br.fidelity;
        node["trace_distance"] = br.trace_distance;
        per_branch.push_back(std::move(node));
    }
    results["per_branch"] = std::move(per_branch);
    results["entangled_fidelity"] = rep.entangled_fidelity;
    results["entangled_trace_distance"] = rep.entangled_trace_distance;
    results["epsilon"] = rep.epsilon;
    results["perfectly_concealing"] = rep.epsilon <= tol;
    results["note"] = "metrics describe the receiver's reduced states at the end of the "
                      "commitment phase";
    if (!input.warnings.empty()) {
        results["warnings"] = input.warnings;
    }
    emit_envelope(out, "analyze", input.digest, std::move(results), std::nullopt);
    return 0;
}

// ----- attack ----------------------------------------------------------

inline int cmd_attack(const ResolvedInput& input, const std::string& format, double tol,
                      bool oracle_check, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
    const ProtocolSpec& spec = input.spec;
    BindingReport rep = binding_report(spec);
    if (rep.bound_residual < -1e-9) {
        return emit_error(err, "invariant-violation",
                          "weighted-branch bound violated: residual " +
                              fmt(rep.bound_residual),
                          3);
    }
    std::optional<CheatPlan> oracle;
    if (oracle_check) {
        auto [psi0, psi1] = entangle_choices(spec);
        oracle = brute_force_unitary_oracle(psi0, psi1, 10000, 200, seed);
    }
    if (format == "table") {
        print_warnings(err, input.warnings);
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"branch", "overlap", "success_probability", "delta", "epsilon_solo"});
        for (std::size_t i = 0; i < spec.branches().size(); ++i) {
            const CheatPlan& plan = rep.per_branch_plans[i];
            const BranchDiagnostics& diag = rep.diagnostics[i];
            rows.push_back({diag.omega_label, fmt(plan.achieved_overlap),
                            fmt(plan.success_probability), fmt(diag.delta),
                            fmt(diag.epsilon_solo)});
        }
        print_aligned(out, rows);
        out << "common_overlap              " << fmt(rep.common.achieved_overlap) << "\n";
        out << "common_success_probability  " << fmt(rep.common.success_probability) << "\n";
        out << "epsilon_tilde               " << fmt(rep.epsilon_tilde) << "\n";
        out << "bound_residual              " << fmt(rep.bound_residual) << "\n";
        if (oracle.has_value()) {
            out << "oracle_overlap              " << fmt(oracle->achieved_overlap) << "\n";
            out << "closed_form_minus_oracle    "
                << fmt(rep.common.achieved_overlap - oracle->achieved_overlap) << "\n";
        }
        return 0;
    }
    json results;
    results["name"] = spec.name();
    json per_branch = json::array();
    for (std::size_t i = 0; i < spec.branches().size(); ++i) {
        const CheatPlan& plan = rep.per_branch_plans[i];
        json node;
        node["omega"] = spec.branches()[i].omega_label;
        node["achieved_overlap"] = plan.achieved_overlap;
        node["success_probability"] = plan.success_probability;
        node["unitary"] = unitary_to_json(plan.unitary);
        per_branch.push_back(std::move(node));
    }
    results["per_branch"] = std::move(per_branch);
    json common;
    common["achieved_overlap"] = rep.common.achieved_overlap;
    common["success_probability"] = rep.common.success_probability;
    common["unitary"] = unitary_to_json(rep.common.unitary);
    results["common"] = std::move(common);
    json diagnostics = json::array();
    for (const BranchDiagnostics& diag : rep.diagnostics) {
        json node;
        node["omega"] = diag.omega_label;
        node["delta"] = diag.delta;
        node["epsilon_solo"] = diag.epsilon_solo;
        diagnostics.push_back(std::move(node));
    }
    results["diagnostics"] = std::move(diagnostics);
    results["epsilon_tilde"] = rep.epsilon_tilde;
    results["bound_residual"] = rep.bound_residual;
    results["common_attack_exact"] = rep.epsilon_tilde <= tol;
    results["note"] = "success probability is the squared overlap with the honest "
                      "post-commitment state of the revealed bit";
    if (oracle.has_value()) {
        json onode;
        onode["achieved_overlap"] = oracle->achieved_overlap;
        onode["success_probability"] = oracle->success_probability;
        onode["closed_form_minus_oracle"] =
            rep.common.achieved_overlap - oracle->achieved_overlap;
        results["oracle"] = std::move(onode);
    }
    if (!input.warnings.empty()) {
        results["warnings"] = input.warnings;
    }
    emit_envelope(out, "attack", input.digest, std::move(results),
                  oracle_check ? std::optional<std::uint64_t>(seed) : std::nullopt);
    return 0;
}

// ----- sweep -----------------------------------------------------------

inline std::vector<long> parse_n_values(const std::string& csv) {
    std::vector<long> out;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) {
        std::istringstream t(token);
        long v = 0;
        t >> v;
        if (t.fail() || !t.eof() || v < 1) {
            throw ValidationError("--n-values expects positive integers, got: " + token);
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError("--n-values must name at least one N");
    }
    return out;
}

inline int cmd_sweep(const std::string& family, const std::vector<std::string>& param_kv,
                     const std::string& n_values_csv, const std::string& format,
                     std::ostream& out, std::ostream& /*err*/) {
    if (family.empty()) {
        throw ValidationError("sweep requires --family");
    }
    FamilyParams params = parse_params(param_kv);
    std::vector<long> ns = parse_n_values(n_values_csv);
    std::vector<SweepPoint> points = sweep(family, params, ns);
    if (format == "csv") {
        out << "n,epsilon,cheat_probability,delta_max\n";
        for (const SweepPoint& p : points) {
            out << p.n << "," << fmt(p.epsilon) << "," << fmt(p.cheat_probability) << ","
                << fmt(p.delta_max) << "\n";
        }
        return 0;
    }
    if (format == "table") {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"n", "epsilon", "cheat_probability", "delta_max"});
        for (const SweepPoint& p : points) {
            rows.push_back({std::to_string(p.n), fmt(p.epsilon), fmt(p.cheat_probability),
                            fmt(p.delta_max)});
        }
        print_aligned(out, rows);
        return 0;
    }
    std::string digest_src = family_digest_source(family, params) + ";n_values=";
    std::vector<long> sorted_ns = ns;
    std::sort(sorted_ns.begin(), sorted_ns.end());
    for (std::size_t i = 0; i < sorted_ns.size(); ++i) {
        digest_src += (i == 0 ? "" : ",") + std::to_string(sorted_ns[i]);
    }
    json results;
    results["family"] = family;
    json jpoints = json::array();
    for (const SweepPoint& p : points) {
        json node;
        node["n"] = p.n;
        node["epsilon"] = p.epsilon;
        node["cheat_probability"] = p.cheat_probability;
        node["delta_max"] = p.delta_max;
        jpoints.push_back(std::move(node));
    }
    results["points"] = std::move(jpoints);
    emit_envelope(out, "sweep", fnv1a_hex(digest_src), std::move(results), std::nullopt);
    return 0;
}

// ----- verify ----------------------------------------------------------

struct VerifyCheck {
    std::string name;
    double threshold;
    double worst = 0.0;
};

inline void verify_accumulate(const ProtocolSpec& spec, std::vector<VerifyCheck>& checks) {
    auto& normalization = checks[0];
    auto& keystone = checks[1];
    auto& distance_bounds = checks[2];
    auto& attack_consistency = checks[3];
    auto& no_signalling = checks[4];
    auto& delta_bound = checks[5];
    auto& schmidt_reconstruction = checks[6];

    auto [psi0_ent, psi1_ent] = entangle_choices(spec);
    std::vector<std::pair<StateVector, StateVector>> pairs;
    for (const ProtocolBranch& br : spec.branches()) {
        pairs.emplace_back(br.psi0, br.psi1);
    }
    pairs.emplace_back(psi0_ent, psi1_ent);

    for (const auto& [psi0, psi1] : pairs) {
        normalization.worst = std::max(normalization.worst, std::abs(psi0.norm() - 1.0));
        normalization.worst = std::max(normalization.worst, std::abs(psi1.norm() - 1.0));

        DensityMatrix rho0 = partial_trace_alice(psi0);
        DensityMatrix rho1 = partial_trace_alice(psi1);
        double f = fidelity(rho0, rho1);
        double d = trace_distance(rho0, rho1);
        keystone.worst =
            std::max(keystone.worst, std::abs(trace_norm(cross_gram(psi0, psi1)) - f));
        distance_bounds.worst = std::max(distance_bounds.worst, (1.0 - f) - d);
        distance_bounds.worst =
            std::max(distance_bounds.worst, d - std::sqrt(std::max(0.0, 1.0 - f * f)));

        CheatPlan plan = optimal_cheat_unitary(psi0, psi1);
        StateVector attacked = apply_alice_unitary(psi0, plan.unitary);
        double realized = std::abs(inner_product(psi1, attacked));
        attack_consistency.worst =
            std::max(attack_consistency.worst, std::abs(realized - plan.achieved_overlap));

        // Alice's local action must leave Bob's reduced state untouched.
        ComplexMatrix marginal_shift = partial_trace_alice(attacked).matrix() - rho0.matrix();
        no_signalling.worst = std::max(no_signalling.worst, marginal_shift.max_abs());

        for (const StateVector* psi : {&psi0, &psi1}) {
            SchmidtDecomposition sd = schmidt(*psi);
            const SystemLayout& layout = psi->layout();
            double worst_entry = 0.0;
            for (std::size_t a = 0; a < layout.dim_a; ++a) {
                for (std::size_t j = 0; j < layout.bob_dim(); ++j) {
                    Complex rebuilt = 0.0;
                    for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
                        rebuilt += sd.coefficients[k] * sd.alice_basis(a, k) * sd.bob_basis(j, k);
                    }
                    worst_entry = std::max(worst_entry,
                                           std::abs(rebuilt - (*psi)[a * layout.bob_dim() + j]));
                }
            }
            schmidt_reconstruction.worst = std::max(schmidt_reconstruction.worst, worst_entry);
        }
    }

    BindingReport rep = binding_report(spec);
    delta_bound.worst = std::max(delta_bound.worst, -rep.bound_residual);
}

inline ProtocolSpec random_protocol_spec(std::mt19937_64& rng) {
    std::size_t dim_a = 2 + rng() % 3;
    std::size_t dim_b = 1 + rng() % 3;
    std::size_t n_branches = 1 + rng() % 3;
    SystemLayout layout(dim_a, dim_b, 1);
    std::vector<ProtocolBranch> branches;
    std::vector<double> weights(n_branches, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_branches; ++i) {
        weights[i] = 0.1 + detail::uniform_unit(rng);
        sum += weights[i];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n_branches; ++i) {
        weights[i] /= sum;
        acc += weights[i];
    }
    weights[n_branches - 1] = 1.0 - acc; // exact unit sum
    for (std::size_t i = 0; i < n_branches; ++i) {
        std::vector<Complex> a0(layout.total()), a1(layout.total());
        for (std::size_t k = 0; k < layout.total(); ++k) {
            a0[k] = detail::complex_normal(rng);
            a1[k] = detail::complex_normal(rng);
        }
        branches.push_back({"omega_" + std::to_string(i + 1),
                            StateVector::normalized(layout, std::move(a0)),
                            StateVector::normalized(layout, std::move(a1))});
    }
    return ProtocolSpec("fuzz", layout, std::move(branches), std::move(weights));
}

inline int cmd_verify(const std::string& path, const std::string& family,
                      const std::vector<std::string>& param_kv, long fuzz, std::uint64_t seed,
                      double tol, std::ostream& out, std::ostream& err) {
    if (path.empty() && family.empty() && fuzz <= 0) {
        throw ValidationError("verify needs an input file, --family, or --fuzz");
    }
    std::vector<VerifyCheck> checks = {
        {"normalization", 1e-9},   {"keystone_identity", 1e-8},
        {"distance_bounds", 1e-9}, {"attack_consistency", 1e-8},
        {"no_signalling", 1e-9},   {"delta_bound", 1e-9},
        {"schmidt_reconstruction", 1e-9},
    };
    for (VerifyCheck& c : checks) {
        c.threshold = std::max(c.threshold, tol);
    }
    std::size_t n_specs = 0;
    if (!path.empty() || !family.empty()) {
        ResolvedInput input = resolve_input(path, family, param_kv);
        print_warnings(err, input.warnings);
        verify_accumulate(input.spec, checks);
        ++n_specs;
    }
    if (fuzz > 0) {
        std::mt19937_64 rng(seed);
        for (long i = 0; i < fuzz; ++i) {
            verify_accumulate(random_protocol_spec(rng), checks);
            ++n_specs;
        }
    }
    bool all_pass = true;
    for (const VerifyCheck& c : checks) {
        bool pass = c.worst <= c.threshold;
        all_pass = all_pass && pass;
        out << (pass ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.worst)
            << " threshold=" << fmt(c.threshold) << "\n";
    }
    out << (all_pass ? "RESULT PASS" : "RESULT FAIL") << " checks=" << checks.size()
        << " specs=" << n_specs << "\n";
    return all_pass ? 0 : 4;
}

} // namespace cli_detail

// Runs the tool on `args` (program name excluded). Writes results to `out`
// and diagnostics to `err`; returns the process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"quantum bit commitment analysis toolkit"};
    app.name("qbc");
    app.require_subcommand(1);

    std::string an_path, an_family, an_format = "json";
    std::vector<std::string> an_params;
    double an_tol = 1e-9;
    CLI::App* analyze = app.add_subcommand("analyze", "concealing metrics of a protocol");
    analyze->add_option("input", an_path, "protocol document (.qbc.json)");
    analyze->add_option("--family", an_family, "builtin protocol family");
    analyze->add_option("--param", an_params, "family parameter key=value (repeatable)");
    analyze->add_option("--format", an_format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    analyze->add_option("--tol", an_tol, "tolerance for boolean classifications");

    std::string at_path, at_family, at_format = "json";
    std::vector<std::string> at_params;
    double at_tol = 1e-9;
    bool at_oracle = false;
    std::uint64_t at_seed = 0;
    CLI::App* attack = app.add_subcommand("attack", "synthesize the optimal cheat unitary");
    attack->add_option("input", at_path, "protocol document (.qbc.json)");
    attack->add_option("--family", at_family, "builtin protocol family");
    attack->add_option("--param", at_params, "family parameter key=value (repeatable)");
    attack->add_option("--format", at_format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    attack->add_option("--tol", at_tol, "tolerance for boolean classifications");
    attack->add_flag("--oracle-check", at_oracle,
                     "cross-check the closed form against a randomized search");
    attack->add_option("--seed", at_seed, "seed for the randomized search");

    std::string sw_family, sw_n_values, sw_format = "json";
    std::vector<std::string> sw_params;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "scan a family over N");
    sweep_cmd->add_option("--family", sw_family, "builtin protocol family")->required();
    sweep_cmd->add_option("--param", sw_params, "family parameter key=value (repeatable)");
    sweep_cmd->add_option("--n-values", sw_n_values, "comma-separated list of N values")
        ->required();
    sweep_cmd->add_option("--format", sw_format, "output format")
        ->check(CLI::IsMember({"json", "table", "csv"}));

    std::string ve_path, ve_family;
    std::vector<std::string> ve_params;
    long ve_fuzz = 0;
    std::uint64_t ve_seed = 0;
    double ve_tol = 1e-9;
    CLI::App* verify = app.add_subcommand("verify", "check library invariants on protocols");
    verify->add_option("input", ve_path, "protocol document (.qbc.json)");
    verify->add_option("--family", ve_family, "builtin protocol family");
    verify->add_option("--param", ve_params, "family parameter key=value (repeatable)");
    verify->add_option("--fuzz", ve_fuzz, "number of random protocols to check");
    verify->add_option("--seed", ve_seed, "seed for random protocols");
    verify->add_option("--tol", ve_tol, "override the per-invariant tolerance floor");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return emit_error(err, "usage-error", e.what(), 2);
    }

    try {
        if (analyze->parsed()) {
            ResolvedInput input = resolve_input(an_path, an_family, an_params);
            return cmd_analyze(input, an_format, an_tol, out, err);
        }
        if (attack->parsed()) {
            ResolvedInput input = resolve_input(at_path, at_family, at_params);
            return cmd_attack(input, at_format, at_tol, at_oracle, at_seed, out, err);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sw_family, sw_params, sw_n_values, sw_format, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(ve_path, ve_family, ve_params, ve_fuzz, ve_seed, ve_tol, out,
                              err);
        }
    } catch (const ParseError& e) {
        return emit_error(err, e.code(), e.what(), 2, e.byte_offset());
    } catch (const IoError& e) {
        return emit_error(err, "io-error", e.what(), 2);
    } catch (const ValidationError& e) {
        return emit_error(err, "validation-error", e.what(), 2);
    } catch (const NotConcealingError& e) {
        return emit_error(err, "not-concealing", e.what(), 2);
    } catch (const ShapeError& e) {
        return emit_error(err, "shape-error", e.what(), 2);
    } catch (const NumericError& e) {
        return emit_error(err, "numeric-error", e.what(), 2);
    } catch (const Error& e) {
        return emit_error(err, "error", e.what(), 2);
    }
    return emit_error(err, "usage-error", "a subcommand is required", 2);
}

} // namespace qbc
