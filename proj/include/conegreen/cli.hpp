#pragma once

#include <cstdlib>
#include <functional>
#include <sstream>

#include "conegreen/json_io.hpp"

namespace conegreen {

struct JobConfig {
    std::string command;       // symbols | invert | basis | green | verify
    std::string operator_text; // DSL source; empty when operator_json is set
    Json operator_json;        // alternative JSON input
    Bindings bindings;
    Rational delta = Rational(0);
    bool delta_set = false;
    int depth = -1; // basis depth; defaults to mu
    int terms = -1; // inverse terms; defaults to 2*mu
    std::string suite = "all";
};

struct CommandResult {
    int exit_code = 0;
    std::string output; // byte-stable JSON artifact
    std::string log;    // stable human-readable lines
};

namespace detail {

inline int max_depth_cap() {
    if (const char *env = std::getenv("CONE_GREEN_MAX_DEPTH")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 16;
}

inline FuchsOperator resolve_operator(const JobConfig &cfg) {
    if (!cfg.operator_json.is_null()) {
        if (cfg.operator_json.value("kind", "") == "fuchs_operator")
            return fuchs_operator_from_json(cfg.operator_json);
        if (cfg.operator_json.value("kind", "") == "expression") {
            Bindings b = cfg.bindings;
            if (cfg.operator_json.contains("bindings"))
                for (const auto &[k, v] : cfg.operator_json.at("bindings").items())
                    b[k] = gaussian_rational_from_string(v.get<std::string>());
            return parse_fuchs_operator(cfg.operator_json.at("source").get<std::string>(), b);
        }
        throw ParseError("unsupported operator record kind", 0, 0);
    }
    if (cfg.operator_text.empty()) throw ParseError("no operator given", 0, 0);
    return parse_fuchs_operator(cfg.operator_text, cfg.bindings);
}

struct SuiteRun {
    std::vector<std::pair<std::string, bool>> checks;
    void record(const std::string &name, bool ok) { checks.push_back({name, ok}); }
    bool run(const std::string &name, const std::function<bool()> &f) {
        bool ok = false;
        try {
            ok = f();
        } catch (const std::exception &) {
            ok = false;
        }
        record(name, ok);
        return ok;
    }
    bool all_ok() const {
        for (const auto &[n, ok] : checks)
            if (!ok) return false;
        return true;
    }
};

inline bool local_reconstruction_ok(const RationalMatrixFunction &f, const GaussianRational &p,
                                    const LocalType &primal, const LocalType &conj) {
    LaurentExpansion target = inverse(f).laurent_at(p, -1).principal_part();
    LaurentExpansion sum = LaurentExpansion::zero(p, -1, f.size(), f.size());
    for (size_t i = 0; i < primal.basis.size(); ++i)
        sum = sum + tensor_chain(primal.basis[i], conj.basis[i], p, -1).principal_part();
    return sum == target;
}

inline void run_local_suite(SuiteRun &run, const FuchsOperator &op) {
    MatrixPolynomial principal = conormal_symbol(op, 0);
    RationalMatrixFunction f{principal};
    auto roots = indicial_roots(principal);
    for (const auto &[p, mult] : roots) {
        std::string tag = "local[" + to_string(p) + "]";
        LocalType primal;
        run.run(tag + ".jordan", [&] {
            primal = jordan_chains(f, p);
            return primal.dimension() == mult;
        });
        LocalType conj;
        run.run(tag + ".conjugate", [&] {
            conj = conjugate_local_basis(f, p, primal);
            return local_reconstruction_ok(f, p, primal, conj);
        });
        run.run(tag + ".keldysh", [&] { return keldysh_check(f, p, primal, conj).empty(); });
        run.run(tag + ".pairing", [&] {
            for (size_t i = 0; i < primal.basis.size(); ++i)
                for (size_t j = 0; j < conj.basis.size(); ++j) {
                    int mi = primal.characteristic[i];
                    int mj = conj.characteristic[j];
                    for (int r = 0; r < mi; ++r)
                        for (int s = 0; s < mj; ++s) {
                            GaussianRational got = local_pairing(
                                f, p, primal.basis[i].shifted(r), conj.basis[j].shifted(s));
                            GaussianRational expect(i == j && r + s == mi - 1 ? 1 : 0);
                            if (got != expect) return false;
                        }
                }
            return true;
        });
    }
}

inline void run_global_suite(SuiteRun &run, const FuchsOperator &op, const WeightContext &w,
                             int depth) {
    CompleteMellinSymbol s = complete_symbol(op);
    CompleteMellinSymbol id = CompleteMellinSymbol::identity(op.size);
    run.run("global.mtp_unit", [&] { return mtp(s, id) == s && mtp(id, s) == s; });
    CompleteMellinSymbol r = adjoint_symbol(s, w);
    run.run("global.mtp_assoc",
            [&] { return mtp(mtp(s, r), s) == mtp(s, mtp(r, s)); });
    run.run("global.adjoint_involution", [&] { return adjoint_symbol(r, w) == s; });
    run.run("global.adjoint_antihom", [&] {
        return adjoint_symbol(mtp(s, s), w) == mtp(adjoint_symbol(s, w), adjoint_symbol(s, w));
    });
    run.run("global.homomorphism",
            [&] { return complete_symbol(compose(op, op)) == mtp(s, s); });
    run.run("global.inversion", [&] {
        MellinInverse inv(s);
        for (int l = 0; l <= 6; ++l) {
            RationalMatrixFunction acc = RationalMatrixFunction::zero(op.size);
            for (int j = 0; j <= l; ++j) {
                int k = l - j;
                if (k >= s.support()) continue;
                acc = acc +
                      inv.shifted_term(j).shift(GaussianRational(j)) * s.term(k).shift(GaussianRational(l));
            }
            RationalMatrixFunction expect =
                l == 0 ? RationalMatrixFunction::identity(op.size) : RationalMatrixFunction::zero(op.size);
            if (!(acc == expect)) return false;
        }
        return true;
    });
    StripBasis basis;
    run.run("global.strip_membership", [&] {
        basis = strip_basis(s, w, depth);
        for (const auto &v : basis.vectors) {
            // conditions reach down to the bottom of the computed window
            int lmax = v.levels() - 1 - v.level_of(v.gamma());
            for (int l = 0; l <= lmax; ++l)
                if (theta(v, s, l).value.pole_order() > 0) return false;
        }
        return true;
    });
    run.run("global.dimension_law", [&] {
        int expected = 0;
        Rational line = w.weight_line();
        for (const auto &[root, mult] : indicial_roots(conormal_symbol(op, 0)))
            if (root.re < line && root.re > line - depth) expected += mult;
        return basis.dimension() == expected;
    });
    run.run("global.properness", [&] { return properness_check(basis); });
    ConjugateBasis conj;
    run.run("global.fundamental", [&] {
        conj = conjugate_complete_basis(s, w, depth, basis);
        return verify_fundamental(s, w, basis, conj).empty();
    });
    run.run("global.keldysh", [&] {
        for (const auto &v : basis.vectors)
            for (int l0 = 0; l0 < v.levels(); ++l0) {
                GaussianRational p = v.anchor - GaussianRational(l0);
                if (!generalized_keldysh_check(s, w, basis, conj, p, 0, 0).empty()) return false;
            }
        return true;
    });
}

inline void run_green_suite(SuiteRun &run, const FuchsOperator &op, const WeightContext &w) {
    GreenReport report;
    run.run("green.theorem_main", [&] {
        report = verify_theorem_main(op, w);
        return report.verified;
    });
    run.run("green.minimal_part_vanishes", [&] {
        CompleteMellinSymbol s = complete_symbol(op);
        for (const auto &v : report.primal.basis.vectors) {
            SpecialVector deep = v;
            deep.anchor = v.anchor - GaussianRational(w.mu); // push below the strip
            for (const auto &psi : report.adjoint.basis.vectors)
                if (!boundary_pairing(s, w, deep, psi).is_zero()) return false;
        }
        return true;
    });
}

} // namespace detail

inline CommandResult run_command(const JobConfig &cfg) {
    CommandResult result;
    try {
        FuchsOperator op = detail::resolve_operator(cfg);
        int cap = detail::max_depth_cap();
        WeightContext w(cfg.delta, op.mu);
        int depth = cfg.depth > 0 ? cfg.depth : op.mu;
        if (depth > cap)
            throw PreconditionViolation("depth exceeds CONE_GREEN_MAX_DEPTH");
        if (cfg.command == "symbols") {
            Json out = to_json(complete_symbol(op));
            out["operator"] = to_json(op);
            out["canonical_form"] = unparse(op);
            result.output = out.dump(2) + "\n";
        } else if (cfg.command == "invert") {
            CompleteMellinSymbol s = complete_symbol(op);
            int terms = cfg.terms >= 0 ? cfg.terms : 2 * op.mu;
            if (terms > 4 * cap) throw PreconditionViolation("term count exceeds the depth cap");
            MellinInverse inv(s);
            Json jterms = Json::array();
            for (int k = 0; k <= terms; ++k) {
                Json t = to_json(inv.term(k));
                t["shifted"] = to_json(inv.shifted_term(k));
                Json residues = Json::array();
                for (const auto &[pole, res] : residue_table(inv, k))
                    residues.push_back(Json{{"pole", to_string(pole)}, {"residue", to_json(res)}});
                t["residues_shifted"] = residues;
                jterms.push_back(t);
            }
            Json out{{"schema", schema_tag}, {"kind", "inverse_symbol"},
                     {"mu", -op.mu},         {"size", op.size},
                     {"terms", jterms}};
            result.output = out.dump(2) + "\n";
        } else if (cfg.command == "basis") {
            if (!cfg.delta_set) throw PreconditionViolation("basis requires --delta");
            CompleteMellinSymbol s = complete_symbol(op);
            StripBasis basis = strip_basis(s, w, depth);
            Json out = to_json(basis);
            ConjugateBasis conj = conjugate_complete_basis(s, w, depth, basis);
            out["conjugate"] = to_json(conj.basis);
            Json tau = Json::array();
            for (int t : conj.tau_star) tau.push_back(t + 1);
            out["tau_star"] = tau;
            result.output = out.dump(2) + "\n";
        } else if (cfg.command == "green") {
            if (!cfg.delta_set) throw PreconditionViolation("green requires --delta");
            GreenReport report = verify_theorem_main(op, w);
            result.output = to_json(report).dump(2) + "\n";
            result.log = report.formula + "\n";
            if (!report.verified) {
                result.exit_code = int(ExitCode::verification);
                return result;
            }
        } else if (cfg.command == "verify") {
            detail::SuiteRun run;
            if (cfg.suite == "local" || cfg.suite == "all") detail::run_local_suite(run, op);
            if (cfg.suite == "global" || cfg.suite == "all")
                detail::run_global_suite(run, op, w, depth);
            if (cfg.suite == "green" || cfg.suite == "all") detail::run_green_suite(run, op, w);
            if (run.checks.empty()) throw PreconditionViolation("unknown verify suite: " + cfg.suite);
            Json checks = Json::array();
            std::ostringstream log;
            for (const auto &[name, ok] : run.checks) {
                checks.push_back(Json{{"check", name}, {"ok", ok}});
                log << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
            }
            Json out{{"schema", schema_tag},
                     {"kind", "verify_report"},
                     {"suite", cfg.suite},
                     {"ok", run.all_ok()},
                     {"checks", checks}};
            result.output = out.dump(2) + "\n";
            result.log = log.str();
            if (!run.all_ok()) result.exit_code = int(ExitCode::verification);
        } else {
            throw ParseError("unknown command: " + cfg.command, 0, 0);
        }
    } catch (const ParseError &e) {
        result.exit_code = int(ExitCode::parse);
        result.output = error_record("ParseError", e.what(), e.line, e.column).dump(2) + "\n";
    } catch (const UnboundParameter &e) {
        result.exit_code = int(ExitCode::parse);
        result.output = error_record("UnboundParameter", e.what()).dump(2) + "\n";
    } catch (const NotFuchsType &e) {
        result.exit_code = int(ExitCode::precondition);
        result.output = error_record("NotFuchsType", e.what()).dump(2) + "\n";
    } catch (const SingularSymbol &e) {
        result.exit_code = int(ExitCode::precondition);
        result.output = error_record("SingularSymbol", e.what()).dump(2) + "\n";
    } catch (const PreconditionViolation &e) {
        result.exit_code = int(ExitCode::precondition);
        result.output = error_record("PreconditionViolation", e.what()).dump(2) + "\n";
    } catch (const UnsupportedExponentField &e) {
        result.exit_code = int(ExitCode::unsupported_exponent_field);
        result.output = error_record("UnsupportedExponentField", e.what()).dump(2) + "\n";
    } catch (const DegenerateBasis &e) {
        result.exit_code = int(ExitCode::verification);
        result.output = error_record("DegenerateBasis", e.what()).dump(2) + "\n";
    }
    return result;
}

} // namespace conegreen
