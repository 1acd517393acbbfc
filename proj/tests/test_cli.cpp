#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

#include "conegreen/cli.hpp"

using namespace conegreen;
using oracles::Rng;

TEST_CASE("parsing the worked example operators") {
    FuchsOperator a = parse_fuchs_operator("d^3 + t^-1 * d^2");
    REQUIRE(a.mu == 3);
    REQUIRE(conormal_symbol(a, 0).entry(0, 0) ==
            Polynomial({GaussianRational(0), GaussianRational(-1), GaussianRational(-2),
                        GaussianRational(-1)}));

    Bindings b{{"a", GaussianRational(Rational(3, 2))},
               {"b", GaussianRational(Rational(-2), Rational(1))}};
    FuchsOperator second = parse_fuchs_operator("d^2 + a*d + b", b);
    REQUIRE(second.mu == 2);
    REQUIRE(second.a(1).entry(0, 0) ==
            Polynomial({GaussianRational(1), GaussianRational(Rational(-3, 2))}));
}

TEST_CASE("theta and d formulations lower to the same operator") {
    // t^{-2}(theta(theta-1)) = d^2
    FuchsOperator via_theta = parse_fuchs_operator("t^-2 * (theta^2 - theta)");
    FuchsOperator via_d = parse_fuchs_operator("d^2");
    REQUIRE(unparse(via_theta) == unparse(via_d));
    REQUIRE(complete_symbol(via_theta) == complete_symbol(via_d));
}

TEST_CASE("matrix literals build systems") {
    FuchsOperator op = parse_fuchs_operator("[[1,0],[0,2]] * d + [[0,1],[1,0]]");
    REQUIRE(op.size == 2);
    REQUIRE(op.mu == 1);
    auto s0 = conormal_symbol(op, 0);
    REQUIRE(s0.coeff(1)(0, 0) == GaussianRational(-1));
    REQUIRE(s0.coeff(1)(1, 1) == GaussianRational(-2));
}

TEST_CASE("parse errors carry locations") {
    try {
        parse_operator("d +");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        REQUIRE(e.line == 1);
        REQUIRE(e.column == 4);
    }
    REQUIRE_THROWS_AS(parse_fuchs_operator("d^2 + a*d", {}), UnboundParameter);
    REQUIRE_THROWS_AS(parse_fuchs_operator("d^-1"), ParseError);
    REQUIRE_THROWS_AS(parse_fuchs_operator("t^-2 * d"), NotFuchsType);
}

TEST_CASE("unparse parse is idempotent on random operators") {
    Rng rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        auto [op, delta] = oracles::random_elliptic_operator(rng, 1, rng.pick(1, 3));
        (void)delta;
        std::string text = unparse(op);
        FuchsOperator back = parse_fuchs_operator(text);
        REQUIRE(back == op);
        REQUIRE(unparse(back) == text);
    }
}

namespace {

// random well-formed expression sources over the published grammar
std::string random_expression(Rng &rng, int depth) {
    if (depth == 0) {
        switch (rng.pick(0, 4)) {
        case 0: return "d";
        case 1: return "theta";
        case 2: return "t";
        case 3: return std::to_string(rng.pick(0, 7));
        default: return std::to_string(rng.pick(1, 5)) + "/" + std::to_string(rng.pick(1, 4));
        }
    }
    switch (rng.pick(0, 3)) {
    case 0: return random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1);
    case 1: return random_expression(rng, depth - 1) + " * " + random_expression(rng, depth - 1);
    case 2: return "(" + random_expression(rng, depth - 1) + ")^" + std::to_string(rng.pick(0, 2));
    default: return "-" + random_expression(rng, depth - 1);
    }
}

} // namespace

TEST_CASE("random well-formed expressions round trip through unparse and parse") {
    Rng rng(211);
    int done = 0;
    for (int trial = 0; trial < 120 && done < 25; ++trial) {
        std::string src = random_expression(rng, 3);
        FuchsOperator op;
        try {
            op = parse_fuchs_operator(src);
        } catch (const NotFuchsType &) {
            continue; // grammar admits non-Fuchs combinations
        }
        ++done;
        std::string canonical = unparse(op);
        FuchsOperator back = parse_fuchs_operator(canonical);
        REQUIRE(back == op);
        REQUIRE(unparse(back) == canonical);
    }
    REQUIRE(done == 25);
}

TEST_CASE("json operator round trip") {
    Bindings b{{"a", GaussianRational(Rational(3, 2))},
               {"b", GaussianRational(Rational(-2), Rational(1))}};
    FuchsOperator op = parse_fuchs_operator("d^2 + a*d + b", b);
    Json j = to_json(op);
    FuchsOperator back = fuchs_operator_from_json(j);
    REQUIRE(back == op);
    REQUIRE(to_json(back) == j);
}

TEST_CASE("green report structured form round trips") {
    JobConfig cfg;
    cfg.command = "green";
    cfg.operator_text = "d^3 + t^-1*d^2";
    cfg.delta = Rational(-1);
    cfg.delta_set = true;
    CommandResult r = run_command(cfg);
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    REQUIRE(j.at("kind") == "green_report");
    REQUIRE(j.at("verified") == true);
    auto terms = green_terms_from_json(j);
    REQUIRE(terms.size() == 4);
    // reassembling the text from the structured terms loses nothing
    std::string rebuilt = "[u,v]_A = ";
    for (size_t i = 0; i < terms.size(); ++i)
        rebuilt += detail::format_coefficient_term(terms[i].coefficient, terms[i].u_name,
                                                   terms[i].v_name, i == 0);
    REQUIRE(rebuilt == j.at("formula").get<std::string>());
}

TEST_CASE("symbols of a constant operator") {
    JobConfig cfg;
    cfg.command = "symbols";
    cfg.operator_text = "5";
    CommandResult r = run_command(cfg);
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.output);
    REQUIRE(j.at("mu") == 0);
    REQUIRE(j.at("terms").size() == 1);
    REQUIRE(j.at("terms").at(0).at("num").at(0).at(0).at(0) == "5");
}

TEST_CASE("commands are deterministic") {
    for (const char *cmd : {"symbols", "invert", "green"}) {
        JobConfig cfg;
        cfg.command = cmd;
        cfg.operator_text = "d^3 + t^-1*d^2";
        cfg.delta = Rational(-1);
        cfg.delta_set = true;
        CommandResult first = run_command(cfg);
        CommandResult second = run_command(cfg);
        REQUIRE(first.exit_code == 0);
        REQUIRE(first.output == second.output);
        REQUIRE(first.log == second.log);
    }
}

TEST_CASE("exit codes distinguish the error classes") {
    SECTION("parse error is 2") {
        JobConfig cfg;
        cfg.command = "symbols";
        cfg.operator_text = "d +";
        CommandResult r = run_command(cfg);
        REQUIRE(r.exit_code == 2);
        Json j = Json::parse(r.output);
        REQUIRE(j.at("error") == "ParseError");
        REQUIRE(j.at("line") == 1);
    }
    SECTION("precondition violation is 3") {
        JobConfig cfg;
        cfg.command = "green";
        cfg.operator_text = "d^3 + t^-1*d^2";
        cfg.delta = Rational(-3, 2); // puts a root on a shifted line
        cfg.delta_set = true;
        CommandResult r = run_command(cfg);
        REQUIRE(r.exit_code == 3);
        REQUIRE(Json::parse(r.output).at("error") == "PreconditionViolation");
    }
    SECTION("unsupported exponent field is 4") {
        JobConfig cfg;
        cfg.command = "basis";
        cfg.operator_text = "t^-2 * (theta^2 - 2)"; // indicial roots +-sqrt(2)
        cfg.delta = Rational(0);
        cfg.delta_set = true;
        CommandResult r = run_command(cfg);
        REQUIRE(r.exit_code == 4);
        REQUIRE(Json::parse(r.output).at("error") == "UnsupportedExponentField");
    }
    SECTION("missing operator is a parse error") {
        JobConfig cfg;
        cfg.command = "symbols";
        CommandResult r = run_command(cfg);
        REQUIRE(r.exit_code == 2);
    }
}

TEST_CASE("verify suites pass on the worked examples") {
    JobConfig cfg;
    cfg.command = "verify";
    cfg.operator_text = "d^3 + t^-1*d^2";
    cfg.delta = Rational(-1);
    cfg.delta_set = true;
    for (const char *suite : {"local", "global", "green", "all"}) {
        cfg.suite = suite;
        CommandResult r = run_command(cfg);
        INFO(r.log);
        REQUIRE(r.exit_code == 0);
        REQUIRE(Json::parse(r.output).at("ok") == true);
    }
    JobConfig cfg2;
    cfg2.command = "verify";
    cfg2.operator_text = "d^2 + a*d + b";
    cfg2.bindings = {{"a", GaussianRational(Rational(3, 2))},
                     {"b", GaussianRational(Rational(-2), Rational(1))}};
    cfg2.delta = Rational(0);
    cfg2.delta_set = true;
    cfg2.suite = "all";
    CommandResult r2 = run_command(cfg2);
    INFO(r2.log);
    REQUIRE(r2.exit_code == 0);
}

TEST_CASE("depth cap is honored") {
    JobConfig cfg;
    cfg.command = "basis";
    cfg.operator_text = "d^3 + t^-1*d^2";
    cfg.delta = Rational(-1);
    cfg.delta_set = true;
    cfg.depth = 99;
    CommandResult r = run_command(cfg);
    REQUIRE(r.exit_code == 3);
    setenv("CONE_GREEN_MAX_DEPTH", "120", 1);
    CommandResult lifted = run_command(cfg);
    unsetenv("CONE_GREEN_MAX_DEPTH");
    REQUIRE(lifted.exit_code == 0);
}
