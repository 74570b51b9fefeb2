#include "weavetex/builtin.hpp"
#include "weavetex/error.hpp"

#include "support.hpp"

#include <doctest.h>

#include <filesystem>

using namespace weavetex;

namespace {

std::string ev(const std::string& expr, const std::string& setup = "") {
    Environment env;
    builtin_exec(setup, env);
    return builtin_eval(expr, env);
}

ErrorCode ev_error(const std::string& expr) {
    try {
        Environment env;
        builtin_eval(expr, env);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an evaluation error for " << expr);
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("evaluator examples") {
    CHECK(ev("2+2") == "4");
    CHECK(ev("mod(7, 3)") == "1");
    CHECK(ev("10/4") == "\\frac{5}{2}");
    CHECK(ev("2^10") == "1024");
    CHECK(ev_error("1/0") == ErrorCode::DivisionByZero);
}

TEST_CASE("year arithmetic from the demo") {
    CHECK(ev("2009 % 42") == "35");
    CHECK(ev("mod(2009, 100)") == "9");
    CHECK(ev("Integer(mod(2009,\n100))^1") == "9");
}

TEST_CASE("arbitrary precision") {
    CHECK(ev("2^325 + 1") ==
          "68351585149469122636640694597425667667286544715412888638305331450311031224980497600734786781970433");
    CHECK(ev("-(2^64)") == "-18446744073709551616");
    CHECK(ev("(2^100) / (2^98)") == "4");
}

TEST_CASE("precedence and associativity") {
    CHECK(ev("2+3*4") == "14");
    CHECK(ev("(2+3)*4") == "20");
    CHECK(ev("2^3^2") == "512");
    CHECK(ev("-2^2") == "-4");
    CHECK(ev("2^-1") == "\\frac{1}{2}");
    CHECK(ev("10-4-3") == "3");
    CHECK(ev("12/2/3") == "2");
    CHECK(ev("7 % 4 * 2") == "6");
    CHECK(ev("+-+3") == "-3");
}

TEST_CASE("fractions render in lowest terms with a positive denominator") {
    CHECK(ev("6/-4") == "\\frac{-3}{2}");
    CHECK(ev("-6/4") == "\\frac{-3}{2}");
    CHECK(ev("1/3 + 1/6") == "\\frac{1}{2}");
    CHECK(ev("(1/2)^3") == "\\frac{1}{8}");
    CHECK(ev("0/5") == "0");
}

TEST_CASE("mod is Euclidean") {
    CHECK(ev("-7 % 3") == "2");
    CHECK(ev("mod(-7, 3)") == "2");
    CHECK(ev("7 % -3") == "1");
    CHECK(ev("mod(0, 5)") == "0");
    CHECK(ev_error("5 % 0") == ErrorCode::DivisionByZero);
    CHECK(ev_error("(1/2) % 3") == ErrorCode::Unsupported);
}

TEST_CASE("property: % agrees with mod and lies in [0, b)") {
    for (int b = 1; b <= 50; ++b) {
        for (int a = -50; a <= 50; ++a) {
            std::string pct = ev(std::to_string(a) + " % " + std::to_string(b));
            std::string call = ev("mod(" + std::to_string(a) + ", " + std::to_string(b) + ")");
            CHECK(pct == call);
            int r = std::stoi(pct);
            CHECK(r >= 0);
            CHECK(r < b);
            CHECK((a - r) % b == 0);
        }
    }
}

TEST_CASE("evaluation errors") {
    CHECK(ev_error("x + 1") == ErrorCode::UnboundIdentifier);
    CHECK(ev_error("sin(1)") == ErrorCode::UnboundIdentifier);
    CHECK(ev_error("a = 1") == ErrorCode::ParseError);
    CHECK(ev_error("1 +") == ErrorCode::ParseError);
    CHECK(ev_error("(1") == ErrorCode::ParseError);
    CHECK(ev_error("1.5") == ErrorCode::ParseError);
    CHECK(ev_error("") == ErrorCode::ParseError);
    CHECK(ev_error("mod(1)") == ErrorCode::ParseError);
    CHECK(ev_error("0^-1") == ErrorCode::DivisionByZero);
    CHECK(ev_error("2^(1/2)") == ErrorCode::Unsupported);
    CHECK(ev_error("2^1000000") == ErrorCode::Unsupported);
}

TEST_CASE("exec statements share one environment") {
    Environment env;
    builtin_exec("a = 2\nb = a^10; c = b - 1  # comment\n\n# whole-line comment\n", env);
    CHECK(builtin_eval("c", env) == "1023");

    builtin_exec("e = 2\ne = 3*e + 1\n", env);
    CHECK(builtin_eval("e", env) == "7");

    builtin_exec("t = (1 +\n 2)\n", env);
    CHECK(builtin_eval("t", env) == "3");

    // A bare expression is evaluated for its errors and otherwise discarded.
    builtin_exec("1 + 1\n", env);
    CHECK_THROWS_AS(builtin_exec("zz\n", env), Error);

    // The statements before a failure keep their effect.
    CHECK_THROWS_AS(builtin_exec("before = 1\nbad = 1/0\nafter = 2\n", env), Error);
    CHECK(builtin_eval("before", env) == "1");
    CHECK_THROWS_AS(builtin_eval("after", env), Error);

    CHECK_THROWS_AS(builtin_exec("mod = 3", env), Error);
}

TEST_CASE("builtin backend eval/exec/plot") {
    weavetex::testing::TempDir dir;
    BuiltinBackend backend(dir.path());
    CHECK(backend.id() == "builtin");

    BackendResponse r = backend.send({1, RequestKind::Exec, "a = 2", std::nullopt, std::nullopt});
    CHECK(r.ok);
    CHECK_FALSE(r.latex);

    r = backend.send({2, RequestKind::Eval, "a+1", std::nullopt, std::nullopt});
    CHECK(r.ok);
    CHECK(r.latex == "3");
    CHECK(r.id == 2);

    r = backend.send({3, RequestKind::Eval, "1/0", std::nullopt, std::nullopt});
    CHECK_FALSE(r.ok);
    REQUIRE(r.error);
    CHECK(r.error->find("division") != std::string::npos);

    r = backend.send({4, RequestKind::Plot, "p", "png", "plots/plot-3.png"});
    CHECK(r.ok);
    REQUIRE(r.files);
    CHECK(*r.files == std::vector<std::string>{"plots/plot-3.png"});
    CHECK(weavetex::testing::slurp(dir / "plots/plot-3.png") == kPlotStubPayload);

    r = backend.send({5, RequestKind::Plot, "p", "png", "../escape.png"});
    CHECK_FALSE(r.ok);
    r = backend.send({6, RequestKind::Plot, "p", "png", std::nullopt});
    CHECK_FALSE(r.ok);
}
