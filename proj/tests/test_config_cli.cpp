#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "jcir/config.hpp"
#include "jcir/io.hpp"

using namespace jcir;

TEST_CASE("minimal simulate config fills documented defaults") {
    const auto c = parse_config(R"({
        "command": "simulate",
        "params": {"a": 1.0, "b": 1.0, "sigma": 0.5, "y0": 1.0}
    })");
    CHECK(c.command == Command::Simulate);
    CHECK(c.seed == 12345);
    CHECK(c.out_dir == "out");
    CHECK(c.simulate.T == 1.0);
    CHECK(c.simulate.steps == 100);
    CHECK(c.simulate.scheme == Scheme::ExactBetweenJumps);
    CHECK(c.params.m.is_zero());
}

TEST_CASE("unknown keys are rejected with their location") {
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "simulate",
        "params": {"a": 1.0, "b": 1.0, "sigma": 0.5, "y0": 1.0, "volatility": 2.0}
    })"),
                      Catch::Matchers::ContainsSubstring("params.volatility"));
    CHECK_THROWS_WITH(parse_config(R"({"command": "simulate"})"),
                      Catch::Matchers::ContainsSubstring("params"));
}

TEST_CASE("discrete experiments enforce condition (A3)") {
    const std::string text = R"({
        "command": "experiment",
        "params": {"a": 1.0, "b": 1.0, "sigma": 1.0, "y0": 1.0,
                   "levy": {"kind": "compound-poisson-exp", "c": 1.0, "lambda": 2.0}},
        "experiment": {"kind": "discrete-lan"}
    })";
    CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("(A3)"));
    CHECK_NOTHROW(parse_config(text, /*allow_outside_a3=*/true));
    // a/sigma^2 = 8 > 7.15042 passes
    const std::string ok = R"({
        "command": "experiment",
        "params": {"a": 2.0, "b": 1.0, "sigma": 0.5, "y0": 2.5,
                   "levy": {"kind": "compound-poisson-exp", "c": 1.0, "lambda": 2.0}},
        "experiment": {"kind": "discrete-lan"}
    })";
    CHECK_NOTHROW(parse_config(ok));
}

TEST_CASE("regime constraints are validated") {
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "experiment",
        "params": {"a": 2.0, "b": -1.0, "sigma": 0.5, "y0": 1.0},
        "experiment": {"kind": "continuous-lan"}
    })"),
                      Catch::Matchers::ContainsSubstring("LAN requires b > 0"));
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "experiment",
        "params": {"a": 2.0, "b": 0.5, "sigma": 0.5, "y0": 1.0},
        "experiment": {"kind": "v-law"}
    })"),
                      Catch::Matchers::ContainsSubstring("requires b < 0"));
}

TEST_CASE("emit then parse is the identity") {
    for (const std::string cmd : {"simulate", "density", "estimate", "experiment", "malliavin"}) {
        std::string text = R"({
            "command": ")" + cmd + R"(",
            "seed": 777,
            "threads": 3,
            "params": {"a": 2.0, "b": )" +
                           (cmd == "experiment" || cmd == "malliavin" ? "1.0" : "-0.25") + R"(,
                       "sigma": 0.5, "y0": 2.5,
                       "levy": {"kind": "gamma-process", "gamma": 1.5, "lambda": 3.0}}
        })";
        if (cmd == "experiment") {
            text.insert(text.rfind('}'), R"(, "experiment": {"kind": "continuous-lan", "u": 0.7})");
        }
        CAPTURE(cmd);
        const RunConfig c = parse_config(text);
        const RunConfig back = parse_config(emit_config(c));
        CHECK(back == c);
        CHECK(emit_config(back) == emit_config(c));
    }
}

TEST_CASE("levy measures round trip through the config") {
    const std::vector<std::string> kinds = {
        R"({"kind": "zero"})",
        R"({"kind": "dirac", "rate": 0.5, "z": 1.0})",
        R"({"kind": "compound-poisson-exp", "c": 1.0, "lambda": 2.0})",
        R"({"kind": "gamma-process", "gamma": 2.0, "lambda": 4.0})",
        R"({"kind": "gamma-density", "alpha": -0.5, "lambda": 2.0})",
        R"({"kind": "inverse-gaussian", "delta": 0.7, "gamma": 1.2})",
    };
    for (const auto& levy : kinds) {
        const std::string text = R"({
            "command": "simulate",
            "params": {"a": 1.0, "b": 1.0, "sigma": 0.5, "y0": 1.0, "levy": )" +
                                 levy + "}}";
        CAPTURE(levy);
        const RunConfig c = parse_config(text);
        CHECK(parse_config(emit_config(c)) == c);
    }
}

TEST_CASE("range violations carry their location") {
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "simulate",
        "params": {"a": 1.0, "b": 1.0, "sigma": -0.5, "y0": 1.0}
    })"),
                      Catch::Matchers::ContainsSubstring("sigma"));
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "density",
        "params": {"a": 0.1, "b": 1.0, "sigma": 1.0, "y0": 1.0}
    })"),
                      Catch::Matchers::ContainsSubstring("proven regime"));
    CHECK_THROWS_WITH(parse_config(R"({
        "command": "simulate",
        "params": {"a": 1.0, "b": 1.0, "sigma": 0.5, "y0": 1.0,
                   "levy": {"kind": "gamma-density", "alpha": 0.0, "lambda": 1.0}}
    })"),
                      Catch::Matchers::ContainsSubstring("alpha"));
}

TEST_CASE("atomic write leaves no temp file behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "jcir-io-test";
    fs::remove_all(dir);
    const fs::path target = dir / "artifact.csv";
    io::atomic_write(target, "a,b\n1,2\n");
    CHECK(io::read_file(target) == "a,b\n1,2\n");
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    fs::remove_all(dir);
}
