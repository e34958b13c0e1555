#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "support/generators.hpp"
#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/harness.hpp"

using namespace varschouten;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "varschouten");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kCtx = VARSCHOUTEN_DATA_DIR "/scalar.ctx";

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("random functionals are deterministic") {
    FuzzParams p;
    p.seed = 77;
    for (std::uint64_t i = 0; i < 10; ++i)
      CHECK(random_functional(p, scalar_context(), i).density == random_functional(p, scalar_context(), i).density);
    CHECK(random_functional(p, scalar_context(), 0).density != random_functional(p, scalar_context(), 1).density);
  }

  TEST_CASE("generated densities respect the bounds") {
    for (const auto& ctx : testgen::all_contexts())
      for (auto target : {ParityTarget::even, ParityTarget::odd})
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
          FuzzParams p;
          p.seed = seed;
          p.parity_target = target;
          const auto f = random_functional(p, ctx);
          CHECK_FALSE(f.is_zero());
          CHECK(functional_parity(f) == (target == ParityTarget::odd ? Parity::odd : Parity::even));
          CHECK(jet_order(f.density) <= p.max_jet_order);
          CHECK(f.density.size() <= p.max_monomials);
          for (const auto& m : f.density.monomials()) {
            unsigned degree = static_cast<unsigned>(m.key.odd.size());
            for (const auto& e : m.key.even) degree += e.power;
            CHECK(degree <= p.max_degree);
            CHECK(m.key.funcs.size() <= 1);
            for (const auto& fn : m.key.funcs) {
              CHECK(fn.power == 1);
              CHECK(fn.arg->vars.size() == 1);
              CHECK(ctx->owner_parity(fn.arg->vars[0].owner()) == Parity::even);
            }
          }
        }
  }

  TEST_CASE("degree one without functions is linear") {
    FuzzParams p;
    p.max_degree = 1;
    p.allow_funcs = false;
    p.parity_target = ParityTarget::odd;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      p.seed = seed;
      const auto f = random_functional(p, testgen::two_field_context());
      for (const auto& m : f.density.monomials()) {
        CHECK(m.key.even.empty());
        CHECK(m.key.funcs.empty());
        CHECK(m.key.odd.size() == 1);
      }
    }
  }

  TEST_CASE("pinned functional for seed 1") {
    FuzzParams p;
    p.seed = 1;
    p.parity_target = ParityTarget::odd;
    const auto golden = read_file(VARSCHOUTEN_TEST_DIR "/golden/seed1_odd.txt");
    CHECK(format(random_functional(p, scalar_context()).density, Style::plain) + "\n" == golden);
  }

  TEST_CASE("invalid parameters") {
    FuzzParams p;
    p.max_degree = 0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = FuzzParams{};
    p.count = 0;
    CHECK_THROWS_AS(run_fuzz(p, scalar_context()), Error);
  }

  TEST_CASE("fuzz reports are reproducible and thread-count independent") {
    FuzzParams p;
    p.seed = 5;
    p.count = 12;
    const auto a = run_fuzz(p, scalar_context(), 1);
    const auto b = run_fuzz(p, scalar_context(), 3);
    CHECK(a.verified == a.trials);
    CHECK(format_fuzz_report(a, Style::plain) == format_fuzz_report(b, Style::plain));
    CHECK(format_fuzz_report(a, Style::json) == format_fuzz_report(b, Style::json));
    const auto doc = format_fuzz_report(a, Style::json);
    for (const char* key : {"\"trials\": 12", "\"verified\": 12", "\"degenerate\"", "\"failures\": []"})
      CHECK(doc.find(key) != std::string::npos);
  }

  TEST_CASE("fuzz in richer contexts") {
    FuzzParams p;
    p.seed = 9;
    p.count = 4;
    p.max_monomials = 2;
    for (const auto& ctx : {testgen::two_field_context(), testgen::plane_context(), testgen::odd_field_context()}) {
      const auto r = run_fuzz(p, ctx, 1);
      CHECK(r.verified == r.trials);
    }
  }
}

TEST_SUITE("cli") {
  TEST_CASE("jacobi on the worked triple") {
    const auto r = cli({"jacobi", "--ctx", kCtx, "--F", "p*q*q[2]", "--G", "p[1]*exp(q[1])", "--H", "p[2]*cos(q)"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ZERO") != std::string::npos);
    CHECK(r.out.find("NONZERO") == std::string::npos);
    CHECK(r.out.find("sign: +1") != std::string::npos);
  }

  TEST_CASE("jacobi with a zero argument") {
    const auto r = cli({"jacobi", "--F", "p*q*q[2]", "--G", "p[1]*exp(q[1])", "--H", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ZERO") != std::string::npos);
  }

  TEST_CASE("exit code matrix") {
    struct Row {
      std::vector<std::string> args;
      int code;
    };
    const std::vector<Row> rows{
        {{"normalize", "q*p + p*q"}, 0},
        {{"normalize", "q +"}, 2},
        {{"normalize", "x*q"}, 2},
        {{"euler", "p*q*q[2]", "--wrt", "q", "--side", "right"}, 0},
        {{"euler", "p*q", "--wrt", "z"}, 2},
        {{"euler", "p*q", "--wrt", "q", "--side", "up"}, 2},
        {{"bracket", "--F", "p[1]*exp(q[1])", "--G", "p[2]*cos(q)"}, 0},
        {{"bracket", "--F", "q + p", "--G", "p"}, 2},
        {{"bracket", "--F", "p"}, 2},
        {{"jacobi", "--F", "p*q", "--G", "q*q[1]", "--H", "p[1]*p*q"}, 0},
        {{"trace", "--F", "p*q*q[2]", "--G", "p[1]*exp(q[1])", "--H", "p[2]*cos(q)"}, 0},
        {{"fuzz", "--seed", "3", "--count", "4"}, 0},
        {{"fuzz", "--count", "0"}, 2},
        {{"--ctx", "/nonexistent.ctx", "normalize", "q"}, 2},
        {{"--format", "yaml", "normalize", "q"}, 2},
        {{"frobnicate"}, 2},
        {{}, 2},
    };
    for (const auto& row : rows) {
      const auto r = cli(row.args);
      std::string joined;
      for (const auto& a : row.args) joined += a + " ";
      INFO(joined);
      CHECK(r.code == row.code);
    }
  }

  TEST_CASE("outputs") {
    CHECK(cli({"normalize", "q[2]*q*p"}).out == "q*q[2]*p\n");
    CHECK(cli({"euler", "p*q*q[2]", "--wrt", "q", "--side", "right"}).out ==
          cli({"normalize", "2*p*q[2] + 2*p[1]*q[1] + p[2]*q"}).out);
    const auto parse_error = cli({"normalize", "q +\n q*r"});
    CHECK(parse_error.err.find("parse error at 2:4") != std::string::npos);
    CHECK(cli({"--format", "latex", "bracket", "--F", "p[1]*exp(q[1])", "--G", "p[2]*cos(q)"}).out.find("e^{q_{x}}") !=
          std::string::npos);
    CHECK(cli({"--format", "json", "normalize", "q"}).out.find("\"q[0]\"") != std::string::npos);
    CHECK(cli({"fuzz", "--seed", "3", "--count", "4"}).out.rfind("4/4 verified (", 0) == 0);
  }

  TEST_CASE("fuzz reports are byte-identical across runs") {
    const auto a = cli({"--format", "json", "fuzz", "--seed", "42", "--count", "8"});
    const auto b = cli({"--format", "json", "fuzz", "--seed", "42", "--count", "8", "--threads", "2"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("the seed variable overrides --seed") {
    ::setenv("VARSCHOUTEN_SEED", "42", 1);
    const auto a = cli({"--format", "json", "fuzz", "--seed", "7", "--count", "5"});
    ::setenv("VARSCHOUTEN_SEED", "nope", 1);
    const auto bad = cli({"fuzz", "--count", "5"});
    ::unsetenv("VARSCHOUTEN_SEED");
    const auto b = cli({"--format", "json", "fuzz", "--seed", "42", "--count", "5"});
    CHECK(a.out == b.out);
    CHECK(bad.code == 2);
  }
}
