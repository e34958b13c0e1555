#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/harness.hpp"
#include "varschouten/schouten.hpp"
#include "varschouten/trace.hpp"

namespace varschouten {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonzero = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string ctx_path;
  std::string format = "plain";
  std::string density;
  std::string owner;
  std::string side = "left";
  std::string f;
  std::string g;
  std::string h;
  FuzzParams fuzz;
  std::string parity = "any";
  bool no_funcs = false;
  unsigned threads = 0;
};

Style style_of(const std::string& name) {
  if (name == "json") return Style::json;
  if (name == "latex") return Style::latex;
  return Style::plain;
}

std::string show(const Expression& e, Style style) {
  std::string s = format(e, style);
  if (s.empty() || s.back() != '\n') s += "\n";
  return s;
}

Functional functional_arg(const std::string& text, const ContextPtr& ctx, const char* name) {
  return Functional(parse_density(text, ctx), name);
}

int run_euler(const Options& o, const ContextPtr& ctx, Style style) {
  const Expression e = parse_density(o.density, ctx);
  const auto owner = ctx->find_owner(o.owner);
  if (!owner) throw Error("unknown field or antifield '" + o.owner + "'");
  std::cout << show(euler(e, *owner, o.side == "right" ? Side::right : Side::left), style);
  return kExitOk;
}

int run_bracket(const Options& o, const ContextPtr& ctx, Style style) {
  const auto result = schouten_bracket(functional_arg(o.f, ctx, "F"), functional_arg(o.g, ctx, "G"));
  std::cout << show(result.value.density, style);
  return kExitOk;
}

int run_jacobi(const Options& o, const ContextPtr& ctx, Style style) {
  const auto f = functional_arg(o.f, ctx, "F");
  const auto g = functional_arg(o.g, ctx, "G");
  const auto h = functional_arg(o.h, ctx, "H");
  const auto defect = jacobi_defect(f, g, h);
  const bool zero = is_exact(defect.density);
  const int sign = jacobi_sign(functional_parity(f), functional_parity(g));
  if (style == Style::json) {
    nlohmann::ordered_json doc{{"sign", sign},
                               {"defect", nlohmann::ordered_json::parse(format(defect.density, Style::json))},
                               {"zero", zero}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "sign: " << (sign > 0 ? "+1" : "-1") << "\n";
    std::cout << "defect density: " << show(defect.density, style);
    std::cout << (zero ? "ZERO" : "NONZERO") << "\n";
  }
  return zero ? kExitOk : kExitNonzero;
}

int run_trace(const Options& o, const ContextPtr& ctx, Style style) {
  const auto report =
      expand_trace(functional_arg(o.f, ctx, "F"), functional_arg(o.g, ctx, "G"), functional_arg(o.h, ctx, "H"));
  std::string text = format_trace(report, style);
  if (text.empty() || text.back() != '\n') text += "\n";
  std::cout << text;
  return report.verdict == Verdict::verified ? kExitOk : kExitNonzero;
}

int run_fuzz_command(Options o, const ContextPtr& ctx, Style style) {
  if (const char* env = std::getenv("VARSCHOUTEN_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      o.fuzz.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(std::string("VARSCHOUTEN_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  o.fuzz.allow_funcs = !o.no_funcs;
  o.fuzz.parity_target = o.parity == "even" ? ParityTarget::even
                         : o.parity == "odd" ? ParityTarget::odd
                                             : ParityTarget::any;
  const auto report = run_fuzz(o.fuzz, ctx, o.threads);
  std::cout << format_fuzz_report(report, style);
  return report.failures.empty() ? kExitOk : kExitNonzero;
}

int run_normalize(const Options& o, const ContextPtr& ctx, Style style) {
  std::cout << show(parse_density(o.density, ctx), style);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  Options o;
  CLI::App app{"Variational Schouten brackets and the shifted-graded Jacobi identity"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--ctx", o.ctx_path, "context file (default: x; q even with antifield p)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"plain", "json", "latex"}));

  auto* euler_cmd = app.add_subcommand("euler", "directed Euler derivative of a density");
  euler_cmd->add_option("density", o.density, "density")->required();
  euler_cmd->add_option("--wrt", o.owner, "field or antifield")->required();
  euler_cmd->add_option("--side", o.side, "side of the derivative")->check(CLI::IsMember({"left", "right"}));

  auto* bracket_cmd = app.add_subcommand("bracket", "Schouten bracket [[F,G]]");
  bracket_cmd->add_option("--F", o.f, "density of F")->required();
  bracket_cmd->add_option("--G", o.g, "density of G")->required();

  auto* jacobi_cmd = app.add_subcommand("jacobi", "Jacobi defect of (F, G, H)");
  auto* trace_cmd = app.add_subcommand("trace", "term-by-term expansion of the Jacobi identity");
  for (auto* cmd : {jacobi_cmd, trace_cmd}) {
    cmd->add_option("--F", o.f, "density of F")->required();
    cmd->add_option("--G", o.g, "density of G")->required();
    cmd->add_option("--H", o.h, "density of H")->required();
  }

  auto* fuzz_cmd = app.add_subcommand("fuzz", "seeded Jacobi trials (VARSCHOUTEN_SEED overrides --seed)");
  fuzz_cmd->add_option("--seed", o.fuzz.seed, "seed");
  fuzz_cmd->add_option("--count", o.fuzz.count, "number of trials")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-jet-order", o.fuzz.max_jet_order)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-degree", o.fuzz.max_degree)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-monomials", o.fuzz.max_monomials)->check(CLI::PositiveNumber);
  fuzz_cmd->add_flag("--no-funcs", o.no_funcs, "no exp/sin/cos factors");
  fuzz_cmd->add_option("--parity", o.parity, "parity of generated functionals")
      ->check(CLI::IsMember({"even", "odd", "any"}));
  fuzz_cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");

  auto* normalize_cmd = app.add_subcommand("normalize", "canonical form of a density");
  normalize_cmd->add_option("density", o.density, "density")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const ContextPtr ctx = o.ctx_path.empty() ? scalar_context() : load_context(o.ctx_path);
    const Style style = style_of(o.format);
    if (euler_cmd->parsed()) return run_euler(o, ctx, style);
    if (bracket_cmd->parsed()) return run_bracket(o, ctx, style);
    if (jacobi_cmd->parsed()) return run_jacobi(o, ctx, style);
    if (trace_cmd->parsed()) return run_trace(o, ctx, style);
    if (fuzz_cmd->parsed()) return run_fuzz_command(o, ctx, style);
    return run_normalize(o, ctx, style);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace varschouten
