#include "varschouten/harness.hpp"

#include <atomic>
#include <random>
#include <thread>

#include <json.hpp>

#include "varschouten/calculus.hpp"
#include "varschouten/error.hpp"
#include "varschouten/schouten.hpp"

namespace varschouten {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index + 1));
}

/// mt19937_64 with a portable bounded draw (the standard distributions are not
/// specified bit-for-bit across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = 0;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  bool coin() { return below(2) == 0; }

 private:
  std::mt19937_64 engine_;
};

JetVar random_jet(Rng& rng, const FieldContext& ctx, OwnerId owner, unsigned max_order) {
  std::vector<unsigned> orders(ctx.dimension(), 0);
  const auto total = static_cast<unsigned>(rng.below(max_order + 1ULL));
  for (unsigned k = 0; k < total; ++k) ++orders[rng.below(orders.size())];
  return JetVar(owner, orders);
}

Expression random_monomial(Rng& rng, const ContextPtr& ctx, const FuzzParams& p) {
  const auto owners = ctx->owner_count();
  const auto degree = 1 + rng.below(p.max_degree);
  std::vector<JetVar> vars;
  for (std::uint64_t k = 0; k < degree; ++k)
    vars.push_back(random_jet(rng, *ctx, OwnerId{static_cast<std::uint8_t>(rng.below(owners))}, p.max_jet_order));

  if (p.parity_target != ParityTarget::any) {
    std::size_t odd = 0;
    for (auto v : vars) odd += ctx->owner_parity(v.owner()) == Parity::odd ? 1 : 0;
    const Parity have = odd % 2 == 0 ? Parity::even : Parity::odd;
    const Parity want = p.parity_target == ParityTarget::odd ? Parity::odd : Parity::even;
    if (have != want) {
      auto& v = vars[rng.below(vars.size())];
      v = v.with_owner(v.owner().conjugate());
    }
  }

  const auto num = static_cast<long>(1 + rng.below(5));
  const auto den = static_cast<long>(1 + rng.below(3));
  Expression m = Expression::constant(ctx, Rational(rng.coin() ? num : -num, den));
  for (auto v : vars) m = m * Expression::jet(ctx, v);

  if (p.allow_funcs && rng.coin()) {
    std::vector<OwnerId> even;
    for (std::size_t o = 0; o < owners; ++o)
      if (ctx->owner_parity(OwnerId{static_cast<std::uint8_t>(o)}) == Parity::even)
        even.push_back(OwnerId{static_cast<std::uint8_t>(o)});
    const auto kind = static_cast<FuncKind>(rng.below(3));
    const JetVar v = random_jet(rng, *ctx, even[rng.below(even.size())], p.max_jet_order);
    m = m * Expression::function(kind, Expression::jet(ctx, v));
  }
  return m;
}

struct TrialOutcome {
  bool verified = false;
  bool degenerate = false;
  FuzzFailure failure;
};

TrialOutcome run_trial(const FuzzParams& params, const ContextPtr& ctx, std::size_t index) {
  FuzzParams p = params;
  p.seed = stream_seed(params.seed, index);
  std::array<ParityTarget, 3> targets{p.parity_target, p.parity_target, p.parity_target};
  if (p.parity_target == ParityTarget::any) {
    Rng rng(stream_seed(p.seed, 3));
    for (auto& t : targets) t = rng.coin() ? ParityTarget::even : ParityTarget::odd;
  }
  std::vector<Functional> args;
  for (std::uint64_t k = 0; k < 3; ++k) {
    FuzzParams q = p;
    q.parity_target = targets[k];
    args.push_back(random_functional(q, ctx, k));
  }
  args[0].label = "F";
  args[1].label = "G";
  args[2].label = "H";

  const auto sides = jacobi_sides(args[0], args[1], args[2]);
  ExpressionBuilder defect(ctx);
  defect.add(sides.lhs.density);
  defect.add(sides.rhs1.density, -1);
  defect.add(sides.rhs2.density, -sides.sign);
  const Expression jacobi = defect.build();
  const Functional symmetry = graded_symmetry_defect(args[0], args[1]);

  TrialOutcome out;
  const bool jacobi_ok = is_exact(jacobi);
  const bool symmetry_ok = is_exact(symmetry.density);
  out.verified = jacobi_ok && symmetry_ok;
  out.degenerate = out.verified && sides.lhs.is_zero() && sides.rhs1.is_zero() && sides.rhs2.is_zero();
  if (!out.verified) {
    out.failure.index = index;
    out.failure.seed = p.seed;
    for (std::size_t k = 0; k < 3; ++k) out.failure.densities[k] = format(args[k].density, Style::plain);
    out.failure.residue = jacobi_ok ? "antisymmetry: " + format(symmetry.density, Style::plain)
                                    : format(jacobi, Style::plain);
  }
  return out;
}

}  // namespace

void FuzzParams::validate() const {
  if (count == 0 || max_jet_order == 0 || max_degree == 0 || max_monomials == 0)
    throw Error("fuzz bounds must be positive");
  if (max_jet_order > kMaxJetOrder / 4) throw Error("max jet order too large");
}

Functional random_functional(const FuzzParams& params, const ContextPtr& ctx, std::uint64_t index) {
  params.validate();
  if (ctx->fields().empty()) return Functional::zero(ctx);
  Rng rng(stream_seed(params.seed, index));
  Expression density(ctx);
  for (int attempt = 0; attempt < 64 && density.is_zero(); ++attempt) {
    ExpressionBuilder b(ctx);
    const auto monomials = 1 + rng.below(params.max_monomials);
    for (std::uint64_t k = 0; k < monomials; ++k) b.add(random_monomial(rng, ctx, params));
    density = b.build();
  }
  return Functional(std::move(density));
}

FuzzReport run_fuzz(const FuzzParams& params, const ContextPtr& ctx, unsigned threads) {
  params.validate();
  std::vector<TrialOutcome> outcomes(params.count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < params.count; i = next++) outcomes[i] = run_trial(params, ctx, i);
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.count));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  FuzzReport report;
  report.trials = params.count;
  for (auto& o : outcomes) {
    if (o.verified) {
      ++report.verified;
      if (o.degenerate) ++report.degenerate;
    } else {
      report.failures.push_back(std::move(o.failure));
    }
  }
  return report;
}

std::string format_fuzz_report(const FuzzReport& report, Style style) {
  if (style == Style::json) {
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : report.failures)
      failures.push_back({{"index", f.index}, {"seed", f.seed}, {"densities", f.densities}, {"residue", f.residue}});
    nlohmann::ordered_json doc{{"trials", report.trials},
                               {"verified", report.verified},
                               {"degenerate", report.degenerate},
                               {"failures", std::move(failures)}};
    return doc.dump(2) + "\n";
  }
  std::string out = std::to_string(report.verified) + "/" + std::to_string(report.trials) + " verified (" +
                    std::to_string(report.degenerate) + " degenerate)\n";
  for (const auto& f : report.failures) {
    out += "trial " + std::to_string(f.index) + " seed " + std::to_string(f.seed) + "\n";
    out += "  F = " + f.densities[0] + "\n  G = " + f.densities[1] + "\n  H = " + f.densities[2] + "\n";
    out += "  residue: " + f.residue + "\n";
  }
  return out;
}

}  // namespace varschouten
