#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varschouten/functional.hpp"
#include "varschouten/textio.hpp"

namespace varschouten {

enum class ParityTarget : std::uint8_t { even, odd, any };

struct FuzzParams {
  std::uint64_t seed = 0;
  std::size_t count = 100;
  unsigned max_jet_order = 2;
  unsigned max_degree = 3;
  unsigned max_monomials = 4;
  bool allow_funcs = true;
  ParityTarget parity_target = ParityTarget::any;

  /// Throws Error when a bound is zero.
  void validate() const;
};

/// Deterministic in (params.seed, index). Each monomial has between one and max_degree
/// jet factors of total order at most max_jet_order, and with allow_funcs possibly one
/// exp/sin/cos of a single even jet variable. Homogeneous unless the target is `any`.
Functional random_functional(const FuzzParams& params, const ContextPtr& ctx, std::uint64_t index = 0);

struct FuzzFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::array<std::string, 3> densities;
  std::string residue;
};

struct FuzzReport {
  std::size_t trials = 0;
  std::size_t verified = 0;
  /// Passing trials in which every bracket of the Jacobi identity vanished identically.
  std::size_t degenerate = 0;
  std::vector<FuzzFailure> failures;
};

/// Runs params.count Jacobi trials. A trial passes when the Jacobi defect and the graded
/// antisymmetry defect of (F, G) both integrate to zero. With target `any`, each argument
/// still gets a single parity, drawn from the trial seed. threads = 0 picks the hardware count.
FuzzReport run_fuzz(const FuzzParams& params, const ContextPtr& ctx, unsigned threads = 0);

std::string format_fuzz_report(const FuzzReport& report, Style style);

/// Entry point of the command-line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace varschouten
