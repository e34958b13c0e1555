#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "varschouten/expr.hpp"

namespace varschouten {

struct TraceReport;

enum class Style : std::uint8_t { plain, latex, json };

/// Parses the density grammar:
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ('^' posint)*
///   atom   := rational | jet | ('exp'|'sin'|'cos') '(' expr ')' | '(' expr ')'
///   jet    := name ('[' int (',' int)* ']')?
/// Throws ParseError with a 1-based line and column.
Expression parse_density(std::string_view text, const ContextPtr& ctx);

/// Context file: one declaration per line, `indep x [y ...]` or `field q even antifield p`.
/// '#' starts a comment. Without an `indep` line the single variable is x.
ContextPtr parse_context(std::string_view text);
ContextPtr load_context(const std::filesystem::path& path);
std::string format_context(const FieldContext& ctx);

/// "q", "q[2]", "q[1,0]"; with `bracket_all`, order zero is written "q[0]".
std::string format_jet(const FieldContext& ctx, JetVar v, bool bracket_all = false);

/// plain re-parses to the identical expression; json follows the documented schema.
std::string format(const Expression& e, Style style);

std::string format_trace(const TraceReport& report, Style style);

}  // namespace varschouten
