#pragma once

#include "weavetex/backend.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace weavetex {

using Rational = boost::multiprecision::cpp_rational;
using Environment = std::map<std::string, Rational, std::less<>>;

/// Bytes the builtin backend writes for every plot file, whatever the format.
inline constexpr std::string_view kPlotStubPayload = "weavetex-plot-0\n";
static_assert(kPlotStubPayload.size() == 16);

/// Integers as decimal digits; other rationals as `\frac{p}{q}` in lowest
/// terms with q > 0.
std::string render_latex(const Rational& value);

/// Evaluates one expression of the mini-language:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/' | '%') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := integer | name | name '(' args ')' | '(' expr ')'
///
/// `%` and `mod(a, b)` are Euclidean (result in [0, |b|)); `^` is
/// exponentiation with an integer exponent; `Integer(x)` asserts x is an
/// integer. Assignment is rejected here.
Rational evaluate(std::string_view expr, const Environment& env);

/// `evaluate` followed by `render_latex`.
std::string builtin_eval(std::string_view expr, const Environment& env);

/// Runs statements separated by newlines or `;` (outside parentheses).
/// Each statement is `name = expr` or a bare expression whose value is
/// discarded. `#` starts a comment.
void builtin_exec(std::string_view program, Environment& env);

/// In-process backend around the mini-language. Plot requests write
/// kPlotStubPayload to `base_dir / save_path`.
class BuiltinBackend final : public Backend {
public:
    explicit BuiltinBackend(std::filesystem::path base_dir = ".");

    std::string id() const override { return "builtin"; }
    BackendResponse send(const BackendRequest& request) override;

    const Environment& environment() const noexcept { return env_; }

private:
    std::filesystem::path base_dir_;
    Environment env_;
};

} // namespace weavetex
