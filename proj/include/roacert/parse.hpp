#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "roacert/poly.hpp"

namespace roacert {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// How `sin(...)` / `cos(...)` are lowered before anything reaches a
/// Polynomial. Without a policy, trig calls are rejected.
struct TrigPolicy {
  /// Replace sin/cos of any argument by its Maclaurin truncation.
  std::optional<int> taylor_degree;
  /// Phase name -> (ring index of sin(phase), ring index of cos(phase)).
  /// Only the bare phase is accepted as argument.
  std::map<std::string, std::pair<int, int>, std::less<>> recast;
};

/// Parses and expands `expr` over the ring `vars`. Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*        ('/' only by constants)
///   unary  := '-' unary | power
///   power  := atom ('^' integer)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
Polynomial parse_poly(std::string_view expr, std::span<const std::string> vars,
                      const std::map<std::string, double, std::less<>>& params = {},
                      const TrigPolicy& trig = {});

}  // namespace roacert
