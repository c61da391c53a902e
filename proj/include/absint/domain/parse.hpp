#pragma once

#include "absint/domain/state.hpp"
#include "absint/imp/syntax.hpp"

#include <string>
#include <string_view>

namespace absint {

// Rewrites LaTeX and Unicode math into the plain forms the parsers accept:
// \leq and ≤ become <=, \infty/\inf/∞ become inf, \bot/⊥ become bot, \sqcup,
// \cup and ∪ become ⊔, \text{...}-style wrappers and $ are dropped, \{ \}
// become braces and P_{3} / P_3 become P3.
std::string normalize_math(std::string_view text);

// "[lo, hi]" (round brackets tolerated), "bot", "top". Input is expected to
// be normalized already.
Interval parse_interval(std::string_view text);

// "{x : [1, 2], y : bot}", or a bare "bot"/"top". Every universe variable
// must appear exactly once; "->", "↦" and "=" are accepted in place of ':'.
AbstractState parse_state(std::string_view text, const UniversePtr& u);

}  // namespace absint
