#pragma once

#include "absint/imp/program.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace absint {

enum class Strategy { compositional, transitional };

const char* to_string(Strategy s);
// "compositional" / "transitional"; throws std::invalid_argument.
Strategy parse_strategy(std::string_view s);

inline constexpr std::string_view kProgramMarker = "[Input Program]";

struct PromptTemplate {
  Strategy strategy;
  std::string body;  // contains kProgramMarker exactly once
};

// $ABSINT_DATA_DIR/prompts when the variable is set, else the data directory
// of the source tree this library was built from.
std::filesystem::path default_prompt_dir();

// Reads <dir>/<strategy>.prompt. Throws std::runtime_error when the file is
// missing or does not hold exactly one marker.
PromptTemplate load_template(Strategy s,
                             const std::filesystem::path& dir = default_prompt_dir());

enum class Charset { utf8, ascii };

// ⊥ -> bot, ∇ -> nabla, ⊔ -> U, ⊓ -> ^, ∞ -> inf, ↦ -> ->; any other
// non-ASCII character becomes '?'.
std::string to_ascii(std::string_view text);

std::string build_prompt(const PromptTemplate& t, const AnnotatedProgram& p,
                         Charset charset = Charset::utf8);
std::string build_prompt(Strategy s, const AnnotatedProgram& p,
                         Charset charset = Charset::utf8);

}  // namespace absint
