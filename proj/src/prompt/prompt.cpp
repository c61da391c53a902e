#include "absint/prompt/prompt.hpp"

#include "absint/imp/syntax.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace absint {

const char* to_string(Strategy s) {
  return s == Strategy::compositional ? "compositional" : "transitional";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "compositional") return Strategy::compositional;
  if (s == "transitional") return Strategy::transitional;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
}

std::filesystem::path default_prompt_dir() {
  if (const char* env = std::getenv("ABSINT_DATA_DIR"); env && *env)
    return std::filesystem::path(env) / "prompts";
  return std::filesystem::path(ABSINT_DATA_DIR) / "prompts";
}

PromptTemplate load_template(Strategy s, const std::filesystem::path& dir) {
  auto path = dir / (std::string(to_string(s)) + ".prompt");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  PromptTemplate t{s, ss.str()};
  auto first = t.body.find(kProgramMarker);
  if (first == std::string::npos ||
      t.body.find(kProgramMarker, first + 1) != std::string::npos)
    throw std::runtime_error(path.string() + " must contain exactly one " +
                             std::string(kProgramMarker));
  return t;
}

std::string to_ascii(std::string_view text) {
  static const std::vector<std::pair<std::string_view, std::string_view>> table = {
      {"⊥", "bot"}, {"∇", "nabla"}, {"⊔", "U"}, {"⊓", "^"}, {"∞", "inf"}, {"↦", "->"},
  };
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out += text[i++];
      continue;
    }
    bool hit = false;
    for (const auto& [from, to] : table) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        hit = true;
        break;
      }
    }
    if (hit) continue;
    // skip the whole UTF-8 sequence
    std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    out += '?';
    i += len;
  }
  return out;
}

std::string build_prompt(const PromptTemplate& t, const AnnotatedProgram& p,
                         Charset charset) {
  std::string out = t.body;
  out.replace(out.find(kProgramMarker), kProgramMarker.size(), render(p));
  return charset == Charset::ascii ? to_ascii(out) : out;
}

std::string build_prompt(Strategy s, const AnnotatedProgram& p, Charset charset) {
  return build_prompt(load_template(s), p, charset);
}

}  // namespace absint
