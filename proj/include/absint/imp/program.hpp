#pragma once

#include "absint/imp/ast.hpp"

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace absint {

struct Location {
  std::size_t index = 0;
  friend auto operator<=>(const Location&, const Location&) = default;
};

// "{P3}"
std::string to_string(Location l);

enum class DirectiveKind { if_then, if_else, endif, while_true, while_false };

// "[if_then]", ...
const char* directive_text(DirectiveKind k);

struct Directive {
  DirectiveKind kind;
  const Cmd* anchor;  // the If or While owning the directive
  Location location;  // location written right after the directive
};

// Where a statement sits between locations. Every statement has exactly one
// location before it and one after it. Compound statements also record their
// interior entry/exit points.
struct Placement {
  Location before;
  Location after;
  // If: then_entry/else_entry follow [if_then]/[if_else]; *_exit are the last
  // locations of each branch. While: head follows [while_true], body_exit is
  // the last location of the body.
  Location then_entry, else_entry, then_exit, else_exit;
  Location head, body_exit;
};

class AnnotatedProgram {
 public:
  AnnotatedProgram() = default;

  const CmdPtr& root() const { return root_; }
  const UniversePtr& universe() const { return universe_; }
  const Universe& variables() const { return *universe_; }
  std::size_t location_count() const { return location_count_; }
  const std::vector<Directive>& directives() const { return directives_; }

  // Throws std::out_of_range for commands not owned by this program.
  const Placement& placement(const Cmd& c) const;

  // Non-Seq statements in textual order.
  const std::vector<const Cmd*>& statements() const { return statements_; }

  bool is_loop_head(Location l) const;
  // The While whose head is l, or nullptr.
  const Cmd* loop_at_head(Location l) const;

  friend bool operator==(const AnnotatedProgram& a, const AnnotatedProgram& b);

 private:
  friend AnnotatedProgram annotate(const CmdPtr& root, const Universe& declared);

  CmdPtr root_;
  UniversePtr universe_;
  std::size_t location_count_ = 0;
  std::vector<Directive> directives_;
  std::vector<const Cmd*> statements_;
  std::unordered_map<const Cmd*, Placement> placements_;
  std::vector<const Cmd*> head_owner_;  // indexed by location
};

// Canonical location numbering and directive placement. The tree is
// re-associated (right-nested Seq) and copied where a node is shared, so
// placements can be keyed by node identity.
AnnotatedProgram annotate(const CmdPtr& root);
// Same, with the universe widened by variables declared but never used.
AnnotatedProgram annotate(const CmdPtr& root, const Universe& declared);

// 1 + #Assign + #Skip + 3 #If + 2 #While
std::size_t expected_location_count(const Cmd& c);

}  // namespace absint
