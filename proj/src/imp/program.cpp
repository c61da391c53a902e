#include "absint/imp/program.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace absint {

std::string to_string(Location l) {
  return "{P" + std::to_string(l.index) + "}";
}

const char* directive_text(DirectiveKind k) {
  switch (k) {
    case DirectiveKind::if_then: return "[if_then]";
    case DirectiveKind::if_else: return "[if_else]";
    case DirectiveKind::endif: return "[endif]";
    case DirectiveKind::while_true: return "[while_true]";
    case DirectiveKind::while_false: return "[while_false]";
  }
  return "[?]";
}

const Placement& AnnotatedProgram::placement(const Cmd& c) const {
  auto it = placements_.find(&c);
  if (it == placements_.end())
    throw std::out_of_range("command does not belong to this program");
  return it->second;
}

bool AnnotatedProgram::is_loop_head(Location l) const {
  return loop_at_head(l) != nullptr;
}

const Cmd* AnnotatedProgram::loop_at_head(Location l) const {
  if (l.index >= head_owner_.size()) return nullptr;
  return head_owner_[l.index];
}

bool operator==(const AnnotatedProgram& a, const AnnotatedProgram& b) {
  if (a.location_count_ != b.location_count_) return false;
  if (*a.universe_ != *b.universe_) return false;
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return *a.root_ == *b.root_;
}

namespace {

// Deep copy of every node already seen, so identities are unique.
class Uniquifier {
 public:
  CmdPtr run(const CmdPtr& c) {
    std::vector<CmdPtr> stmts;
    for (const auto& s : flatten(c)) stmts.push_back(stmt(s));
    return seq(std::move(stmts));
  }

 private:
  CmdPtr stmt(const CmdPtr& s) {
    CmdPtr out;
    if (const auto* i = std::get_if<Cmd::If>(&s->node)) {
      out = if_(i->guard, run(i->then_branch), run(i->else_branch));
    } else if (const auto* w = std::get_if<Cmd::While>(&s->node)) {
      out = while_(w->guard, run(w->body));
    } else if (seen_.insert(s.get()).second) {
      out = s;
    } else {
      out = std::make_shared<const Cmd>(*s);
    }
    seen_.insert(out.get());
    return out;
  }

  std::unordered_set<const Cmd*> seen_;
};

class Annotator {
 public:
  Annotator(std::unordered_map<const Cmd*, Placement>& pl,
            std::vector<Directive>& dirs, std::vector<const Cmd*>& stmts,
            std::vector<const Cmd*>& heads)
      : placements_(pl), directives_(dirs), statements_(stmts), heads_(heads) {}

  std::size_t next = 0;

  Location fresh() {
    heads_.push_back(nullptr);
    return Location{next++};
  }

  // Walks a right-nested sequence entered at `entry`; returns the exit
  // location.
  Location block(const CmdPtr& c, Location entry) {
    Location cur = entry;
    Location first = entry;
    for (const auto& s : flatten(c)) cur = stmt(*s, cur);
    record_seq(c, first, cur);
    return cur;
  }

 private:
  void record_seq(const CmdPtr& c, Location before, Location after) {
    // Seq nodes get placements too; they span their whole chain.
    const Cmd* node = c.get();
    while (const auto* s = std::get_if<Cmd::Seq>(&node->node)) {
      Placement p;
      p.before = before;
      p.after = after;
      placements_[node] = p;
      // later links start somewhere inside; their exact before is the
      // placement of their first statement
      node = s->second.get();
      before = placements_.at(flatten_first(node)).before;
    }
  }

  static const Cmd* flatten_first(const Cmd* c) {
    while (const auto* s = std::get_if<Cmd::Seq>(&c->node)) c = s->first.get();
    return c;
  }

  Location stmt(const Cmd& c, Location before) {
    statements_.push_back(&c);
    Placement p;
    p.before = before;
    if (const auto* i = std::get_if<Cmd::If>(&c.node)) {
      p.then_entry = fresh();
      directives_.push_back({DirectiveKind::if_then, &c, p.then_entry});
      p.then_exit = block(i->then_branch, p.then_entry);
      p.else_entry = fresh();
      directives_.push_back({DirectiveKind::if_else, &c, p.else_entry});
      p.else_exit = block(i->else_branch, p.else_entry);
      p.after = fresh();
      directives_.push_back({DirectiveKind::endif, &c, p.after});
    } else if (const auto* w = std::get_if<Cmd::While>(&c.node)) {
      p.head = fresh();
      heads_[p.head.index] = &c;
      directives_.push_back({DirectiveKind::while_true, &c, p.head});
      p.body_exit = block(w->body, p.head);
      p.after = fresh();
      directives_.push_back({DirectiveKind::while_false, &c, p.after});
    } else {
      p.after = fresh();
    }
    placements_[&c] = p;
    return p.after;
  }

  std::unordered_map<const Cmd*, Placement>& placements_;
  std::vector<Directive>& directives_;
  std::vector<const Cmd*>& statements_;
  std::vector<const Cmd*>& heads_;
};

}  // namespace

AnnotatedProgram annotate(const CmdPtr& root) { return annotate(root, {}); }

AnnotatedProgram annotate(const CmdPtr& root, const Universe& declared) {
  if (!root) throw std::invalid_argument("null program");
  AnnotatedProgram p;
  p.root_ = Uniquifier{}.run(root);
  Universe vars = collect_variables(*p.root_);
  vars.insert(vars.end(), declared.begin(), declared.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  p.universe_ = std::make_shared<const Universe>(std::move(vars));
  Annotator a(p.placements_, p.directives_, p.statements_, p.head_owner_);
  Location entry = a.fresh();
  a.block(p.root_, entry);
  p.location_count_ = a.next;
  return p;
}

std::size_t expected_location_count(const Cmd& c) {
  auto n = count_statements(c);
  return 1 + n.assigns + n.skips + 3 * n.ifs + 2 * n.whiles;
}

}  // namespace absint
