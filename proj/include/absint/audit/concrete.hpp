#pragma once

#include "absint/domain/state.hpp"
#include "absint/imp/program.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace absint {

// The program uses a literal that does not fit in 64 bits.
class ConcreteUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Value = std::int64_t;
using Store = std::vector<Value>;  // universe order

bool contains(const AbstractState& s, const Store& store);

// Flat form of an annotated program for fast concrete execution. Stores are
// recorded at every location the abstract semantics assigns a state to.
class ConcreteProgram {
 public:
  explicit ConcreteProgram(const AnnotatedProgram& p);

  std::size_t variables() const { return vars_; }
  std::size_t locations() const { return locations_; }
  // Literals of the program and their negations, sorted, deduplicated, 0
  // included.
  const std::vector<Value>& constants() const { return constants_; }

  enum class Op : std::uint8_t { lit, var, add, sub, mul, div, read };
  struct Expr {
    Op op;
    std::int32_t a = -1, b = -1;  // operand nodes, or variable index
    Value value = 0;
  };
  enum class BOp : std::uint8_t { lt, le, eq, gt, ge, and_, or_, not_, const_ };
  struct Bool {
    BOp op;
    std::int32_t a = -1, b = -1;  // Expr nodes for comparisons, Bool nodes otherwise
    bool value = false;
  };
  enum class IOp : std::uint8_t { assign, record, branch_false, jump, tick, halt };
  struct Instr {
    IOp op;
    std::int32_t a = -1;  // variable / location / guard
    std::int32_t b = -1;  // expression / jump target
  };

  const std::vector<Expr>& exprs() const { return exprs_; }
  const std::vector<Bool>& bools() const { return bools_; }
  const std::vector<Instr>& code() const { return code_; }

 private:
  std::int32_t expr(const absint::Expr& e);
  std::int32_t guard(const BoolExpr& b);
  void stmt(const AnnotatedProgram& p, const CmdPtr& c);
  void emit(IOp op, std::int32_t a = -1, std::int32_t b = -1);

  std::size_t vars_ = 0;
  std::size_t locations_ = 0;
  const Universe* universe_ = nullptr;
  std::vector<Value> constants_;
  std::vector<Expr> exprs_;
  std::vector<Bool> bools_;
  std::vector<Instr> code_;
};

// Where input values come from: the initial store first (one value per
// variable, universe order), then one value per read().
class InputSource {
 public:
  virtual ~InputSource() = default;
  virtual Value next() = 0;
};

// Mixture of small values in [-16, 16] (half the draws), program constants
// plus -1/0/+1 (a quarter) and values around +-2^31 (a quarter).
class SampledInputs : public InputSource {
 public:
  SampledInputs(std::uint64_t seed, const std::vector<Value>& constants);
  Value next() override;

 private:
  std::mt19937_64 rng_;
  const std::vector<Value>* constants_;
};

// Replays a recorded vector; once exhausted, every further value is 0.
class ReplayInputs : public InputSource {
 public:
  explicit ReplayInputs(std::vector<Value> v) : values_(std::move(v)) {}
  Value next() override { return pos_ < values_.size() ? values_[pos_++] : 0; }

 private:
  std::vector<Value> values_;
  std::size_t pos_ = 0;
};

enum class RunEnd : std::uint8_t {
  finished,
  blocked,         // division by zero: no successor state
  overflow,        // a result left the 64-bit range
  iteration_cap,   // too many loop iterations
  cycle,           // revisited an identical loop state without new input
};
const char* to_string(RunEnd e);

struct RunOptions {
  std::size_t max_loop_iterations = 1'000'000;
  bool keep_inputs = true;  // fill RunResult::inputs
};

// Called with (location, store) at every recorded point.
template <class F>
concept StoreObserver = requires(F f, std::size_t l, const Store& s) { f(l, s); };

struct RunResult {
  RunEnd end = RunEnd::finished;
  std::vector<Value> inputs;  // everything consumed from the source
  std::size_t consumed = 0;
  std::size_t loop_iterations = 0;
};

namespace detail {
RunResult execute_impl(const ConcreteProgram& p, InputSource& in, RunOptions opt,
                       void (*cb)(void*, std::size_t, const Store&), void* ctx);
}

template <StoreObserver F>
RunResult execute(const ConcreteProgram& p, InputSource& in, RunOptions opt, F&& observe) {
  return detail::execute_impl(
      p, in, opt,
      [](void* ctx, std::size_t l, const Store& s) { (*static_cast<std::remove_reference_t<F>*>(ctx))(l, s); },
      &observe);
}

}  // namespace absint
