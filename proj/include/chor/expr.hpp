#pragma once

#include <memory>
#include <string>
#include <variant>

#include "chor/value.hpp"

namespace chor {

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Eq, Lt, And, Or };

const char* op_symbol(BinaryOp op);

namespace ex {
struct Literal;
struct SelfCell;
struct Binary;
struct Not;
}  // namespace ex

using ExprNode = std::variant<ex::Literal, ex::SelfCell, ex::Binary, ex::Not>;

// Local expression evaluated at one process. Immutable and cheap to copy.
class Expr {
 public:
  Expr();

  static Expr literal(Value v);
  static Expr self();
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr negate(Expr e);

  const ExprNode& node() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

namespace ex {
struct Literal {
  Value value;
};
struct SelfCell {};  // "@", the evaluating process' own cell
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct Not {
  Expr operand;
};
}  // namespace ex

inline const ExprNode& Expr::node() const { return *node_; }

// Deterministic and total: ill-typed operands (or Err) produce Err.
// Integer arithmetic wraps around at 64 bits.
Value eval(const Expr& e, const Value& own_cell);

Value eval_expr(const Expr& e, const GlobalState& sigma, const ProcessName& p);

}  // namespace chor
