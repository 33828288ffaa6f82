#include "chor/expr.hpp"

#include <cstdint>

namespace chor {

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

Expr::Expr() : Expr(std::make_shared<const ExprNode>(ex::Literal{Value::integer(0)})) {}
Expr Expr::literal(Value v) { return Expr(std::make_shared<const ExprNode>(ex::Literal{v})); }
Expr Expr::self() { return Expr(std::make_shared<const ExprNode>(ex::SelfCell{})); }
Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(ex::Binary{op, std::move(lhs), std::move(rhs)}));
}
Expr Expr::negate(Expr e) { return Expr(std::make_shared<const ExprNode>(ex::Not{std::move(e)})); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.index() != y.index()) return false;
  if (auto* l = std::get_if<ex::Literal>(&x)) return l->value == std::get<ex::Literal>(y).value;
  if (std::holds_alternative<ex::SelfCell>(x)) return true;
  if (auto* bin = std::get_if<ex::Binary>(&x)) {
    const auto& o = std::get<ex::Binary>(y);
    return bin->op == o.op && bin->lhs == o.lhs && bin->rhs == o.rhs;
  }
  return std::get<ex::Not>(x).operand == std::get<ex::Not>(y).operand;
}

namespace {

std::int64_t wrap(std::uint64_t u) { return static_cast<std::int64_t>(u); }

Value apply(BinaryOp op, const Value& a, const Value& b) {
  if (a.is_err() || b.is_err()) return Value::error();
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul: {
      if (!a.is_int() || !b.is_int()) return Value::error();
      auto x = static_cast<std::uint64_t>(a.as_int());
      auto y = static_cast<std::uint64_t>(b.as_int());
      if (op == BinaryOp::Add) return Value::integer(wrap(x + y));
      if (op == BinaryOp::Sub) return Value::integer(wrap(x - y));
      return Value::integer(wrap(x * y));
    }
    case BinaryOp::Eq:
      if (a.kind() != b.kind()) return Value::error();
      return Value::boolean(a == b);
    case BinaryOp::Lt:
      if (!a.is_int() || !b.is_int()) return Value::error();
      return Value::boolean(a.as_int() < b.as_int());
    case BinaryOp::And:
    case BinaryOp::Or:
      if (!a.is_bool() || !b.is_bool()) return Value::error();
      return Value::boolean(op == BinaryOp::And ? (a.as_bool() && b.as_bool())
                                                : (a.as_bool() || b.as_bool()));
  }
  return Value::error();
}

}  // namespace

Value eval(const Expr& e, const Value& own_cell) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ex::Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ex::SelfCell>) {
          return own_cell;
        } else if constexpr (std::is_same_v<T, ex::Binary>) {
          return apply(n.op, eval(n.lhs, own_cell), eval(n.rhs, own_cell));
        } else {
          Value v = eval(n.operand, own_cell);
          if (!v.is_bool()) return Value::error();
          return Value::boolean(!v.as_bool());
        }
      },
      e.node());
}

Value eval_expr(const Expr& e, const GlobalState& sigma, const ProcessName& p) {
  return eval(e, sigma.at(p));
}

}  // namespace chor
