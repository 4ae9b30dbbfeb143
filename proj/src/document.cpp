#include "bam/document.hpp"

#include "bam/text.hpp"

#include <array>

namespace bam {

std::string TimeFrame::period_label(int period) const {
  switch (unit) {
    case PeriodUnit::Year:
      return std::to_string(start_year + period);
    case PeriodUnit::Quarter:
      return "Q" + std::to_string(period % 4 + 1) + " " + std::to_string(start_year + period / 4);
    case PeriodUnit::Month: {
      static constexpr std::array<const char*, 12> kMonths = {
          "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
      return std::string(kMonths[period % 12]) + " " + std::to_string(start_year + period / 12);
    }
  }
  return std::to_string(period);
}

std::string unit_word(PeriodUnit unit) {
  switch (unit) {
    case PeriodUnit::Year: return "year";
    case PeriodUnit::Quarter: return "quarter";
    case PeriodUnit::Month: return "month";
  }
  return "year";
}

namespace {

void count_nodes(const std::vector<CategoryNode>& nodes, std::size_t& leaves, std::size_t& internal) {
  for (const auto& n : nodes) {
    if (n.is_leaf()) {
      ++leaves;
    } else {
      ++internal;
      count_nodes(n.children, leaves, internal);
    }
  }
}

void collect_names(const Expr& e, std::vector<std::string>& out, std::vector<std::string>& keys) {
  switch (e.kind) {
    case Expr::Kind::Variable: {
      auto key = text::name_key(e.name);
      for (const auto& k : keys)
        if (k == key) return;
      keys.push_back(std::move(key));
      out.push_back(e.name);
      return;
    }
    case Expr::Kind::Number:
      return;
    default:
      for (const auto& child : e.operands) collect_names(child, out, keys);
  }
}

}  // namespace

std::size_t CategoryHierarchy::leaf_count() const {
  std::size_t leaves = 0, internal = 0;
  count_nodes(roots, leaves, internal);
  return leaves;
}

std::size_t CategoryHierarchy::internal_count() const {
  std::size_t leaves = 0, internal = 0;
  count_nodes(roots, leaves, internal);
  return internal;
}

char operator_symbol(BinaryOperator op) noexcept {
  switch (op) {
    case BinaryOperator::Add: return '+';
    case BinaryOperator::Subtract: return '-';
    case BinaryOperator::Multiply: return '*';
    case BinaryOperator::Divide: return '/';
  }
  return '?';
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = Kind::Variable;
  e.name = std::move(name);
  return e;
}

Expr Expr::number(double value) {
  Expr e;
  e.kind = Kind::Number;
  e.value = value;
  return e;
}

Expr Expr::binary(BinaryOperator op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = op;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

Expr Expr::paren(Expr inner) {
  Expr e;
  e.kind = Kind::Paren;
  e.operands.push_back(std::move(inner));
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Variable: return text::name_key(a.name) == text::name_key(b.name);
    case Expr::Kind::Number: return a.value == b.value;
    case Expr::Kind::Binary:
      return a.op == b.op && structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case Expr::Kind::Paren: return structurally_equal(a.inner(), b.inner());
  }
  return false;
}

std::string to_string(const Expr& expr) {
  switch (expr.kind) {
    case Expr::Kind::Variable: return expr.name;
    case Expr::Kind::Number: return text::format_number(expr.value);
    case Expr::Kind::Binary:
      return to_string(expr.lhs()) + ' ' + operator_symbol(expr.op) + ' ' + to_string(expr.rhs());
    case Expr::Kind::Paren: return '(' + to_string(expr.inner()) + ')';
  }
  return {};
}

std::vector<std::string> referenced_names(const Expr& expr) {
  std::vector<std::string> out, keys;
  collect_names(expr, out, keys);
  return out;
}

bool uses_only_additive(const Expr& expr) {
  if (expr.kind == Expr::Kind::Binary &&
      (expr.op == BinaryOperator::Multiply || expr.op == BinaryOperator::Divide))
    return false;
  for (const auto& child : expr.operands)
    if (!uses_only_additive(child)) return false;
  return true;
}

}  // namespace bam
