#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bam {

enum class PeriodUnit { Year, Quarter, Month };

struct TimeFrame {
  PeriodUnit unit = PeriodUnit::Year;
  int period_count = 1;
  int start_year = 0;

  // "2005" for yearly frames, "Q1 2005" for quarters, "Jan 2005" for months.
  std::string period_label(int period) const;

  bool operator==(const TimeFrame&) const = default;
};

std::string unit_word(PeriodUnit unit);

struct CategoryNode {
  std::string name;
  int depth = 1;
  std::vector<CategoryNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
  bool operator==(const CategoryNode&) const = default;
};

struct CategoryHierarchy {
  std::string title;
  std::vector<CategoryNode> roots;
  int source_line = 0;

  std::size_t leaf_count() const;
  std::size_t internal_count() const;

  friend bool operator==(const CategoryHierarchy& a, const CategoryHierarchy& b) {
    return a.title == b.title && a.roots == b.roots;
  }
};

enum class BinaryOperator { Add, Subtract, Multiply, Divide };

char operator_symbol(BinaryOperator op) noexcept;

// Formula right-hand side. Parenthesised groups are kept as Paren nodes so
// the tree prints back the way it was written.
struct Expr {
  enum class Kind { Variable, Number, Binary, Paren };

  Kind kind = Kind::Number;
  std::string name;  // Variable
  double value = 0;  // Number
  BinaryOperator op = BinaryOperator::Add;
  std::vector<Expr> operands;  // Binary: {lhs, rhs}; Paren: {inner}

  static Expr variable(std::string name);
  static Expr number(double value);
  static Expr binary(BinaryOperator op, Expr lhs, Expr rhs);
  static Expr paren(Expr inner);

  const Expr& lhs() const { return operands[0]; }
  const Expr& rhs() const { return operands[1]; }
  const Expr& inner() const { return operands[0]; }

  // Exact equality, names compared byte for byte.
  friend bool operator==(const Expr&, const Expr&) = default;
};

// Equality with variable names compared by normalized key.
bool structurally_equal(const Expr& a, const Expr& b);

// Canonical infix text: single spaces around operators, ASCII operators.
std::string to_string(const Expr& expr);

// Variable names in first-reference order, duplicates (by key) removed.
std::vector<std::string> referenced_names(const Expr& expr);

bool uses_only_additive(const Expr& expr);

struct FormulaDef {
  std::string target;
  Expr body;
  int source_line = 0;

  friend bool operator==(const FormulaDef& a, const FormulaDef& b) {
    return a.target == b.target && a.body == b.body;
  }
};

struct ReportDef {
  std::string name;
  std::vector<std::string> breakdown;
  std::vector<FormulaDef> formulas;
  int source_line = 0;

  friend bool operator==(const ReportDef& a, const ReportDef& b) {
    return a.name == b.name && a.breakdown == b.breakdown && a.formulas == b.formulas;
  }
};

struct ModelDocument {
  TimeFrame time_frame;
  std::vector<CategoryHierarchy> hierarchies;
  std::vector<ReportDef> reports;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

}  // namespace bam
