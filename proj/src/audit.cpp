#include "bam/audit.hpp"

#include "bam/error.hpp"
#include "bam/parser.hpp"
#include "bam/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bam::audit {

// ---------------------------------------------------------------------------
// dependency trees

namespace {

DependencyNode grow(const SemanticModel& model, std::size_t v, std::vector<bool>& expanded) {
  DependencyNode node;
  node.variable = v;
  const auto& var = model.variables[v];
  node.input = var.is_input();
  if (node.input) return node;
  if (expanded[v]) {
    node.repeated = true;
    return node;
  }
  expanded[v] = true;
  for (auto child : var.dependencies) node.children.push_back(grow(model, child, expanded));
  return node;
}

void render(const SemanticModel& model, const DependencyNode& node, const std::string& prefix, bool last, bool root,
            std::string& out) {
  if (root) {
    out += model.variables[node.variable].name;
  } else {
    out += prefix + (last ? "`-- " : "|-- ") + model.variables[node.variable].name;
  }
  if (node.repeated) out += " (see above)";
  out += '\n';
  auto child_prefix = root ? std::string() : prefix + (last ? "    " : "|   ");
  for (std::size_t i = 0; i < node.children.size(); ++i)
    render(model, node.children[i], child_prefix, i + 1 == node.children.size(), false, out);
}

void collect_inputs(const DependencyNode& node, std::set<std::size_t>& seen, std::vector<std::size_t>& out) {
  if (node.input && seen.insert(node.variable).second) out.push_back(node.variable);
  for (const auto& c : node.children) collect_inputs(c, seen, out);
}

}  // namespace

DependencyNode dependency_tree(const SemanticModel& model, std::string_view variable) {
  auto v = model.variables.at(variable);
  std::vector<bool> expanded(model.variables.size(), false);
  return grow(model, v, expanded);
}

std::string render_tree(const SemanticModel& model, const DependencyNode& root) {
  std::string out;
  render(model, root, "", true, true, out);
  return out;
}

std::vector<std::size_t> tree_inputs(const DependencyNode& root) {
  std::set<std::size_t> seen;
  std::vector<std::size_t> out;
  collect_inputs(root, seen, out);
  return out;
}

// ---------------------------------------------------------------------------
// census

namespace {

// Same tree with every identifier spelled by its variable's display name.
Expr respell(const SemanticModel& model, Expr e) {
  if (e.kind == Expr::Kind::Variable) e.name = model.variables[model.variables.at(e.name)].name;
  for (auto& o : e.operands) o = respell(model, std::move(o));
  return e;
}

}  // namespace

Census formula_census(const SemanticModel& model) {
  Census census;
  for (auto v : model.variables.calculated()) {
    const auto& var = model.variables[v];
    CensusEntry entry;
    entry.formula = var.name + " = " + to_string(respell(model, var.definition->body));
    entry.variable = v;
    for (std::size_t r = 0; r < model.document.reports.size(); ++r) {
      const auto& report = model.document.reports[r];
      bool defines = std::any_of(report.formulas.begin(), report.formulas.end(), [&](const FormulaDef& f) {
        return text::name_key(f.target) == var.key;
      });
      if (defines) entry.reports.push_back(report.name);
    }
    std::sort(entry.reports.begin(), entry.reports.end());
    entry.reports.erase(std::unique(entry.reports.begin(), entry.reports.end()), entry.reports.end());
    census.formulas.push_back(std::move(entry));
  }
  std::sort(census.formulas.begin(), census.formulas.end(),
            [](const CensusEntry& a, const CensusEntry& b) {
              auto ka = text::to_lower(a.formula), kb = text::to_lower(b.formula);
              return ka != kb ? ka < kb : a.formula < b.formula;
            });
  return census;
}

std::string render_census(const Census& census) {
  std::string out = std::to_string(census.count()) + " distinct formulas\n";
  for (const auto& e : census.formulas) {
    out += e.formula + "    [";
    for (std::size_t i = 0; i < e.reports.size(); ++i) out += (i ? ", " : "") + e.reports[i];
    out += "]\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// sensitivity

std::vector<SensitivityEntry> sensitivity_rank(const SemanticModel& model, const InstanceGrid& grid,
                                               const ValueCube& inputs, std::string_view target, std::size_t period,
                                               const std::vector<std::string>& category_path,
                                               const EvalOptions& options) {
  auto t = model.variables.at(target);
  if (model.variables[t].is_input())
    throw Error(ErrorKind::TargetNotCalculated, "'" + model.variables[t].name + "' is an input, not calculated");
  if (period >= static_cast<std::size_t>(model.document.time_frame.period_count))
    throw Error(ErrorKind::PeriodOutOfRange, "period " + std::to_string(period) + " is outside the time frame");
  auto row = grid.layout_of(t).find_data_row(category_path);
  if (!row)
    throw Error(ErrorKind::UnknownCategoryPath,
                "category '" + join_path(category_path) + "' is not a row of '" + model.variables[t].name + "'");

  EvalOptions quiet = options;
  quiet.strict = false;
  const Instance at{t, *row, period};
  const auto base = evaluate(model, grid, inputs, quiet).values.get(at);
  if (!base) throw Error(ErrorKind::UndefinedBase, "base value of " + describe(model, grid, at) + " is UNDEFINED");

  // Inputs reachable from the target, in variable-table order.
  std::vector<bool> reach(model.variables.size(), false);
  std::vector<std::size_t> stack{t};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto d : model.variables[v].dependencies)
      if (!reach[d]) {
        reach[d] = true;
        stack.push_back(d);
      }
  }
  std::vector<std::size_t> candidates;
  for (std::size_t v = 0; v < model.variables.size(); ++v)
    if (reach[v] && model.variables[v].is_input()) candidates.push_back(v);

  std::vector<SensitivityEntry> entries(candidates.size());
  const auto periods = inputs.period_count();

  // Each perturbed evaluation is independent of the others.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(candidates.size()); ++i) {
    const auto v = candidates[static_cast<std::size_t>(i)];
    const auto& layout = grid.layout_of(v);
    ValueCube perturbed = inputs;
    for (std::size_t r = 0; r < layout.data_row_count(); ++r) {
      if (layout.data_row(r).kind != RowKind::Leaf) continue;
      for (std::size_t p = 0; p < periods; ++p) {
        Instance in{v, r, p};
        double x = perturbed.contains(in) ? perturbed.raw(in) : 0.0;
        perturbed.set(in, x == 0.0 ? 1.0 : x * (1.0 + kPerturbation));
      }
    }
    auto moved = evaluate_serial(model, grid, perturbed, quiet).values.get(at);
    entries[static_cast<std::size_t>(i)].input = model.variables[v].name;
    entries[static_cast<std::size_t>(i)].delta = moved ? *moved - *base : kUndefined;
  }

  std::sort(entries.begin(), entries.end(), [](const SensitivityEntry& a, const SensitivityEntry& b) {
    bool a_nan = std::isnan(a.delta), b_nan = std::isnan(b.delta);
    if (a_nan != b_nan) return b_nan;
    if (!a_nan && std::fabs(a.delta) != std::fabs(b.delta)) return std::fabs(a.delta) > std::fabs(b.delta);
    return a.input < b.input;
  });
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = i + 1;
  return entries;
}

std::string render_sensitivity(const std::vector<SensitivityEntry>& entries) {
  std::string out = "rank,input,delta\n";
  for (const auto& e : entries)
    out += std::to_string(e.rank) + "," + e.input + "," + (std::isnan(e.delta) ? "" : text::format_number(e.delta)) +
           "\n";
  return out;
}

// ---------------------------------------------------------------------------
// documentation

namespace {

void outline_comment(const std::vector<CategoryNode>& nodes, int depth, std::string& out) {
  for (const auto& n : nodes) {
    out += "#   " + std::string(2 * (depth - 1), ' ') + n.name + (n.is_leaf() ? "" : " (roll-up)") + "\n";
    outline_comment(n.children, depth + 1, out);
  }
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.resize(width, ' ');
  return s;
}

}  // namespace

std::string export_docs(const SemanticModel& model) {
  const auto& doc = model.document;
  std::size_t inputs = model.variables.inputs().size();
  std::size_t calculated = model.variables.size() - inputs;

  std::string out;
  out += "# Model documentation\n";
  out += "#\n";
  out += "# " + std::to_string(doc.hierarchies.size()) + " hierarchies, " + std::to_string(doc.reports.size()) +
         " reports, " + std::to_string(calculated) + " formulas, " + std::to_string(inputs) + " inputs\n";
  out += "# Lines starting with '#' are commentary; everything else is the model.\n";
  out += "\n# Time frame\n";
  out += print_time_frame(doc.time_frame);

  if (!doc.hierarchies.empty()) {
    out += "\n# Category hierarchies\n";
    for (const auto& h : doc.hierarchies) {
      out += "#\n# " + h.title + ": " + std::to_string(h.leaf_count()) + " leaves, " +
             std::to_string(h.internal_count()) + " roll-ups plus 'All " + h.title + "'\n";
      outline_comment(h.roots, 1, out);
    }
    out += "\n" + print_categories(doc);
  }

  for (std::size_t r = 0; r < doc.reports.size(); ++r) {
    const auto& report = doc.reports[r];
    out += "\n# ------------------------------------------------------------\n";
    out += "# Report: " + report.name + "\n";
    out += "# Breakdown: ";
    if (report.breakdown.empty()) {
      out += "none\n";
    } else {
      for (std::size_t i = 0; i < report.breakdown.size(); ++i) out += (i ? ", " : "") + report.breakdown[i];
      out += "\n";
    }
    out += "# Formulas: " + std::to_string(report.formulas.size()) + "\n";
    out += "Report: " + report.name + "\n";
    if (!report.breakdown.empty()) {
      out += "Breakdown by ";
      for (std::size_t i = 0; i < report.breakdown.size(); ++i) out += (i ? ", " : "") + report.breakdown[i];
      out += "\n";
    }
    for (const auto& f : report.formulas) out += print_formula(f) + "\n";

    out += "#\n# Variables\n";
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < model.variables.size(); ++v) {
      const auto& reps = model.variables[v].reports;
      if (std::find(reps.begin(), reps.end(), r) != reps.end()) vars.push_back(v);
    }
    std::size_t width = 0;
    for (auto v : vars) width = std::max(width, model.variables[v].name.size());
    for (auto v : vars)
      out += "#   " + pad(model.variables[v].name, width + 2) +
             (model.variables[v].is_input() ? "input" : "calculated") + "\n";
  }
  return out;
}

}  // namespace bam::audit
