#include "bam/model.hpp"

#include "bam/error.hpp"
#include "bam/text.hpp"

#include <algorithm>
#include <map>

namespace bam {

// ---------------------------------------------------------------------------
// VariableTable

std::optional<std::size_t> VariableTable::find(std::string_view name) const {
  auto it = index_.find(text::name_key(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariableTable::at(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorKind::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

std::size_t VariableTable::intern(std::string_view name) {
  auto key = text::name_key(name);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  Variable v;
  v.key = key;
  v.name = text::collapse_spaces(name);
  variables_.push_back(std::move(v));
  index_.emplace(std::move(key), variables_.size() - 1);
  return variables_.size() - 1;
}

std::vector<std::size_t> VariableTable::inputs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].is_input()) out.push_back(i);
  return out;
}

std::vector<std::size_t> VariableTable::calculated() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (!variables_[i].is_input()) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// analyze

namespace {

std::vector<std::vector<std::size_t>> resolve_breakdowns(const ModelDocument& doc) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& report : doc.reports) {
    std::vector<std::size_t> resolved;
    for (const auto& title : report.breakdown) {
      auto key = text::name_key(title);
      auto it = std::find_if(doc.hierarchies.begin(), doc.hierarchies.end(),
                             [&](const CategoryHierarchy& h) { return text::name_key(h.title) == key; });
      if (it == doc.hierarchies.end())
        throw Error(ErrorKind::UnknownBreakdownTitle,
                    "report '" + report.name + "' breaks down by undeclared hierarchy '" + title + "'",
                    report.source_line);
      auto index = static_cast<std::size_t>(it - doc.hierarchies.begin());
      if (std::find(resolved.begin(), resolved.end(), index) != resolved.end())
        throw Error(ErrorKind::UnknownBreakdownTitle,
                    "hierarchy '" + title + "' listed twice in the breakdown of '" + report.name + "'",
                    report.source_line);
      resolved.push_back(index);
    }
    out.push_back(std::move(resolved));
  }
  return out;
}

std::string describe_breakdown(const ModelDocument& doc, const std::vector<std::size_t>& breakdown) {
  if (breakdown.empty()) return "no breakdown";
  std::string out;
  for (auto h : breakdown) out += (out.empty() ? "" : ", ") + doc.hierarchies[h].title;
  return out;
}

// Post-order DFS; throws with the cycle when a back edge is found.
std::vector<std::size_t> topological_order(const VariableTable& table, const std::vector<std::vector<std::size_t>>& edges) {
  enum class Mark : unsigned char { White, Gray, Black };
  std::vector<Mark> mark(table.size(), Mark::White);
  std::vector<std::size_t> order;
  order.reserve(table.size());

  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };
  std::vector<Frame> stack;

  for (std::size_t root = 0; root < table.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    stack.push_back({root, 0});
    mark[root] = Mark::Gray;
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next_edge < edges[top.node].size()) {
        auto child = edges[top.node][top.next_edge++];
        if (mark[child] == Mark::Gray) {
          auto from = std::find_if(stack.begin(), stack.end(), [&](const Frame& f) { return f.node == child; });
          std::string cycle;
          int line = table[from->node].definition ? table[from->node].definition->source_line : 0;
          for (auto it = from; it != stack.end(); ++it) cycle += table[it->node].name + " -> ";
          cycle += table[child].name;
          throw Error(ErrorKind::CyclicDependency, "circular definition: " + cycle, line);
        }
        if (mark[child] == Mark::White) {
          mark[child] = Mark::Gray;
          stack.push_back({child, 0});
        }
      } else {
        mark[top.node] = Mark::Black;
        order.push_back(top.node);
        stack.pop_back();
      }
    }
  }
  return order;
}

}  // namespace

SemanticModel analyze(ModelDocument doc) {
  SemanticModel model;
  model.report_breakdowns = resolve_breakdowns(doc);
  auto& table = model.variables;
  std::vector<bool> breakdown_set;

  auto note_use = [&](std::size_t v, std::size_t report, int line) {
    if (breakdown_set.size() < table.size()) breakdown_set.resize(table.size(), false);
    auto& var = table[v];
    const auto& breakdown = model.report_breakdowns[report];
    if (!breakdown_set[v]) {
      var.breakdown = breakdown;
      breakdown_set[v] = true;
    } else if (var.breakdown != breakdown) {
      throw Error(ErrorKind::InconsistentBreakdown,
                  "variable '" + var.name + "' is used with " + describe_breakdown(doc, var.breakdown) +
                      " and with " + describe_breakdown(doc, breakdown) + " (report '" + doc.reports[report].name + "')",
                  line);
    }
    if (std::find(var.reports.begin(), var.reports.end(), report) == var.reports.end()) var.reports.push_back(report);
  };

  for (std::size_t r = 0; r < doc.reports.size(); ++r) {
    for (const auto& formula : doc.reports[r].formulas) {
      auto target = table.intern(formula.target);
      note_use(target, r, formula.source_line);
      for (const auto& name : referenced_names(formula.body)) note_use(table.intern(name), r, formula.source_line);

      auto& var = table[target];
      if (var.definition) {
        if (!structurally_equal(var.definition->body, formula.body))
          throw Error(ErrorKind::ConflictingDefinition,
                      "'" + var.name + "' is defined differently on line " +
                          std::to_string(var.definition->source_line),
                      formula.source_line);
      } else {
        var.definition = formula;
        var.kind = VariableKind::Calculated;
        var.home_report = r;
      }
    }
  }

  model.graph.edges.resize(table.size());
  for (std::size_t v = 0; v < table.size(); ++v) {
    auto& var = table[v];
    if (!var.definition) continue;
    for (const auto& name : referenced_names(var.definition->body)) var.dependencies.push_back(table.at(name));
    model.graph.edges[v] = var.dependencies;
  }
  model.graph.order = topological_order(table, model.graph.edges);
  model.document = std::move(doc);
  return model;
}

// ---------------------------------------------------------------------------
// expand

std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ';';
    out += path[i];
  }
  return out;
}

std::vector<std::string> split_path(std::string_view joined) {
  std::vector<std::string> out;
  if (text::trim(joined).empty()) return out;
  for (auto part : text::split(joined, ';')) out.push_back(text::collapse_spaces(part));
  return out;
}

namespace {

std::string path_key(const std::vector<std::string>& path) {
  std::string key;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) key += ';';
    key += text::name_key(path[i]);
  }
  return key;
}

// One hierarchy flattened in display order.
struct DimRow {
  RowKind kind;
  std::string label;
  std::vector<std::string> path;
  int level;
  std::vector<std::size_t> leaves;  // leaf ordinals within the hierarchy
};

void flatten(const CategoryHierarchy& h, const std::vector<CategoryNode>& nodes, std::vector<std::string>& path,
             std::size_t& next_leaf, std::vector<DimRow>& out) {
  for (const auto& node : nodes) {
    path.push_back(node.name);
    if (node.is_leaf()) {
      out.push_back({RowKind::Leaf, node.name, path, node.depth - 1, {next_leaf++}});
    } else {
      out.push_back({RowKind::Header, node.name, path, node.depth - 1, {}});
      auto first = next_leaf;
      flatten(h, node.children, path, next_leaf, out);
      std::vector<std::size_t> leaves;
      for (auto l = first; l < next_leaf; ++l) leaves.push_back(l);
      out.push_back({RowKind::Rollup, node.name + ", All " + h.title, path, node.depth - 1, std::move(leaves)});
    }
    path.pop_back();
  }
}

std::vector<DimRow> flatten(const CategoryHierarchy& h) {
  std::vector<DimRow> out;
  std::vector<std::string> path;
  std::size_t next_leaf = 0;
  flatten(h, h.roots, path, next_leaf, out);
  std::vector<std::size_t> all(next_leaf);
  for (std::size_t i = 0; i < next_leaf; ++i) all[i] = i;
  out.push_back({RowKind::Grand, "All " + h.title, {"All " + h.title}, 0, std::move(all)});
  return out;
}

class LayoutBuilder {
 public:
  LayoutBuilder(const ModelDocument& doc, std::vector<std::size_t> breakdown) {
    layout_.breakdown = std::move(breakdown);
    for (auto h : layout_.breakdown) dims_.push_back(flatten(doc.hierarchies[h]));
  }

  RowLayout build() {
    if (dims_.empty()) {
      CategoryRow row;
      row.kind = RowKind::Leaf;
      row.leaves = {0};
      layout_.rows.push_back(row);
      layout_.data_rows = {0};
      layout_.leaf_count = 1;
      layout_.path_index.emplace("", 0);
      return std::move(layout_);
    }
    std::vector<const DimRow*> coords;
    std::vector<std::string> path;
    emit(0, coords, path, 0);
    link_leaves();
    return std::move(layout_);
  }

 private:
  void emit(std::size_t dim, std::vector<const DimRow*>& coords, std::vector<std::string>& path, int base_level) {
    for (const auto& r : dims_[dim]) {
      CategoryRow row;
      row.label = r.label;
      row.path = path;
      row.path.insert(row.path.end(), r.path.begin(), r.path.end());
      row.level = base_level + r.level;

      if (r.kind == RowKind::Header) {
        row.kind = RowKind::Header;
        layout_.rows.push_back(std::move(row));
        continue;
      }
      coords.push_back(&r);
      if (dim + 1 == dims_.size()) {
        row.kind = combined_kind(coords);
        row.data_index = layout_.data_rows.size();
        layout_.data_rows.push_back(layout_.rows.size());
        layout_.path_index.emplace(path_key(row.path), row.data_index);
        coords_.push_back(coords);
        layout_.rows.push_back(std::move(row));
      } else {
        row.kind = RowKind::Header;
        auto inner_path = row.path;
        layout_.rows.push_back(std::move(row));
        emit(dim + 1, coords, inner_path, base_level + r.level + 1);
      }
      coords.pop_back();
    }
  }

  static RowKind combined_kind(const std::vector<const DimRow*>& coords) {
    bool all_leaf = true, all_grand = true;
    for (auto* c : coords) {
      all_leaf = all_leaf && c->kind == RowKind::Leaf;
      all_grand = all_grand && c->kind == RowKind::Grand;
    }
    return all_leaf ? RowKind::Leaf : all_grand ? RowKind::Grand : RowKind::Rollup;
  }

  void link_leaves() {
    std::map<std::vector<std::size_t>, std::size_t> leaf_at;
    for (std::size_t d = 0; d < coords_.size(); ++d) {
      if (layout_.data_row(d).kind != RowKind::Leaf) continue;
      std::vector<std::size_t> ordinals;
      for (auto* c : coords_[d]) ordinals.push_back(c->leaves.front());
      leaf_at.emplace(std::move(ordinals), d);
    }
    layout_.leaf_count = leaf_at.size();

    for (std::size_t d = 0; d < coords_.size(); ++d) {
      auto& row = layout_.rows[layout_.data_rows[d]];
      // Cartesian product of per-dimension leaf sets, outermost dimension first.
      std::vector<std::vector<std::size_t>> combos{{}};
      for (auto* c : coords_[d]) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : combos)
          for (auto leaf : c->leaves) {
            next.push_back(prefix);
            next.back().push_back(leaf);
          }
        combos = std::move(next);
      }
      for (const auto& combo : combos) row.leaves.push_back(leaf_at.at(combo));
    }
  }

  RowLayout layout_;
  std::vector<std::vector<DimRow>> dims_;
  std::vector<std::vector<const DimRow*>> coords_;  // per data row
};

}  // namespace

std::optional<std::size_t> RowLayout::find_data_row(const std::vector<std::string>& path) const {
  auto it = path_index.find(path_key(path));
  if (it == path_index.end()) return std::nullopt;
  return it->second;
}

InstanceGrid expand(const SemanticModel& model) {
  InstanceGrid grid;
  grid.period_count = model.document.time_frame.period_count;
  std::map<std::vector<std::size_t>, std::size_t> layout_of;

  auto layout_for = [&](const std::vector<std::size_t>& breakdown) {
    auto [it, inserted] = layout_of.emplace(breakdown, grid.layouts.size());
    if (inserted) grid.layouts.push_back(LayoutBuilder(model.document, breakdown).build());
    return it->second;
  };

  for (const auto& var : model.variables) grid.variable_layout.push_back(layout_for(var.breakdown));

  for (std::size_t r = 0; r < model.document.reports.size(); ++r) {
    ReportGrid rg;
    rg.report = r;
    rg.layout = layout_for(model.report_breakdowns[r]);
    auto add_unique = [](std::vector<std::size_t>& list, std::size_t v) {
      if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
    };
    for (const auto& f : model.document.reports[r].formulas) {
      auto target = model.variables.at(f.target);
      add_unique(rg.targets, target);
      add_unique(rg.variables, target);
      for (const auto& name : referenced_names(f.body)) add_unique(rg.variables, model.variables.at(name));
    }
    grid.reports.push_back(std::move(rg));
  }
  return grid;
}

}  // namespace bam
