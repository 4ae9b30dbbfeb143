#include "bam/error.hpp"
#include "bam/model.hpp"
#include "bam/parser.hpp"
#include "bam/text.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace bam {
namespace {

using testing::fixture;
using testing::load;

constexpr std::string_view kFrame = "Each period is one year.\nThe number of periods is 3.\nThe first period starts in 2005.\n";

std::set<std::string> names_of(const SemanticModel& m, const std::vector<std::size_t>& ids) {
  std::set<std::string> out;
  for (auto i : ids) out.insert(m.variables[i].name);
  return out;
}

ErrorKind analyze_error(std::string_view text) {
  try {
    analyze(parse_model(text));
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::Io;
}

TEST(Analyze, SampleClassification) {
  auto p = load(fixture("sample.bam"));
  EXPECT_EQ(names_of(p.model, p.model.variables.inputs()),
            (std::set<std::string>{"Cost of Sales", "Turnover", "Selling and Distributions", "Administrative Expenses",
                                   "Other Income", "Interest", "Taxes", "Raw Materials", "Labour", "Current Assets",
                                   "Current Liabilities", "Short Term Investments", "Cash",
                                   "Cash Flow from Operations"}));
  EXPECT_EQ(names_of(p.model, p.model.variables.calculated()),
            (std::set<std::string>{"Gross Profit", "Operating Profit", "Profit Before Taxes", "Profit",
                                   "Cost of Goods Sold", "Selling and Administrative Expenses", "Current Ratio",
                                   "Cash Ratio", "Operating Cash Flow Ratio"}));
}

TEST(Analyze, OneEdgeClassification) {
  auto p = load(std::string(kFrame) + "Report: R\nProfit = Revenue - Cost\n");
  EXPECT_EQ(names_of(p.model, p.model.variables.inputs()), (std::set<std::string>{"Revenue", "Cost"}));
  EXPECT_EQ(names_of(p.model, p.model.variables.calculated()), std::set<std::string>{"Profit"});
}

TEST(Analyze, SmallestCycle) {
  try {
    analyze(parse_model(std::string(kFrame) + "Report: R\nA = B\nB = A\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CyclicDependency);
    EXPECT_NE(e.message().find("A"), std::string::npos);
    EXPECT_NE(e.message().find("B"), std::string::npos);
  }
  EXPECT_EQ(analyze_error(std::string(kFrame) + "Report: R\nA = A + 1\n"), ErrorKind::CyclicDependency);
}

TEST(Analyze, ConflictingDefinition) {
  EXPECT_EQ(analyze_error(std::string(kFrame) + "Report: R\nA = B + C\nReport: S\nA = B - C\n"),
            ErrorKind::ConflictingDefinition);
}

TEST(Analyze, UnknownBreakdownTitle) {
  EXPECT_EQ(analyze_error(std::string(kFrame) + "Report: R\nBreakdown by Regions\nA = B\n"),
            ErrorKind::UnknownBreakdownTitle);
}

TEST(Analyze, InconsistentBreakdown) {
  auto text = std::string(kFrame) +
              "Categories:\nMarkets =\n1 North\n2 South\nReport: R\nBreakdown by Markets\nA = B\nReport: S\nC = B * 2\n";
  EXPECT_EQ(analyze_error(text), ErrorKind::InconsistentBreakdown);
}

TEST(Analyze, IdenticalDefinitionsMerge) {
  auto p = load(std::string(kFrame) + "Report: R\nMargin = Sales – Costs\nReport: S\nmargin  =  SALES - costs\n");
  auto v = p.model.variables.at("Margin");
  EXPECT_EQ(p.model.variables[v].reports, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(p.model.variables[v].name, "Margin");
  EXPECT_EQ(p.model.variables.calculated().size(), 1u);
}

TEST(Analyze, ConstantFormulaIsCalculated) {
  auto p = load(std::string(kFrame) + "Report: R\nTax Rate = 0.3\nTax = Profit * Tax Rate\n");
  auto v = p.model.variables.at("tax rate");
  EXPECT_FALSE(p.model.variables[v].is_input());
  EXPECT_TRUE(p.model.variables[v].dependencies.empty());
}

TEST(Analyze, NodeNamesAreOrdinaryVariables) {
  auto p = load(std::string(kFrame) + "Categories:\nMarkets =\n1 France\nReport: R\nX = France + 1\n");
  EXPECT_TRUE(p.model.variables[p.model.variables.at("France")].is_input());
}

TEST(Analyze, UnknownVariableLookup) {
  auto p = load(fixture("sample.bam"));
  try {
    (void)p.model.variables.at("Nonexistent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownVariable);
  }
}

void expect_topological(const SemanticModel& m) {
  std::vector<std::size_t> pos(m.variables.size());
  ASSERT_EQ(m.graph.order.size(), m.variables.size());
  for (std::size_t i = 0; i < m.graph.order.size(); ++i) pos[m.graph.order[i]] = i;
  for (std::size_t v = 0; v < m.variables.size(); ++v) {
    EXPECT_EQ(m.variables[v].is_input(), m.graph.edges[v].empty() && !m.variables[v].definition);
    for (auto d : m.graph.edges[v]) EXPECT_LT(pos[d], pos[v]);
  }
}

TEST(AnalyzeProperty, TopologicalConsistency) {
  expect_topological(load(fixture("sample.bam")).model);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) expect_topological(load(testing::random_model(seed)).model);
}

TEST(AnalyzeProperty, ClassificationLaw) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto doc = parse_model(testing::random_model(seed));
    std::set<std::string> targets;
    for (const auto& r : doc.reports)
      for (const auto& f : r.formulas) targets.insert(text::name_key(f.target));
    auto model = analyze(doc);
    for (const auto& v : model.variables) EXPECT_EQ(v.is_input(), !targets.contains(v.key)) << v.name;
  }
}

// ---------------------------------------------------------------------------
// Expansion

std::vector<std::string> labels(const RowLayout& layout) {
  std::vector<std::string> out;
  for (const auto& r : layout.rows) out.push_back(r.label);
  return out;
}

TEST(Expand, MarketsLayout) {
  auto p = load(fixture("sample.bam"));
  ASSERT_EQ(p.grid.layouts.size(), 1u);
  const auto& layout = p.grid.layouts[0];
  EXPECT_EQ(labels(layout), (std::vector<std::string>{"North America", "Canada", "United States",
                                                      "North America, All Markets", "European Union", "United Kingdom",
                                                      "France", "European Union, All Markets", "All Markets"}));
  EXPECT_EQ(layout.data_row_count(), 7u);
  EXPECT_EQ(layout.leaf_count, 4u);
  auto uk = layout.find_data_row({"european union", "united  kingdom"});
  ASSERT_TRUE(uk);
  EXPECT_EQ(layout.data_row(*uk).kind, RowKind::Leaf);
  auto grand = layout.find_data_row({"All Markets"});
  ASSERT_TRUE(grand);
  EXPECT_EQ(layout.data_row(*grand).leaves.size(), 4u);
  EXPECT_EQ(p.grid.period_count, 3);
}

TEST(Expand, EmptyBreakdownHasOneRow) {
  auto p = load(std::string(kFrame) + "Report: R\nA = B + C\n");
  const auto& layout = p.grid.layout_of(p.model.variables.at("A"));
  ASSERT_EQ(layout.data_row_count(), 1u);
  EXPECT_TRUE(layout.data_row(0).path.empty());
}

TEST(Expand, TwoHierarchyBreakdown) {
  auto text = fixture("sample.bam");
  text += "\nReport: Mix\nBreakdown by Products, Markets\nUnits Margin = Units Sold * Unit Margin\n";
  auto p = load(text);
  const auto& layout = p.grid.layout_of(p.model.variables.at("Units Margin"));
  EXPECT_EQ(layout.leaf_count, 8u);
  std::size_t leaves = 0;
  for (const auto& r : layout.rows) leaves += r.kind == RowKind::Leaf;
  EXPECT_EQ(leaves, 8u);
  // (2 products + All Products) x (4 leaves + 2 roll-ups + All Markets)
  EXPECT_EQ(layout.data_row_count(), 3u * 7u);
  auto row = layout.find_data_row({"Advanced", "North America"});
  ASSERT_TRUE(row);
  EXPECT_EQ(layout.data_row(*row).leaves.size(), 2u);
  auto all = layout.find_data_row({"All Products", "All Markets"});
  ASSERT_TRUE(all);
  EXPECT_EQ(layout.data_row(*all).leaves.size(), 8u);
}

std::size_t count_nodes(const std::vector<CategoryNode>& nodes) {
  std::size_t n = 0;
  for (const auto& c : nodes) n += 1 + count_nodes(c.children);
  return n;
}

TEST(ExpandProperty, Cardinality) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto p = load(testing::random_model(seed));
    for (const auto& layout : p.grid.layouts) {
      std::size_t leaves = 1, data = 1;
      for (auto h : layout.breakdown) {
        const auto& hier = p.model.document.hierarchies[h];
        leaves *= hier.leaf_count();
        data *= count_nodes(hier.roots) + 1;
      }
      EXPECT_EQ(layout.leaf_count, leaves);
      EXPECT_EQ(layout.data_row_count(), data);
      for (std::size_t d = 0; d < layout.data_row_count(); ++d) {
        const auto& row = layout.data_row(d);
        EXPECT_EQ(row.data_index, d);
        EXPECT_GE(row.path.size(), layout.breakdown.size());
        if (row.kind == RowKind::Leaf) EXPECT_EQ(row.leaves, std::vector<std::size_t>{d});
        for (auto l : row.leaves) EXPECT_EQ(layout.data_row(l).kind, RowKind::Leaf);
      }
    }
  }
}

}  // namespace
}  // namespace bam
