// One line per acceptance criterion; exit status is non-zero if any fails.
// Usage: acceptance [unit-test-binary...]  (the binaries feed criterion 12)

#include "bam/audit.hpp"
#include "bam/eval.hpp"
#include "bam/parser.hpp"
#include "bam/style.hpp"
#include "bam/text.hpp"
#include "bam/verify.hpp"
#include "bam/workbook.hpp"
#include "cli.hpp"

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <unistd.h>

namespace {

using namespace bam;
using testing::fixture;
using testing::load;
using testing::Pipeline;
using Clock = std::chrono::steady_clock;

constexpr double kParseBudgetSeconds = 1.0;
constexpr double kExactTolerance = 0.0;
constexpr double kDisplayedTolerance = 2.0;
constexpr double kSensitivityExpected = 515.14;
constexpr double kSensitivityTolerance = 1e-6;
constexpr int kFuzzModels = 1000;
constexpr double kSuiteBudgetSeconds = 60.0;

const std::vector<std::string> kUk{"European Union", "United Kingdom"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates failures; the first few are kept for the report line.
struct Check {
  Outcome out;
  int failures = 0;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures <= 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
    out.pass = false;
  }
  Outcome done(const std::string& summary) {
    if (out.pass) out.detail = summary;
    else if (failures > 3) out.detail += "; " + std::to_string(failures - 3) + " more";
    return out;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double value_at(const Pipeline& p, const ValueCube& cube, std::string_view var, const std::vector<std::string>& path,
                std::size_t period) {
  auto v = p.model.variables.at(var);
  return cube.raw({v, *p.grid.layout_of(v).find_data_row(path), period});
}

std::set<std::string> names_of(const SemanticModel& m, const std::vector<std::size_t>& ids) {
  std::set<std::string> out;
  for (auto i : ids) out.insert(m.variables[i].name);
  return out;
}

// ---------------------------------------------------------------------------

Outcome golden_parse() {
  Check c;
  auto text = fixture("sample.bam");
  auto t0 = Clock::now();
  auto doc = parse_model(text);
  double elapsed = seconds_since(t0);
  c.require(doc.time_frame == TimeFrame{PeriodUnit::Year, 3, 2005}, "time frame");
  c.require(doc.hierarchies.size() == 2, "hierarchy count");
  if (doc.hierarchies.size() == 2) {
    c.require(doc.hierarchies[0].title == "Markets" && doc.hierarchies[0].leaf_count() == 4 &&
                  doc.hierarchies[0].internal_count() == 2,
              "Markets shape");
    c.require(doc.hierarchies[1].title == "Products" && doc.hierarchies[1].leaf_count() == 2, "Products shape");
  }
  c.require(doc.reports.size() == 2 && doc.reports[0].formulas.size() == 6 && doc.reports[1].formulas.size() == 3,
            "report formula counts");
  c.require(elapsed < kParseBudgetSeconds, "parse took " + std::to_string(elapsed) + " s");
  return c.done("year x3 from 2005; Markets 4/2, Products 2; reports 6+3; parsed in " +
                std::to_string(elapsed * 1e3).substr(0, 5) + " ms");
}

Outcome classification() {
  Check c;
  auto p = load(fixture("sample.bam"));
  std::set<std::string> inputs{"Cost of Sales", "Turnover", "Selling and Distributions", "Administrative Expenses",
                               "Other Income", "Interest", "Taxes", "Raw Materials", "Labour", "Current Assets",
                               "Current Liabilities", "Short Term Investments", "Cash", "Cash Flow from Operations"};
  std::set<std::string> calculated{"Gross Profit", "Operating Profit", "Profit Before Taxes", "Profit",
                                   "Cost of Goods Sold", "Selling and Administrative Expenses", "Current Ratio",
                                   "Cash Ratio", "Operating Cash Flow Ratio"};
  c.require(names_of(p.model, p.model.variables.inputs()) == inputs, "input set differs");
  c.require(names_of(p.model, p.model.variables.calculated()) == calculated, "calculated set differs");
  return c.done("14 inputs and 9 calculated, exact set equality");
}

Outcome reproduce_2005() {
  Check c;
  auto p = load(fixture("sample.bam"));
  auto cube = evaluate(p.model, p.grid, load_inputs(fixture("uk2005.csv"), p.model, p.grid)).values;
  const std::pair<const char*, double> expected[] = {
      {"Gross Profit", 24419}, {"Operating Profit", 4946},    {"Profit Before Taxes", 3312},
      {"Profit", 2969},        {"Cost of Goods Sold", 27095}, {"Selling and Administrative Expenses", 19473}};
  for (auto [name, want] : expected) {
    double got = value_at(p, cube, name, kUk, 0);
    c.require(std::abs(got - want) <= kExactTolerance, std::string(name) + " = " + std::to_string(got));
  }
  return c.done("all six 2005 values exact (tolerance 0)");
}

Outcome reproduce_2006_2007() {
  Check c;
  // Desk-check of the displayed inputs, worked by hand:
  //   2006: S&A 13235 + 7211 = 20446 (shown 20447), GP 54090 - 28450 = 25640,
  //         OP 25640 - 20446 = 5194 (5193), PBT 5194 + 13 - 1728 = 3479 (3478),
  //         P 3479 - 360 = 3119 (3117), COGS 20920 + 7530 = 28450
  //   2007: S&A 21469, GP 26922, OP 5453, PBT 3651, P 3273, COGS 29872, all as shown
  const std::map<std::pair<std::string, int>, double> desk = {
      {{"Selling and Administrative Expenses", 2006}, 1}, {{"Operating Profit", 2006}, 1},
      {{"Profit Before Taxes", 2006}, 1},                 {{"Profit", 2006}, 2}};

  auto p = load(fixture("sample.bam"));
  auto inputs = load_inputs(fixture("uk_inputs.csv"), p.model, p.grid);
  double worst = 0;
  for (int year : {2006, 2007}) {
    auto observed = fixture("pnl_displayed_" + std::to_string(year) + ".csv");
    auto report = verify_against(p.model, p.grid, inputs, observed, kDisplayedTolerance);
    c.require(report.passed() && report.compared == 6, std::to_string(year) + " outside tolerance");
    auto exact = verify_against(p.model, p.grid, inputs, observed, 0);
    std::map<std::pair<std::string, int>, double> seen;
    for (const auto& m : exact.mismatches) {
      seen[{p.model.variables[m.at.variable].name, year}] = m.difference;
      worst = std::max(worst, m.difference);
    }
    for (const auto& [key, dev] : desk)
      if (key.second == year) c.require(seen[key] == dev, key.first + " deviation differs from desk-check");
    for (const auto& [key, dev] : seen) c.require(desk.contains(key), key.first + " deviates unexpectedly");
  }
  c.require(worst == 2, "maximum deviation " + std::to_string(worst));
  return c.done("within 2; deviations match the desk-check, maximum 2 at 2006 Profit");
}

Outcome rollup_modes() {
  Check c;
  testing::FuzzOptions additive;
  additive.additive_only = true;
  for (int seed = 1; seed <= kFuzzModels; ++seed) {
    auto p = load(testing::random_model(static_cast<std::uint64_t>(seed), additive));
    auto inputs = load_inputs(testing::random_inputs(p.model, p.grid, static_cast<std::uint64_t>(seed)), p.model, p.grid);
    EvalOptions sum;
    sum.rollup = RollupMode::Sum;
    c.require(evaluate(p.model, p.grid, inputs, sum).values.identical(evaluate(p.model, p.grid, inputs).values),
              "seed " + std::to_string(seed));
  }

  auto p = load(fixture("sample.bam"));
  auto csv = std::string("variable,category,period,value\n") +
             "Current Assets,North America;Canada,2005,100\nCurrent Liabilities,North America;Canada,2005,50\n"
             "Current Assets,North America;United States,2005,300\n"
             "Current Liabilities,North America;United States,2005,100\n";
  auto inputs = load_inputs(csv, p.model, p.grid);
  EvalOptions sum;
  sum.rollup = RollupMode::Sum;
  double s = value_at(p, evaluate(p.model, p.grid, inputs, sum).values, "Current Ratio", {"North America"}, 0);
  double r = value_at(p, evaluate(p.model, p.grid, inputs).values, "Current Ratio", {"North America"}, 0);
  c.require(s == 5.0 && r == 400.0 / 150.0, "Current Ratio roll-ups did not diverge as expected");
  return c.done(std::to_string(kFuzzModels) + " additive models identical; North America Current Ratio sum 5 vs recompute " +
                text::format_number(r).substr(0, 6));
}

std::size_t scan_workbook(const WorkbookModel& wb, Check& c, const std::string& label) {
  std::size_t formulas = 0;
  auto files = testing::unzip(xlsx_bytes(wb));
  static const std::regex f("<f>([^<]*)</f>");
  for (const auto& [path, body] : files) {
    if (!path.starts_with("xl/worksheets/")) continue;
    for (std::sregex_iterator it(body.begin(), body.end(), f), end; it != end; ++it, ++formulas)
      c.require(testing::scan_a1((*it)[1].str()).empty(), label + " xlsx: " + (*it)[1].str());
  }
  auto portable = render_portable(wb);
  static const std::regex pf("cell \\d+ formula (\"(?:[^\"\\\\]|\\\\.)*\")");
  std::size_t portable_formulas = 0;
  for (std::sregex_iterator it(portable.begin(), portable.end(), pf), end; it != end; ++it, ++portable_formulas)
    c.require(testing::scan_a1((*it)[1].str()).empty(), label + " portable: " + (*it)[1].str());
  c.require(portable_formulas == formulas, label + " portable and xlsx formula counts differ");
  return formulas;
}

Outcome no_a1() {
  Check c;
  auto p = load(fixture("sample.bam"));
  std::size_t formulas = scan_workbook(build_workbook(p.grid, p.model, StyleConfig{}), c, "sample");
  c.require(formulas > 0, "no formulas scanned");
  for (int seed = 1; seed <= kFuzzModels; ++seed) {
    auto q = load(testing::random_model(static_cast<std::uint64_t>(seed)));
    formulas += scan_workbook(build_workbook(q.grid, q.model, StyleConfig{}), c, "seed " + std::to_string(seed));
  }
  return c.done("0 A1 tokens in " + std::to_string(formulas) + " xlsx formulas and the portable form, sample + " +
                std::to_string(kFuzzModels) + " fuzzed models");
}

void agree(const Pipeline& p, const WorkbookModel& wb, const ValueCube& cube, Check& c, const std::string& label) {
  testing::SheetInterpreter interp(wb);
  auto names = testing::expected_names(p.model, p.grid);
  for (std::size_t v = 0; v < names.size(); ++v)
    for (std::size_t d = 0; d < names[v].size(); ++d)
      for (std::size_t t = 0; t < cube.period_count(); ++t) {
        double want = cube.raw({v, d, t});
        double got = interp.name_value(names[v][d], 1 + t);
        bool same = std::isnan(want) ? std::isnan(got) : std::memcmp(&want, &got, sizeof want) == 0;
        c.require(same, label + " " + names[v][d]);
      }
}

Outcome backend_agreement() {
  Check c;
  auto p = load(fixture("sample.bam"));
  auto inputs = load_inputs(fixture("uk_inputs.csv"), p.model, p.grid);
  WorkbookOptions o;
  o.seed = &inputs;
  agree(p, build_workbook(p.grid, p.model, StyleConfig{}, o), evaluate(p.model, p.grid, inputs).values, c, "sample");
  for (int seed = 1; seed <= kFuzzModels; ++seed) {
    auto q = load(testing::random_model(static_cast<std::uint64_t>(seed)));
    auto data = load_inputs(testing::random_inputs(q.model, q.grid, static_cast<std::uint64_t>(seed)), q.model, q.grid);
    WorkbookOptions w;
    w.seed = &data;
    w.rollup = seed % 2 ? RollupMode::Sum : RollupMode::Recompute;
    EvalOptions e;
    e.rollup = w.rollup;
    agree(q, build_workbook(q.grid, q.model, StyleConfig{}, w), evaluate(q.model, q.grid, data, e).values, c,
          "seed " + std::to_string(seed));
  }
  return c.done("name-graph interpreter equals shadow-eval bit for bit, sample + " + std::to_string(kFuzzModels) +
                " fuzzed models");
}

Outcome name_count() {
  Check c;
  auto p = load(fixture("sample.bam"));
  auto wb = build_workbook(p.grid, p.model, StyleConfig{});
  std::set<std::string> enumerated;
  for (std::size_t v = 0; v < p.model.variables.size(); ++v)
    for (const auto& row : p.grid.layout_of(v).rows)
      if (row.is_data()) enumerated.insert(p.model.variables[v].key + "|" + join_path(row.path));
  c.require(enumerated.size() == 23 * 7, "enumerated " + std::to_string(enumerated.size()));
  c.require(wb.names.size() == 161, "workbook has " + std::to_string(wb.names.size()));
  return c.done("161 defined names = 23 variables x 7 category rows");
}

Outcome sensitivity() {
  Check c;
  auto p = load(fixture("sample.bam"));
  auto inputs = load_inputs(fixture("uk2005.csv"), p.model, p.grid);
  auto ranking = audit::sensitivity_rank(p.model, p.grid, inputs, "Profit", 0, kUk);
  c.require(!ranking.empty() && ranking[0].input == "Turnover", "Turnover not first");
  if (!ranking.empty())
    c.require(std::abs(ranking[0].delta - kSensitivityExpected) <= kSensitivityTolerance,
              "delta " + text::format_number(ranking[0].delta));
  std::set<std::string> listed;
  for (const auto& e : ranking) listed.insert(e.input);
  for (auto v : p.model.variables.inputs()) {
    const auto& name = p.model.variables[v].name;
    auto tree = audit::dependency_tree(p.model, "Profit");
    auto reach = audit::tree_inputs(tree);
    bool reachable = std::find(reach.begin(), reach.end(), v) != reach.end();
    c.require(listed.contains(name) == reachable, name + (reachable ? " missing" : " listed without a path"));
  }
  return c.done("Turnover first, delta " + text::format_number(ranking.empty() ? 0 : ranking[0].delta).substr(0, 9) +
                "; " + std::to_string(listed.size()) + " reachable inputs ranked, others absent");
}

// Zeroes the DOS time and date fields of every local and central header.
std::string normalize_zip_times(std::string zip) {
  for (std::size_t i = 0; i + 4 <= zip.size(); ++i) {
    std::uint32_t sig;
    std::memcpy(&sig, zip.data() + i, 4);
    if (sig == 0x04034b50 && i + 14 <= zip.size()) std::memset(zip.data() + i + 10, 0, 4);
    if (sig == 0x02014b50 && i + 16 <= zip.size()) std::memset(zip.data() + i + 12, 0, 4);
  }
  return zip;
}

Outcome determinism() {
  Check c;
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / ("bam_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto model = testing::data_path("sample.bam");
  auto data = testing::data_path("uk_inputs.csv");
  std::ostringstream sink;
  for (const char* name : {"a.bamwb", "b.bamwb", "a.xlsx", "b.xlsx"}) {
    int code = cli::run({"generate", model, "-o", (dir / name).string(), "--data", data}, sink, sink);
    c.require(code == 0, std::string("generate ") + name + " exited " + std::to_string(code));
  }
  auto read = [&](const char* name) { return testing::read_file((dir / name).string()); };
  c.require(read("a.bamwb") == read("b.bamwb"), "portable outputs differ");
  c.require(normalize_zip_times(read("a.xlsx")) == normalize_zip_times(read("b.xlsx")), "xlsx outputs differ");
  bool raw_identical = read("a.xlsx") == read("b.xlsx");
  fs::remove_all(dir);
  return c.done(std::string("portable byte-identical; xlsx identical after timestamp normalization") +
                (raw_identical ? " (and before)" : ""));
}

bool same_semantics(const SemanticModel& a, const SemanticModel& b) {
  if (!(a.document == b.document) || a.variables.size() != b.variables.size()) return false;
  for (std::size_t v = 0; v < a.variables.size(); ++v)
    if (a.variables[v].name != b.variables[v].name || a.variables[v].kind != b.variables[v].kind ||
        a.variables[v].dependencies != b.variables[v].dependencies || a.variables[v].reports != b.variables[v].reports)
      return false;
  return a.graph.order == b.graph.order && a.report_breakdowns == b.report_breakdowns;
}

Outcome round_trips() {
  Check c;
  auto check_one = [&](const std::string& text, const std::string& label) {
    auto doc = parse_model(text);
    auto printed = print_model(doc);
    c.require(parse_model(printed) == doc && print_model(parse_model(printed)) == printed, label + " print/parse");
    auto model = analyze(doc);
    c.require(same_semantics(analyze(parse_model(audit::export_docs(model))), model), label + " docs re-parse");
  };
  check_one(fixture("sample.bam"), "sample");
  for (int seed = 1; seed <= kFuzzModels; ++seed)
    check_one(testing::random_model(static_cast<std::uint64_t>(seed)), "seed " + std::to_string(seed));
  return c.done("print/parse fixpoint and docs re-parse, sample + " + std::to_string(kFuzzModels) + " fuzzed models");
}

Outcome suite_runtime(const std::vector<std::string>& binaries, Clock::time_point started) {
  Check c;
  c.require(!binaries.empty(), "no unit-test binaries given");
  auto t0 = Clock::now();
  for (const auto& b : binaries) {
    auto cmd = "\"" + b + "\" --gtest_brief=1 > /dev/null 2>&1";
    c.require(std::system(cmd.c_str()) == 0, std::filesystem::path(b).filename().string() + " failed");
  }
  double units = seconds_since(t0);
  double total = seconds_since(started);
  c.require(total < kSuiteBudgetSeconds, "took " + std::to_string(total) + " s");
  std::ostringstream s;
  s.precision(3);
  s << binaries.size() << " unit binaries in " << units << " s; with acceptance " << total << " s (budget "
    << kSuiteBudgetSeconds << " s)";
  return c.done(s.str());
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = Clock::now();
  std::vector<std::string> binaries(argv + 1, argv + argc);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden parse", golden_parse},
      {"classification", classification},
      {"numeric reproduction 2005", reproduce_2005},
      {"numeric reproduction 2006-2007", reproduce_2006_2007},
      {"roll-up modes", rollup_modes},
      {"no A1 references", no_a1},
      {"backend agreement", backend_agreement},
      {"defined-name count", name_count},
      {"sensitivity", sensitivity},
      {"determinism", determinism},
      {"round-trips", round_trips},
      {"suite runtime", [&] { return suite_runtime(binaries, started); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << ". " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria met"
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
