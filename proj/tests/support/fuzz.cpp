#include "support.hpp"

#include "bam/csv.hpp"
#include "bam/parser.hpp"
#include "bam/text.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bam {
void PrintTo(const ModelDocument& doc, std::ostream* os) { *os << "\n" << print_model(doc); }
void PrintTo(const Expr& expr, std::ostream* os) { *os << to_string(expr); }
}  // namespace bam

namespace bam::testing {

std::string data_path(std::string_view name) { return std::string(BAM_TEST_DATA_DIR) + "/" + std::string(name); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(std::string_view name) { return read_file(data_path(name)); }

Pipeline load(std::string_view model_text) {
  Pipeline p{analyze(parse_model(model_text)), {}};
  p.grid = expand(p.model);
  return p;
}

namespace {

constexpr const char* kWords[] = {"alpha", "bravo", "charlie", "delta",  "echo",   "foxtrot", "golf",
                                  "hotel", "india", "juliet",  "kilo",   "lima",   "mike",    "november",
                                  "oscar", "papa",  "quebec",  "romeo",  "sierra", "tango"};
constexpr int kWordCount = 20;

// Number-free spelling of n, since digits would split an identifier.
std::string word_code(int n) {
  std::string out = kWords[n % kWordCount];
  for (n /= kWordCount; n > 0; n /= kWordCount) out = std::string(kWords[n % kWordCount]) + " " + out;
  return out;
}

constexpr const char* kTitles[] = {"Markets", "Products", "Channels"};
constexpr const char* kUnits[] = {"year", "quarter", "month"};

struct Group {
  std::vector<std::string> inputs;
  std::vector<std::pair<std::string, std::string>> formulas;  // target, body
};

class Generator {
 public:
  Generator(std::uint64_t seed, const FuzzOptions& options) : rng_(seed), options_(options) {}

  std::string run() {
    int unit = pick(0, 2);
    out_ << "Each period is one " << kUnits[unit] << ".\n";
    out_ << "The number of periods is " << pick(1, unit == 2 ? 6 : 4) << ".\n";
    out_ << "The first period starts in " << pick(1990, 2030) << ".\n\n";

    int hierarchies = pick(0, options_.max_hierarchies);
    if (hierarchies > 0) out_ << "Categories:\n\n";
    for (int h = 0; h < hierarchies; ++h) hierarchy(h);

    int reports = pick(1, options_.max_reports);
    for (int r = 0; r < reports; ++r) report(r, hierarchies);
    return out_.str();
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  void hierarchy(int h) {
    out_ << kTitles[h] << " =\n\n";
    int counter = 0;
    auto node = [&](const std::string& number, int depth) {
      out_ << std::string(static_cast<std::size_t>(depth - 1), ' ') << "- " << number << " " << kTitles[h] << " "
           << ++counter << "\n";
    };
    int roots = pick(1, 3);
    for (int a = 1; a <= roots; ++a) {
      node(std::to_string(a), 1);
      int kids = chance(0.5) ? pick(1, 3) : 0;
      for (int b = 1; b <= kids; ++b) {
        node(std::to_string(a) + "." + std::to_string(b), 2);
        int grand = chance(0.25) ? pick(1, 2) : 0;
        for (int c = 1; c <= grand; ++c) node(std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c), 3);
      }
    }
    out_ << "\n";
  }

  void report(int r, int hierarchies) {
    std::vector<int> dims;
    for (int h = 0; h < hierarchies; ++h)
      if (chance(0.6)) dims.push_back(h);
    std::shuffle(dims.begin(), dims.end(), rng_);

    std::string key;
    for (int d : dims) key += std::to_string(d);
    auto [it, fresh] = groups_.try_emplace(key);
    if (fresh) group_ids_[key] = static_cast<int>(group_ids_.size());
    auto& group = it->second;
    const int gid = group_ids_[key];

    out_ << "Report: Report " << word_code(r) << "\n\n";
    if (!dims.empty()) {
      out_ << "Breakdown by ";
      for (std::size_t i = 0; i < dims.size(); ++i) out_ << (i ? ", " : "") << kTitles[dims[i]];
      out_ << "\n\n";
    }

    std::vector<std::string> here;
    int count = pick(1, options_.max_formulas);
    for (int f = 0; f < count; ++f) {
      if (!group.formulas.empty() && chance(0.15)) {
        const auto& again = group.formulas[static_cast<std::size_t>(pick(0, static_cast<int>(group.formulas.size()) - 1))];
        if (std::find(here.begin(), here.end(), again.first) == here.end()) {
          out_ << again.first << " = " << again.second << "\n";
          here.push_back(again.first);
          continue;
        }
      }
      std::string target = "Result " + word_code(gid) + " " + word_code(static_cast<int>(group.formulas.size()));
      std::string body = expression(group, gid, 3);
      out_ << target << " = " << body << "\n";
      group.formulas.emplace_back(target, body);
      here.push_back(target);
    }
    out_ << "\n";
  }

  std::string operand(Group& group, int gid) {
    if (!options_.additive_only && chance(0.12)) {
      if (chance(0.5)) return std::to_string(pick(0, 20));
      return std::to_string(pick(0, 40)) + "." + std::to_string(pick(0, 9));
    }
    std::string name;
    if (!group.formulas.empty() && chance(0.35)) {
      name = group.formulas[static_cast<std::size_t>(pick(0, static_cast<int>(group.formulas.size()) - 1))].first;
    } else if (group.inputs.empty() || chance(0.3)) {
      name = "Input " + word_code(gid) + " " + word_code(static_cast<int>(group.inputs.size()));
      group.inputs.push_back(name);
    } else {
      name = group.inputs[static_cast<std::size_t>(pick(0, static_cast<int>(group.inputs.size()) - 1))];
    }
    return chance(0.15) ? text::to_lower(name) : name;
  }

  std::string expression(Group& group, int gid, int depth) {
    if (depth == 0 || chance(0.3)) return operand(group, gid);
    static constexpr const char* kOps[] = {" + ", " - ", " * ", " / "};
    const char* op = kOps[pick(0, options_.additive_only ? 1 : 3)];
    std::string lhs = expression(group, gid, depth - 1);
    std::string rhs = expression(group, gid, depth - 1);
    if (chance(0.3)) rhs = "(" + rhs + ")";
    return lhs + op + rhs;
  }

  std::mt19937_64 rng_;
  FuzzOptions options_;
  std::ostringstream out_;
  std::map<std::string, Group> groups_;
  std::map<std::string, int> group_ids_;
};

}  // namespace

std::string random_model(std::uint64_t seed, const FuzzOptions& options) { return Generator(seed, options).run(); }

std::string random_inputs(const SemanticModel& model, const InstanceGrid& grid, std::uint64_t seed,
                          double omit_probability) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution omit(omit_probability);
  std::uniform_int_distribution<int> value(-500, 500);
  std::string out = "variable,category,period,value\n";
  const auto& tf = model.document.time_frame;
  for (auto v : model.variables.inputs()) {
    const auto& layout = grid.layout_of(v);
    for (const auto& row : layout.rows) {
      if (row.kind != RowKind::Leaf) continue;
      for (int p = 0; p < tf.period_count; ++p) {
        if (omit(rng)) continue;
        out += csv::join({model.variables[v].name, join_path(row.path), tf.period_label(p), std::to_string(value(rng))});
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace bam::testing
