#include "bam/parser.hpp"

#include "bam/error.hpp"
#include "bam/text.hpp"

#include <optional>
#include <regex>
#include <unordered_set>

namespace bam {

namespace {

// ---------------------------------------------------------------------------
// Expressions

enum class Tok { Plus, Minus, Star, Slash, LParen, RParen, Number, Identifier, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0;
};

bool is_operator_char(char c) noexcept {
  return c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')' || c == '=';
}

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<Token> tokenize(std::string_view s, int line) {
  std::vector<Token> out;
  std::string pending_ident;
  auto flush_ident = [&] {
    if (!pending_ident.empty()) out.push_back({Tok::Identifier, std::exchange(pending_ident, {})});
  };

  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_operator_char(c)) {
      flush_ident();
      switch (c) {
        case '+': out.push_back({Tok::Plus, "+"}); break;
        case '-': out.push_back({Tok::Minus, "-"}); break;
        case '*': out.push_back({Tok::Star, "*"}); break;
        case '/': out.push_back({Tok::Slash, "/"}); break;
        case '(': out.push_back({Tok::LParen, "("}); break;
        case ')': out.push_back({Tok::RParen, ")"}); break;
        default: throw Error(ErrorKind::MalformedFormula, "unexpected '=' in expression", line);
      }
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i]) && !is_operator_char(s[i])) ++i;
    auto word = s.substr(start, i - start);
    if (auto number = text::parse_decimal(word)) {
      flush_ident();
      out.push_back({Tok::Number, std::string(word), *number});
    } else {
      if (!pending_ident.empty()) pending_ident += ' ';
      pending_ident += word;
    }
  }
  flush_ident();
  out.push_back({Tok::End, ""});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

  Expr parse() {
    if (peek().kind == Tok::End) fail("empty expression");
    Expr e = parse_sum();
    if (peek().kind == Tok::RParen) fail("unbalanced parentheses");
    if (peek().kind != Tok::End) fail("expected an operator before '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::MalformedFormula, msg, line_); }

  Expr parse_sum() {
    Expr lhs = parse_product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      auto op = take().kind == Tok::Plus ? BinaryOperator::Add : BinaryOperator::Subtract;
      lhs = Expr::binary(op, std::move(lhs), parse_product());
    }
    return lhs;
  }

  Expr parse_product() {
    Expr lhs = parse_factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      auto op = take().kind == Tok::Star ? BinaryOperator::Multiply : BinaryOperator::Divide;
      lhs = Expr::binary(op, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        return Expr::number(take().value);
      case Tok::Identifier:
        return Expr::variable(take().text);
      case Tok::LParen: {
        take();
        if (peek().kind == Tok::RParen) fail("empty parentheses");
        Expr inner = parse_sum();
        if (peek().kind != Tok::RParen) fail("unbalanced parentheses");
        take();
        return Expr::paren(std::move(inner));
      }
      case Tok::Plus:
      case Tok::Minus:
        // A sign is only accepted directly in front of a number literal.
        if (peek(1).kind == Tok::Number) {
          bool negative = take().kind == Tok::Minus;
          double v = take().value;
          return Expr::number(negative && v != 0.0 ? -v : v);
        }
        if (peek(1).kind == Tok::End) fail("dangling operator '" + t.text + "'");
        fail("unexpected operator '" + t.text + "'");
      case Tok::RParen:
        fail("unbalanced parentheses");
      case Tok::End:
        fail("dangling operator at end of formula");
      default:
        fail("unexpected operator '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_;
};

// ---------------------------------------------------------------------------
// Documents

struct Line {
  int number;
  std::string text;  // operators normalized, blanks collapsed
};

std::string strip_trailing_period(std::string s) {
  if (!s.empty() && s.back() == '.') s.pop_back();
  return text::collapse_spaces(s);
}

std::string strip_bom(std::string_view s) {
  if (s.starts_with("\xEF\xBB\xBF")) s.remove_prefix(3);
  return std::string(s);
}

const std::regex& period_length_re() {
  static const std::regex re(R"(^(?:the )?(?:length of )?each period is (\S+) (\S+)$)", std::regex::icase);
  return re;
}
const std::regex& period_count_re() {
  static const std::regex re(R"(^(?:the )?number of periods is (\S+)$)", std::regex::icase);
  return re;
}
const std::regex& period_start_re() {
  static const std::regex re(R"(^(?:the )?first period (?:starts|begins) (?:in|on) (\S+)$)", std::regex::icase);
  return re;
}
const std::regex& outline_re() {
  static const std::regex re(R"(^(?:(?:-|\*|\xE2\x80\xA2) ?)?(\d+(?:\.\d+)*)\.? (.+)$)");
  return re;
}
const std::regex& categories_re() {
  static const std::regex re(R"(^categories ?:?$)", std::regex::icase);
  return re;
}
const std::regex& report_re() {
  static const std::regex re(R"(^report ?: ?(.*)$)", std::regex::icase);
  return re;
}
const std::regex& breakdown_re() {
  static const std::regex re(R"(^breakdown by\b ?(.*)$)", std::regex::icase);
  return re;
}

bool looks_like_time_frame(std::string_view s) {
  for (auto prefix : {"each period", "the each period", "length of each period", "the length of each period",
                      "the number of periods", "number of periods", "the first period", "first period"})
    if (text::istarts_with(s, prefix)) return true;
  return false;
}

class ModelParser {
 public:
  explicit ModelParser(std::string_view input) {
    auto source = strip_bom(input);
    int number = 0;
    for (auto raw : text::split_lines(source)) {
      ++number;
      auto trimmed = text::trim(raw);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      lines_.push_back({number, text::collapse_spaces(text::normalize_operators(trimmed))});
    }
    last_line_ = std::max(number, 1);
  }

  ModelDocument run() {
    for (const auto& line : lines_) handle(line);
    finish_hierarchy();
    if (!unit_ || !count_ || !start_) {
      std::string missing;
      if (!unit_) missing += " period length;";
      if (!count_) missing += " number of periods;";
      if (!start_) missing += " first period;";
      missing.pop_back();
      throw Error(ErrorKind::MissingTimeFrame, "time frame incomplete, missing:" + missing,
                  first_report_line_ ? first_report_line_ : last_line_);
    }
    doc_.time_frame = TimeFrame{*unit_, *count_, *start_};
    return std::move(doc_);
  }

 private:
  enum class Section { Preamble, Categories, Report };

  void handle(const Line& line) {
    const std::string sentence = strip_trailing_period(line.text);
    std::smatch m;

    if (section_ != Section::Report && looks_like_time_frame(sentence)) {
      time_frame_sentence(sentence, line.number);
      return;
    }
    if (std::regex_match(sentence, m, report_re())) {
      start_report(m[1].str(), line.number);
      return;
    }
    if (std::regex_match(sentence, categories_re())) {
      if (section_ == Section::Report)
        throw Error(ErrorKind::UnexpectedLine, "categories must be declared before the first report", line.number);
      section_ = Section::Categories;
      return;
    }

    switch (section_) {
      case Section::Preamble:
        throw Error(ErrorKind::UnexpectedLine, "unrecognized line '" + line.text + "'", line.number);
      case Section::Categories:
        category_line(sentence, line.number);
        return;
      case Section::Report:
        report_line(line.text, sentence, line.number);
        return;
    }
  }

  void time_frame_sentence(const std::string& s, int number) {
    std::smatch m;
    if (std::regex_match(s, m, period_length_re())) {
      auto qty = text::to_lower(m[1].str());
      if (qty != "one" && qty != "a" && qty != "1")
        throw Error(ErrorKind::MalformedTimeFrame, "period length must be one unit, got '" + m[1].str() + "'", number);
      auto word = text::to_lower(m[2].str());
      if (word.ends_with('s')) word.pop_back();
      PeriodUnit unit;
      if (word == "year") unit = PeriodUnit::Year;
      else if (word == "quarter") unit = PeriodUnit::Quarter;
      else if (word == "month") unit = PeriodUnit::Month;
      else throw Error(ErrorKind::MalformedTimeFrame, "unrecognized period unit '" + m[2].str() + "'", number);
      set_once(unit_, unit, "period length", number);
      return;
    }
    if (std::regex_match(s, m, period_count_re())) {
      auto n = text::parse_integer(m[1].str());
      if (!n || *n < 1 || *n > 100000)
        throw Error(ErrorKind::MalformedTimeFrame, "number of periods must be a positive integer, got '" + m[1].str() + "'", number);
      set_once(count_, static_cast<int>(*n), "number of periods", number);
      return;
    }
    if (std::regex_match(s, m, period_start_re())) {
      auto y = text::parse_integer(m[1].str());
      if (!y || *y < -100000 || *y > 100000)
        throw Error(ErrorKind::MalformedTimeFrame, "first period must be a year, got '" + m[1].str() + "'", number);
      set_once(start_, static_cast<int>(*y), "first period", number);
      return;
    }
    throw Error(ErrorKind::MalformedTimeFrame, "unrecognized time-frame sentence '" + s + "'", number);
  }

  template <class T>
  void set_once(std::optional<T>& slot, T value, const char* what, int number) {
    if (slot && *slot != value)
      throw Error(ErrorKind::MalformedTimeFrame, std::string("conflicting ") + what, number);
    slot = value;
  }

  void category_line(const std::string& s, int number) {
    if (!s.empty() && s.back() == '=') {
      auto title = text::collapse_spaces(std::string_view(s).substr(0, s.size() - 1));
      if (title.empty() || title.find('=') != std::string::npos)
        throw Error(ErrorKind::MalformedOutline, "malformed hierarchy title line", number);
      finish_hierarchy();
      auto key = text::name_key(title);
      for (const auto& h : doc_.hierarchies)
        if (text::name_key(h.title) == key)
          throw Error(ErrorKind::DuplicateHierarchyTitle, "hierarchy '" + title + "' declared twice", number);
      doc_.hierarchies.push_back({title, {}, number});
      open_hierarchy_ = true;
      stack_.clear();
      node_keys_.clear();
      return;
    }
    std::smatch m;
    if (!std::regex_match(s, m, outline_re()))
      throw Error(ErrorKind::MalformedOutline, "expected an outline entry such as '1.2 Name', got '" + s + "'", number);
    if (!open_hierarchy_)
      throw Error(ErrorKind::MalformedOutline, "outline entry before any hierarchy title", number);

    auto numbering = m[1].str();
    int depth = 1 + static_cast<int>(std::count(numbering.begin(), numbering.end(), '.'));
    auto name = text::collapse_spaces(m[2].str());
    if (name.find(';') != std::string::npos)
      throw Error(ErrorKind::MalformedOutline, "category names may not contain ';'", number);
    if (depth > static_cast<int>(stack_.size()) + 1)
      throw Error(ErrorKind::MalformedOutline,
                  "outline number " + numbering + " is nested deeper than its parent allows", number);
    if (!node_keys_.insert(text::name_key(name)).second)
      throw Error(ErrorKind::MalformedOutline, "category '" + name + "' appears twice in one hierarchy", number);

    stack_.resize(depth - 1);
    auto& siblings = stack_.empty() ? doc_.hierarchies.back().roots : stack_.back()->children;
    siblings.push_back({name, depth, {}});
    stack_.push_back(&siblings.back());
  }

  void finish_hierarchy() {
    if (open_hierarchy_ && doc_.hierarchies.back().roots.empty())
      throw Error(ErrorKind::MalformedOutline, "hierarchy '" + doc_.hierarchies.back().title + "' has no categories",
                  doc_.hierarchies.back().source_line);
    open_hierarchy_ = false;
    stack_.clear();
  }

  void start_report(const std::string& name, int number) {
    finish_hierarchy();
    auto cleaned = text::collapse_spaces(name);
    if (cleaned.empty()) throw Error(ErrorKind::UnexpectedLine, "report name missing", number);
    if (!first_report_line_) first_report_line_ = number;
    section_ = Section::Report;
    doc_.reports.push_back({cleaned, {}, {}, number});
    breakdown_allowed_ = true;
  }

  void report_line(const std::string& raw, const std::string& sentence, int number) {
    std::smatch m;
    auto& report = doc_.reports.back();
    if (std::regex_match(sentence, m, breakdown_re())) {
      if (!breakdown_allowed_)
        throw Error(ErrorKind::UnexpectedLine, "'Breakdown by' must precede the report's formulas", number);
      breakdown_allowed_ = false;
      const auto titles = m[1].str();
      for (auto part : text::split(titles, ',')) {
        auto title = text::collapse_spaces(part);
        if (title.empty()) throw Error(ErrorKind::UnexpectedLine, "empty hierarchy title in breakdown", number);
        report.breakdown.push_back(title);
      }
      return;
    }
    breakdown_allowed_ = false;
    report.formulas.push_back(parse_formula_line(raw, number));
  }

  static FormulaDef parse_formula_line(std::string line, int number) {
    if (!line.empty() && line.back() == '.') line.pop_back();
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::MalformedFormula, "formula has no '='", number);
    auto lhs = text::collapse_spaces(std::string_view(line).substr(0, eq));
    auto rhs = std::string_view(line).substr(eq + 1);
    if (lhs.empty()) throw Error(ErrorKind::MalformedFormula, "formula has no target variable", number);
    if (text::trim(rhs).empty()) throw Error(ErrorKind::MalformedFormula, "formula has an empty right-hand side", number);

    auto target = tokenize(lhs, number);
    if (target.size() != 2 || target[0].kind != Tok::Identifier)
      throw Error(ErrorKind::MalformedFormula, "target '" + lhs + "' must be a single variable name", number);
    return FormulaDef{target[0].text, parse_expression(rhs, number), number};
  }

  std::vector<Line> lines_;
  int last_line_ = 1;
  ModelDocument doc_;
  Section section_ = Section::Preamble;
  std::optional<PeriodUnit> unit_;
  std::optional<int> count_;
  std::optional<int> start_;
  int first_report_line_ = 0;
  bool open_hierarchy_ = false;
  std::vector<CategoryNode*> stack_;
  std::unordered_set<std::string> node_keys_;
  bool breakdown_allowed_ = false;
};

void print_nodes(const std::vector<CategoryNode>& nodes, const std::string& prefix, int depth, std::string& out) {
  int index = 0;
  for (const auto& node : nodes) {
    auto numbering = prefix.empty() ? std::to_string(++index) : prefix + "." + std::to_string(++index);
    out += std::string(2 * (depth - 1), ' ') + "- " + numbering + " " + node.name + "\n";
    print_nodes(node.children, numbering, depth + 1, out);
  }
}

}  // namespace

Expr parse_expression(std::string_view text, int line) {
  auto normalized = text::normalize_operators(text);
  return ExprParser(tokenize(normalized, line), line).parse();
}

ModelDocument parse_model(std::string_view text) { return ModelParser(text).run(); }

std::string print_time_frame(const TimeFrame& tf) {
  return "Each period is one " + unit_word(tf.unit) + ".\n" + "The number of periods is " +
         std::to_string(tf.period_count) + ".\n" + "The first period starts in " + std::to_string(tf.start_year) +
         ".\n";
}

std::string print_categories(const ModelDocument& doc) {
  if (doc.hierarchies.empty()) return {};
  std::string out = "Categories:\n";
  for (const auto& h : doc.hierarchies) {
    out += "\n" + h.title + " =\n";
    print_nodes(h.roots, "", 1, out);
  }
  return out;
}

std::string print_formula(const FormulaDef& f) { return f.target + " = " + to_string(f.body); }

std::string print_model(const ModelDocument& doc) {
  std::string out = print_time_frame(doc.time_frame);
  if (!doc.hierarchies.empty()) out += "\n" + print_categories(doc);
  for (const auto& r : doc.reports) {
    out += "\nReport: " + r.name + "\n";
    if (!r.breakdown.empty()) {
      out += "Breakdown by ";
      for (std::size_t i = 0; i < r.breakdown.size(); ++i) out += (i ? ", " : "") + r.breakdown[i];
      out += "\n";
    }
    for (const auto& f : r.formulas) out += print_formula(f) + "\n";
  }
  return out;
}

}  // namespace bam
