#include "cli.hpp"

#include "bam/audit.hpp"
#include "bam/cube.hpp"
#include "bam/error.hpp"
#include "bam/eval.hpp"
#include "bam/model.hpp"
#include "bam/parser.hpp"
#include "bam/style.hpp"
#include "bam/text.hpp"
#include "bam/verify.hpp"
#include "bam/workbook.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace bam::cli {

namespace {

enum class Backend { Xlsx, Portable, CsvValues };

struct RunConfig {
  std::string model_path;
  std::string data_path;
  std::string style_path;
  std::string output_path;
  std::string observed_path;
  std::string backend;
  std::string rollup = "recompute";
  std::string format = "csv";
  bool strict = false;
  double tolerance = 0;
  std::string variable;
  std::string target;
  std::string period;
  std::string category;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

void require_readable(const std::string& path) {
  if (path.empty()) return;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw Error(ErrorKind::Io, "no such file '" + path + "'");
}

RollupMode rollup_mode(const std::string& s) {
  return s == "sum" ? RollupMode::Sum : RollupMode::Recompute;
}

std::optional<Backend> pick_backend(const RunConfig& cfg) {
  if (cfg.backend == "xlsx") return Backend::Xlsx;
  if (cfg.backend == "portable") return Backend::Portable;
  if (cfg.backend == "csv-values") return Backend::CsvValues;
  auto ext = std::filesystem::path(cfg.output_path).extension().string();
  if (text::iequals(ext, ".bamwb")) return Backend::Portable;
  if (text::iequals(ext, ".csv")) return Backend::CsvValues;
  if (text::iequals(ext, ".xlsx")) return Backend::Xlsx;
  return std::nullopt;
}

struct Pipeline {
  SemanticModel model;
  InstanceGrid grid;
};

Pipeline load_model(const std::string& path) {
  auto source = read_file(path);
  Pipeline p;
  p.model = analyze(parse_model(source));
  p.grid = expand(p.model);
  return p;
}

ValueCube load_data(const Pipeline& p, const std::string& path) {
  if (path.empty()) return ValueCube(p.grid);
  return load_inputs(read_file(path), p.model, p.grid);
}

void warn_defaults(const Pipeline& p, const std::vector<Instance>& defaulted, std::ostream& err) {
  if (defaulted.empty()) return;
  err << "warning: " << defaulted.size() << " input values missing, taken as 0:\n";
  for (const auto& at : defaulted) err << "  " << describe(p.model, p.grid, at) << "\n";
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  auto inputs = p.model.variables.inputs().size();
  out << p.model.document.hierarchies.size() << " hierarchies, " << p.model.document.reports.size() << " reports, "
      << inputs << " inputs, " << p.model.variables.size() - inputs << " calculated\n";
  return kSuccess;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string style_path = cfg.style_path;
  if (style_path.empty())
    if (const char* env = std::getenv("BAM_STYLE")) style_path = env;
  require_readable(style_path);

  auto p = load_model(cfg.model_path);
  auto style = style_path.empty() ? StyleConfig{} : parse_style(read_file(style_path));
  auto data = load_data(p, cfg.data_path);
  auto backend = *pick_backend(cfg);

  if (backend == Backend::CsvValues) {
    auto result = evaluate(p.model, p.grid, data, {rollup_mode(cfg.rollup), cfg.strict});
    warn_defaults(p, result.defaulted, err);
    write_file(cfg.output_path, write_cube_csv(p.model, p.grid, result.values));
  } else {
    WorkbookOptions options{rollup_mode(cfg.rollup), cfg.data_path.empty() ? nullptr : &data};
    auto wb = build_workbook(p.grid, p.model, style, options);
    if (backend == Backend::Portable)
      write_file(cfg.output_path, render_portable(wb));
    else
      render_xlsx(wb, cfg.output_path);
  }
  out << "wrote " << cfg.output_path << "\n";
  return kSuccess;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto p = load_model(cfg.model_path);
  auto data = load_data(p, cfg.data_path);
  auto result = evaluate(p.model, p.grid, data, {rollup_mode(cfg.rollup), cfg.strict});
  warn_defaults(p, result.defaulted, err);
  auto csv = write_cube_csv(p.model, p.grid, result.values);
  if (cfg.output_path.empty())
    out << csv;
  else
    write_file(cfg.output_path, csv);
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  auto data = load_data(p, cfg.data_path);
  auto report = verify_against(p.model, p.grid, data, read_file(cfg.observed_path), cfg.tolerance,
                               {rollup_mode(cfg.rollup), false});
  for (const auto& m : report.mismatches) {
    auto show = [](const std::optional<double>& v) { return v ? text::format_number(*v) : std::string("UNDEFINED"); };
    out << describe(p.model, p.grid, m.at) << ": expected " << show(m.expected) << ", observed " << show(m.observed)
        << ", difference " << (std::isinf(m.difference) ? std::string("n/a") : text::format_number(m.difference))
        << "\n";
  }
  out << report.mismatches.size() << " mismatches (" << report.compared << " compared, " << report.missing
      << " not observed)\n";
  return report.passed() ? kSuccess : kMismatch;
}

int cmd_deps(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  out << audit::render_tree(p.model, audit::dependency_tree(p.model, cfg.variable));
  return kSuccess;
}

int cmd_census(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  out << audit::render_census(audit::formula_census(p.model));
  return kSuccess;
}

int cmd_sensitivity(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  auto data = load_data(p, cfg.data_path);
  auto period = resolve_period(p.model.document.time_frame, cfg.period);
  auto entries = audit::sensitivity_rank(p.model, p.grid, data, cfg.target, period, split_path(cfg.category),
                                         {rollup_mode(cfg.rollup), false});
  out << audit::render_sensitivity(entries);
  return kSuccess;
}

int cmd_docs(const RunConfig& cfg, std::ostream& out) {
  auto p = load_model(cfg.model_path);
  auto docs = audit::export_docs(p.model);
  if (cfg.output_path.empty())
    out << docs;
  else
    write_file(cfg.output_path, docs);
  return kSuccess;
}

int exit_code_for(ErrorKind kind) {
  switch (classify(kind)) {
    case ErrorClass::Model: return kModelError;
    case ErrorClass::Data: return kDataError;
    case ErrorClass::Io: return kIoError;
  }
  return kModelError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile, evaluate and audit Business Algebra models", "bam"};
  app.require_subcommand(1);
  RunConfig cfg;
  const std::vector<std::string> rollups{"sum", "recompute"};

  auto* check = app.add_subcommand("check", "Parse and analyze a model, print a summary");
  check->add_option("model", cfg.model_path, "Model text file")->required();

  auto* generate = app.add_subcommand("generate", "Generate a spreadsheet from a model");
  generate->add_option("model", cfg.model_path, "Model text file")->required();
  generate->add_option("-o,--output", cfg.output_path, "Output file")->required();
  generate->add_option("--style", cfg.style_path, "Style configuration (default: $BAM_STYLE)");
  generate->add_option("--data", cfg.data_path, "Input data CSV to seed into input cells");
  generate->add_option("--backend", cfg.backend, "xlsx, portable or csv-values (default: from extension)")
      ->check(CLI::IsMember({"xlsx", "portable", "csv-values"}));
  generate->add_option("--rollup", cfg.rollup, "Roll-up mode for calculated variables")->check(CLI::IsMember(rollups));
  generate->add_flag("--strict", cfg.strict, "Fail on UNDEFINED values (csv-values)");

  auto* eval = app.add_subcommand("eval", "Evaluate the model over input data, print all values as CSV");
  eval->add_option("model", cfg.model_path, "Model text file")->required();
  eval->add_option("--data", cfg.data_path, "Input data CSV")->required();
  eval->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv"}));
  eval->add_option("-o,--output", cfg.output_path, "Write to a file instead of standard output");
  eval->add_option("--rollup", cfg.rollup, "Roll-up mode for calculated variables")->check(CLI::IsMember(rollups));
  eval->add_flag("--strict", cfg.strict, "Fail on UNDEFINED values");

  auto* verify = app.add_subcommand("verify", "Compare observed results with the model's own evaluation");
  verify->add_option("model", cfg.model_path, "Model text file")->required();
  verify->add_option("--data", cfg.data_path, "Input data CSV")->required();
  verify->add_option("--observed", cfg.observed_path, "Observed results CSV")->required();
  verify->add_option("--tolerance", cfg.tolerance, "Absolute tolerance")->check(CLI::NonNegativeNumber);
  verify->add_option("--rollup", cfg.rollup, "Roll-up mode for calculated variables")->check(CLI::IsMember(rollups));

  auto* audit_cmd = app.add_subcommand("audit", "Auditing aids");
  audit_cmd->require_subcommand(1);
  auto* deps = audit_cmd->add_subcommand("deps", "Dependency tree of a variable");
  deps->add_option("model", cfg.model_path, "Model text file")->required();
  deps->add_option("variable", cfg.variable, "Variable name")->required();
  auto* census = audit_cmd->add_subcommand("census", "Distinct formulas");
  census->add_option("model", cfg.model_path, "Model text file")->required();
  auto* sensitivity = audit_cmd->add_subcommand("sensitivity", "Rank inputs by their effect on a target");
  sensitivity->add_option("model", cfg.model_path, "Model text file")->required();
  sensitivity->add_option("--data", cfg.data_path, "Input data CSV")->required();
  sensitivity->add_option("--target", cfg.target, "Calculated target variable")->required();
  sensitivity->add_option("--period", cfg.period, "Period label or 0-based index")->required();
  sensitivity->add_option("--category", cfg.category, "Category path, ';'-separated");
  sensitivity->add_option("--rollup", cfg.rollup, "Roll-up mode")->check(CLI::IsMember(rollups));
  auto* docs = audit_cmd->add_subcommand("docs", "Model documentation");
  docs->add_option("model", cfg.model_path, "Model text file")->required();
  docs->add_option("-o,--output", cfg.output_path, "Write to a file instead of standard output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (generate->parsed() && !pick_backend(cfg))
      throw CLI::ValidationError("--backend", "cannot infer the format of '" + cfg.output_path + "'");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    require_readable(cfg.model_path);
    require_readable(cfg.data_path);
    require_readable(cfg.observed_path);

    if (check->parsed()) return cmd_check(cfg, out);
    if (generate->parsed()) return cmd_generate(cfg, out, err);
    if (eval->parsed()) return cmd_eval(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (deps->parsed()) return cmd_deps(cfg, out);
    if (census->parsed()) return cmd_census(cfg, out);
    if (sensitivity->parsed()) return cmd_sensitivity(cfg, out);
    if (docs->parsed()) return cmd_docs(cfg, out);
    err << app.help();
    return kUsageError;
  } catch (const Error& e) {
    const auto& path = (classify(e.kind()) == ErrorClass::Model) ? cfg.model_path : std::string();
    err << (path.empty() ? "" : path + ":") << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace bam::cli
