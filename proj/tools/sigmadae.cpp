// Command-line front end: structural analysis reports and Taylor-series solves.

#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "sigmadae/analysis.hpp"
#include "sigmadae/executor.hpp"
#include "sigmadae/initfile.hpp"
#include "sigmadae/parser.hpp"
#include "sigmadae/report.hpp"

namespace {

using namespace sigmadae;

enum Exit { Ok = 0, Usage = 1, BadInput = 2, IllPosed = 3, ExecutorFailed = 4, MissingInit = 5 };

struct Options {
  std::string model_path;
  std::string format = "text";
  std::string scheme = "block";
  std::string stages;
  int order = 0;
  std::string init_path;
  double tol = SolverOptions{}.tol;
};

SchemeMode scheme_of(const std::string& s) {
  return s == "basic" ? SchemeMode::Basic : SchemeMode::Block;
}

std::string model_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// "a..b" with optional signs on either end.
std::optional<std::pair<int, int>> parse_range(const std::string& s) {
  static const std::regex re(R"(\s*([+-]?\d+)\s*\.\.\s*([+-]?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  const int a = std::stoi(m[1]), b = std::stoi(m[2]);
  if (a > b) return std::nullopt;
  return std::pair{a, b};
}

// Runs `body`, mapping library exceptions to exit codes and stderr messages.
template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return BadInput;
  } catch (const InitFileError& e) {
    std::cerr << "error: init file " << e.what() << "\n";
    return BadInput;
  } catch (const StructurallyIllPosed& e) {
    std::cerr << "error: structurally ill-posed: " << e.what() << "\n";
    return IllPosed;
  } catch (const UniformityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return IllPosed;
  } catch (const ExecutorError& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return ExecutorFailed;
  }
}

int cmd_analyze(const Options& o) {
  return guarded([&] {
    const Analysis a = analyze(parse_model_file(o.model_path));
    int k_min = a.first_stage(), k_max = 0;
    if (!o.stages.empty()) {
      const auto range = parse_range(o.stages);
      if (!range) {
        std::cerr << "error: --stages expects a..b with a <= b, got '" << o.stages << "'\n";
        return static_cast<int>(Usage);
      }
      std::tie(k_min, k_max) = *range;
    }
    const AnalysisReport r = make_report(a, model_name(o.model_path), scheme_of(o.scheme), k_min, k_max);
    if (o.format == "json")
      std::cout << to_json(r).dump(2) << "\n";
    else
      std::cout << render_text(r);
    return static_cast<int>(Ok);
  });
}

int cmd_solve(const Options& o) {
  return guarded([&] {
    const Analysis a = analyze(parse_model_file(o.model_path));
    const InitData init = parse_init_file(o.init_path, a.model);
    const SchemeMode mode = scheme_of(o.scheme);
    const PairSet missing = missing_initialization(a.schedule(mode, o.order), init);
    if (!missing.empty()) {
      std::cerr << "error: initialization is missing " << missing.size() << " entries:";
      for (const DerivPair& p : missing)
        std::cerr << " (" << a.model.variable_names[p.index] << "," << p.order << ")";
      std::cerr << "\n";
      return static_cast<int>(MissingInit);
    }
    SolverOptions opts;
    opts.tol = o.tol;
    const SolveResult res = solve_to_order(a, mode, init, o.order, opts);
    const std::string name = model_name(o.model_path);
    if (o.format == "json")
      std::cout << solve_to_json(a, name, mode, res).dump(2) << "\n";
    else
      std::cout << render_solve_text(a, name, mode, res);
    return static_cast<int>(Ok);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural analysis and Taylor-series solution of DAEs"};
  app.require_subcommand(1);
  Options o;

  auto* analyze_cmd = app.add_subcommand("analyze", "Structural analysis report");
  analyze_cmd->add_option("model", o.model_path, "Model file")->required();
  analyze_cmd->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_option("--scheme", o.scheme)->check(CLI::IsMember({"basic", "block"}));
  analyze_cmd->add_option("--stages", o.stages, "Stage range a..b (default: first stage..0)")
      ->allow_extra_args(false);

  auto* solve_cmd = app.add_subcommand("solve", "Taylor coefficients through stage K");
  solve_cmd->add_option("model", o.model_path, "Model file")->required();
  solve_cmd->add_option("--order", o.order, "Last stage K")->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--init", o.init_path, "Init file")->required();
  solve_cmd->add_option("--scheme", o.scheme)->check(CLI::IsMember({"basic", "block"}));
  solve_cmd->add_option("--tol", o.tol, "Newton tolerance on the scaled residual")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(Usage);
  }
  if (analyze_cmd->parsed()) return cmd_analyze(o);
  return cmd_solve(o);
}
