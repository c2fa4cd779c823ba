#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gammalab/structure_file.hpp"
#include "json.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string basename_of(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("GAMMALAB_MAX_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

nlohmann::json report_header(const std::string& display) {
  nlohmann::json doc;
  doc["schema"] = "gammalab-report/1";
  doc["engine"] = std::string("gammalab ") + kVersion;
  doc["file"] = display;
  return doc;
}

// The structured report deliberately carries no timing fields so that
// identical inputs produce byte-identical files.
nlohmann::json render_report(const std::string& display, const gammalab::RunResult& run) {
  nlohmann::json doc = report_header(display);
  nlohmann::json list = nlohmann::json::array();
  for (const gammalab::DirectiveResult& R : run.directives) {
    nlohmann::json e;
    e["line"] = R.line;
    e["verb"] = R.verb;
    e["args"] = R.args;
    e["verdict"] = to_string(R.verdict);
    if (!R.reason.empty()) e["reason"] = R.reason;
    e["instances"] = R.report.instances;
    nlohmann::json witnesses = nlohmann::json::array();
    for (const gammalab::Witness& w : R.report.failures) {
      witnesses.push_back({{"law", w.law}, {"at", w.at}, {"detail", w.detail}});
    }
    e["witnesses"] = std::move(witnesses);
    e["notes"] = R.report.notes;
    nlohmann::json details = nlohmann::json::object();
    for (const auto& [key, value] : R.details) details[key] = value;
    e["details"] = std::move(details);
    list.push_back(std::move(e));
  }
  doc["directives"] = std::move(list);
  doc["summary"] = {{"pass", run.pass},
                    {"fail", run.fail},
                    {"unavailable", run.unavailable},
                    {"error", run.error}};
  doc["exit"] = run.exit_code();
  return doc;
}

bool write_report(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write report to '" << path << "'\n";
    return false;
  }
  out << doc.dump(2) << "\n";
  return true;
}

int run_check(const std::string& path, const std::string& report_path, bool fail_fast,
              int threads, const gammalab::RunLimits& limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read '" << path << "'\n";
    return 3;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string display = basename_of(path);

  gammalab::StructureFile parsed;
  try {
    parsed = gammalab::parse_structure_file(buf.str(), display, limits);
  } catch (const gammalab::StructureError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << to_string(e.kind())
              << ": " << e.message() << "\n";
    const int code = e.kind() == gammalab::DiagnosticKind::Limit ? 2 : 3;
    if (!report_path.empty()) {
      nlohmann::json doc = report_header(display);
      doc["error"] = {{"kind", to_string(e.kind())},
                      {"line", e.line()},
                      {"column", e.column()},
                      {"message", e.message()}};
      doc["exit"] = code;
      if (!write_report(report_path, doc)) return 3;
    }
    return code;
  }

  gammalab::RunOptions opts;
  opts.limits = limits;
  opts.threads = threads;
  opts.fail_fast = fail_fast;
  const gammalab::RunResult run = gammalab::run_checks(parsed, opts);

  std::cout << "gammalab " << kVersion << "\n";
  std::cout << "checking " << display << "\n";
  for (const gammalab::DirectiveResult& R : run.directives) {
    std::cout << "  " << R.line << ": " << R.verb;
    for (const std::string& a : R.args) std::cout << " " << a;
    std::cout << " -> " << to_string(R.verdict);
    if (R.verdict == gammalab::Verdict::Unavailable && !R.reason.empty()) {
      std::cout << " (" << R.reason << ")";
    }
    std::cout << "\n";
    if (R.verdict == gammalab::Verdict::Error) {
      std::cout << "      ! " << R.reason << "\n";
    }
    for (const gammalab::Witness& w : R.report.failures) {
      std::cout << "      law " << w.law << " at " << gammalab::render_word(w.at) << ": "
                << w.detail << "\n";
    }
  }
  std::cout << "summary: " << run.pass << " pass, " << run.fail << " fail, " << run.unavailable
            << " unavailable, " << run.error << " error\n";
  std::cout << "exit " << run.exit_code() << "\n";

  if (!report_path.empty() && !write_report(report_path, render_report(display, run))) {
    return 3;
  }
  return run.exit_code();
}

int run_explain(const std::string& name) {
  for (const auto& [verb, text] : gammalab::directive_help()) {
    if (verb == name) {
      std::cout << text << "\n";
      return 0;
    }
  }
  std::cerr << "no directive named '" << name << "'; known directives:\n";
  for (const auto& [verb, text] : gammalab::directive_help()) std::cerr << "  " << verb << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite n-ary Gamma-semiring and positional-module checker"};
  app.set_version_flag("--version", std::string("gammalab ") + kVersion);
  app.require_subcommand(1);

  std::string file;
  std::string report_path;
  bool fail_fast = false;
  int threads = 0;
  gammalab::RunLimits limits;

  CLI::App* check = app.add_subcommand("check", "run the directives in a structure file");
  check->add_option("file", file, "structure file to check")->required();
  check->add_option("--emit-report", report_path, "write a structured report to this path");
  check->add_flag("--fail-fast", fail_fast, "stop after the first directive that does not pass");
  check->add_option("--threads", threads,
                    "scan worker threads (default: GAMMALAB_MAX_THREADS, else 1)");
  check->add_option("--max-carrier", limits.max_carrier,
                    "largest carrier a realization recipe may build (default 16)");
  check->add_option("--max-tensor-classes", limits.max_tensor_classes,
                    "largest tensor quotient to compute (default 4096)");
  check->add_option("--max-hom-enumeration", limits.max_hom_enumeration,
                    "largest hom-set enumeration (default 2^20)");

  std::string directive;
  CLI::App* explain = app.add_subcommand("explain", "describe what a directive certifies");
  explain->add_option("directive", directive, "directive name")->required();

  CLI::App* formats = app.add_subcommand("formats", "print the structure-file reference");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    return run_check(file, report_path, fail_fast, resolve_threads(threads), limits);
  }
  if (explain->parsed()) {
    return run_explain(directive);
  }
  if (formats->parsed()) {
    std::cout << gammalab::format_reference();
    return 0;
  }
  return 0;
}
