// Command-line driver: eval, corpus, explain.
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "confn/dsl/corpus.hpp"
#include "confn/dsl/eval.hpp"

namespace {

std::string utcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool readFile(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream s;
  s << in.rdbuf();
  out = s.str();
  return true;
}

void emit(confn::dsl::Report& r, const std::string& format, bool timestamps) {
  if (timestamps) r.generatedAt = utcNow();
  if (format == "json")
    std::cout << confn::dsl::toJson(r).dump(2) << "\n";
  else
    std::cout << confn::dsl::toMarkdown(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact convex Fujita number engine"};
  app.require_subcommand(1);

  std::string format = "markdown";
  int radius = confn::kDefaultSearchRadius;
  int maxM = 6;
  bool timestamps = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "markdown"}));
    sub->add_option("--radius", radius, "Cone search radius")->check(CLI::PositiveNumber);
    sub->add_option("--max-m", maxM, "Largest tuple size tried by the brute-force oracle")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--timestamps", timestamps, "Stamp the report with the current UTC time");
  };

  std::string file;
  auto* evalCmd = app.add_subcommand("eval", "Evaluate a descriptor program");
  evalCmd->add_option("file", file, "Program file (.fuj)")->required();
  common(evalCmd);

  auto* corpusCmd = app.add_subcommand("corpus", "Run the built-in example suite");
  common(corpusCmd);

  std::string variety;
  auto* explainCmd = app.add_subcommand("explain", "Print the certificate trace of one variety");
  explainCmd->add_option("file", file, "Program file (.fuj)")->required();
  explainCmd->add_option("--variety", variety, "Variety name")->required();
  common(explainCmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : confn::dsl::kExitUsage;
  }

  confn::dsl::EvalOptions opt;
  opt.searchRadius = radius;
  opt.maxM = maxM;

  if (*corpusCmd) {
    auto r = confn::dsl::corpus(opt);
    emit(r, format, timestamps);
    return confn::dsl::exitCode(r);
  }

  std::string text;
  if (!readFile(file, text)) {
    std::cerr << "cannot read '" << file << "'\n";
    return confn::dsl::kExitUsage;
  }
  if (*evalCmd) {
    auto r = confn::dsl::evaluateText(text, opt);
    for (const auto& e : r.errors) std::cerr << file << ":" << e.line << ":" << e.col << ": " << e.category
                                             << " error: " << e.message << (e.hint.empty() ? "" : " (hint: " + e.hint + ")")
                                             << "\n";
    emit(r, format, timestamps);
    return confn::dsl::exitCode(r);
  }

  // explain: compute the named variety only.
  auto r = confn::dsl::evaluateText(text + "\ncompute " + variety + "\n", opt);
  for (const auto& v : r.varieties)
    if (v.name == variety) {
      std::cout << confn::dsl::explain(v);
      return confn::dsl::exitCode(r);
    }
  for (const auto& e : r.errors)
    std::cerr << file << ":" << e.line << ":" << e.col << ": " << e.category << " error: " << e.message << "\n";
  return confn::dsl::exitCode(r) == 0 ? confn::dsl::kExitFailure : confn::dsl::exitCode(r);
}
