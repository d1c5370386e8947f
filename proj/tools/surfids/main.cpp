#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "surfstates/error.hpp"

namespace {

using surfids::ExitCode;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  unsigned threads = 1;
  std::string format = "csv";
};

using Command = int (*)(surfids::RunContext&);

int run_study(const std::string& name, Command command, const Options& opts) {
  if (opts.config.empty()) {
    std::cerr << name << ": --config is required\n";
    return surfids::kConfigError;
  }
  auto config = surfids::load_config(opts.config);
  if (opts.seed) config.seed = *opts.seed;
  const auto canonical = surfids::canonical_text(config);
  const auto digest = surfids::digest(canonical);
  const auto format = opts.format == "json" ? surfids::Format::json : surfids::Format::csv;
  surfids::OutputTree out(std::filesystem::path(opts.out) / digest, format,
                          "digest: " + digest + "\n" + canonical);
  surfids::RunContext ctx{std::move(config), out, opts.threads, std::cout};
  return command(ctx);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const surfstates::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.category() == surfstates::ErrorCategory::config ? surfids::kConfigError : surfids::kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return surfids::kNumericFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfids: integrated density of surface states studies"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t seed = 0;

  const std::map<std::string, std::pair<Command, std::string>> studies{
      {"free-ids", {surfids::cmd_free_ids, "Free IDS on the energy grid and the Landau ladder"}},
      {"transverse-gap", {surfids::cmd_transverse_gap, "Ground energy of the Dirichlet transverse operator per L"}},
      {"idss", {surfids::cmd_idss, "Ensemble IDSS curves"}},
      {"reduced-ids", {surfids::cmd_reduced_ids, "IDS curves of the reduced operators at the sandwich scalings"}},
      {"sandwich", {surfids::cmd_sandwich, "Sandwich and exact integer checks"}},
      {"lifshits-fit", {surfids::cmd_lifshits_fit, "Lifshits exponent fit of a curve file or synthetic curve"}},
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : studies) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", opts.config, "YAML experiment config")->required();
    sub->add_option("--seed", seed, "Override numerics.seed");
    sub->add_option("--out", opts.out, "Output root directory")->capture_default_str();
    sub->add_option("--threads", opts.threads, "Worker threads over realizations")->check(CLI::PositiveNumber);
    sub->add_option("--format", opts.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    subs[name] = sub;
  }
  auto* selftest = app.add_subcommand("selftest", "Built-in battery of examples and invariants");
  selftest->add_option("--out", opts.out, "Output root directory")->capture_default_str();
  selftest->add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? surfids::kPass : surfids::kConfigError;
  }

  if (selftest->parsed()) {
    return guarded([&] { return surfids::cmd_selftest(opts.out, opts.threads, std::cout); });
  }
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) opts.seed = seed;
    return guarded([&] { return run_study(name, studies.at(name).first, opts); });
  }
  return surfids::kConfigError;
}
