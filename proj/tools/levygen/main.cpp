#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace levygen::cli;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw levygen::ConfigError(path.string(), "cannot write output file");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levygen: Levy symbols, generators, simulation and small-time asymptotics"};
  app.require_subcommand(1, 1);

  std::string config, seed_text, out_dir = ".";
  int workers = 1;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--seed", seed_text, "master seed, decimal or 0x hex (default 0x4C455659)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunOptions opt;
    opt.workers = workers;
    if (!seed_text.empty()) opt.seed = parse_seed(seed_text, "--seed");
    json cfg = load(config);
    CommandResult res = run_command(command, cfg, opt);

    fs::create_directories(out_dir);
    for (const auto& f : res.files) write_file(fs::path(out_dir) / f.name, f.text);
    const std::string summary = res.summary.dump(2) + "\n";
    write_file(fs::path(out_dir) / (command + ".json"), summary);
    std::cout << summary;
    return res.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "levygen " << command << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}
