#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "viscowave/commands.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/run_config.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  std::string preset;
  std::vector<std::string> sets;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "flat JSON config file");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--preset", f.preset, "problem preset (smooth, free, constant, single_mode, flux)");
  sub->add_option("--set", f.sets, "override a config key, key=value (repeatable)");
}

int run(const std::string& command, const Flags& f) {
  viscowave::RunConfig cfg;
  if (!f.config.empty()) cfg.merge_file(f.config);
  if (!f.preset.empty()) cfg.set_value("preset", f.preset);
  if (!f.out.empty()) cfg.set_value("out", f.out);
  if (f.threads != 0) cfg.set_value("threads", f.threads);
  for (const auto& s : f.sets) cfg.set(s);
  const auto result = viscowave::run_command(command, cfg);
  std::cout << result.summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and asymptotic checks for the viscous damped wave equation on [0, pi]"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const auto& name : viscowave::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " command");
    add_flags(sub, flags);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  try {
    return run(chosen, flags);
  } catch (const viscowave::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const viscowave::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const viscowave::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}
