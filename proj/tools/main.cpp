#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/jobs.hpp"
#include "app/presets.hpp"
#include "ramsey/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 1;

struct RunArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::vector<std::string> overrides;
};

YAML::Node assemble(const RunArgs& args) {
  using namespace ramsey::app;
  YAML::Node file(YAML::NodeType::Map);
  if (!args.config_path.empty()) file = load_yaml_file(args.config_path);
  if (file.IsNull()) file = YAML::Node(YAML::NodeType::Map);
  if (!file.IsMap()) throw ConfigError(args.config_path + ": top level must be a mapping");

  std::string preset_name = args.preset;
  if (preset_name.empty() && file["preset"] && file["preset"].IsScalar()) preset_name = file["preset"].Scalar();
  if (args.config_path.empty() && preset_name.empty()) {
    throw ConfigError("run needs a configuration file or --preset NAME");
  }

  YAML::Node root = file;
  if (!preset_name.empty()) {
    const Preset* preset = find_preset(preset_name);
    if (!preset) throw ConfigError("unknown preset '" + preset_name + "' (see list-presets)");
    root = merge(load_yaml_text(std::string(preset->yaml), "preset " + preset_name), file);
    root["preset"] = preset_name;
  }
  for (const auto& o : args.overrides) apply_override(root, o);
  if (!args.out_dir.empty()) root["output_dir"] = args.out_dir;
  return root;
}

int run(const RunArgs& args) {
  using namespace ramsey::app;
  try {
    const RunConfig config = parse_config(assemble(args));
    const StagedOutput out = run_job(config, emit_resolved(config));
    out.commit();
    std::cout << "wrote";
    for (const auto& [name, content] : out.files()) std::cout << " " << name;
    std::cout << " to " << config.output_dir.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ramsey::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ramsey::SizeLimitError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure in " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ramsey::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramsey interferometry under correlated Gaussian dephasing"};
  app.require_subcommand(1);

  RunArgs args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a configuration file and/or a preset");
  run_cmd->add_option("config", args.config_path, "YAML configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--preset", args.preset, "Start from a built-in preset (see list-presets)");
  run_cmd->add_option("--out", args.out_dir, "Output directory (overrides output_dir)");
  run_cmd->add_option("--set", args.overrides, "Override a dotted key, e.g. --set ensemble.n_qubits=50")
      ->allow_extra_args(false);

  CLI::App* list_cmd = app.add_subcommand("list-presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (list_cmd->parsed()) {
    for (const auto& p : ramsey::app::presets()) std::cout << p.name << "  " << p.description << "\n";
    return 0;
  }
  return run(args);
}
