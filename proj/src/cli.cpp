#include "cellsp/cli.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellsp/experiments.hpp"

namespace cellsp {

namespace {

struct SubcommandFlags {
  CLI::App* app = nullptr;
  std::string configPath;
  std::uint64_t seed = 0;
  std::string outDir = "out";
  long orderLower = 0;
  long orderUpper = 0;
  long orderJoint = 0;
};

} // namespace

int runCli(int argc, const char* const* argv) {
  CLI::App app{"topological signal processing experiments on cell complexes"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"gen", "infer", "sparsify", "sample", "filter"};
  const std::vector<std::string> blurbs = {
      "generate a synthetic cell complex",
      "infer 2-cells from observed edge flows",
      "compare sparse representations across bases",
      "sample and reconstruct bandlimited edge signals",
      "sweep FIR filter designs and report output SNR"};
  std::vector<SubcommandFlags> flags(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    SubcommandFlags& f = flags[i];
    f.app = app.add_subcommand(names[i], blurbs[i]);
    f.app->add_option("--config", f.configPath, "key = value config file");
    f.app->add_option("--seed", f.seed, "override the master seed");
    f.app->add_option("--out", f.outDir, "output directory")->capture_default_str();
    if (names[i] == "filter") {
      f.app->add_option("--order-lower", f.orderLower, "gradient-side polynomial order");
      f.app->add_option("--order-upper", f.orderUpper, "curl-side polynomial order");
      f.app->add_option("--joint", f.orderJoint, "shared polynomial order for the joint design");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (std::size_t i = 0; i < names.size(); ++i) {
      SubcommandFlags& f = flags[i];
      if (!f.app->parsed()) continue;
      KeyValueConfig config;
      if (f.app->count("--config") > 0) config = parseConfigFile(f.configPath);
      if (f.app->count("--seed") > 0) config.set("seed", std::to_string(f.seed));
      if (names[i] == "filter") {
        if (f.app->count("--order-lower") > 0)
          config.set("filter.order_lower", std::to_string(f.orderLower));
        if (f.app->count("--order-upper") > 0)
          config.set("filter.order_upper", std::to_string(f.orderUpper));
        if (f.app->count("--joint") > 0)
          config.set("filter.order_joint", std::to_string(f.orderJoint));
      }
      const ExperimentResult result = runExperimentToDir(names[i], config, f.outDir);
      for (const auto& [fileName, content] : result.files)
        std::cout << f.outDir << "/" << fileName << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace cellsp
