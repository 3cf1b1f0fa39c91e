#pragma once

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cellsp {

// Flat `key = value` configuration, '#' comments, blank lines ignored.
struct KeyValueConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values[key] = value; }
};

KeyValueConfig parseConfig(std::istream& in);
KeyValueConfig parseConfigFile(const std::string& path);

// File name / content pairs; results.csv is always present, config.resolved.json
// records every key the run consulted, plot.svg appears for experiments with a chart.
struct ExperimentResult {
  std::vector<std::pair<std::string, std::string>> files;

  const std::string& file(const std::string& name) const;
};

// name is one of gen, infer, sparsify, sample, filter. Throws ArgumentError on an
// unknown name; keys the experiment does not consult are ignored and left out of
// config.resolved.json.
ExperimentResult runExperiment(const std::string& name, const KeyValueConfig& config);

// Runs and writes every result file into outputDir, creating it if needed.
ExperimentResult runExperimentToDir(const std::string& name, const KeyValueConfig& config,
                                    const std::string& outputDir);

} // namespace cellsp
