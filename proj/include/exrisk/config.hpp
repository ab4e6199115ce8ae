#ifndef EXRISK_CONFIG_HPP
#define EXRISK_CONFIG_HPP

#include "exrisk/montecarlo.hpp"

#include <json.hpp>

#include <string>

namespace exrisk {

/// A config document could not be turned into an ExperimentConfig. `path`
/// is a JSON pointer to the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses a config document. A "fixture" key names a built-in fixture whose
/// sections fill in whatever the document leaves out.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Full effective configuration, defaults included.
nlohmann::json emit_config(const ExperimentConfig& config);

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b);

/// Doubles as JSON numbers; +-inf and NaN as strings.
nlohmann::json number(double x);
double read_number(const nlohmann::json& j);

}  // namespace exrisk

#endif  // EXRISK_CONFIG_HPP
