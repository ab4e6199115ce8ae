#ifndef EXRISK_FIXTURES_HPP
#define EXRISK_FIXTURES_HPP

#include "exrisk/montecarlo.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace exrisk {

// Built-in fixtures, as config documents:
//   two-point  uniform P on two states, F = {(0,0), (0.4,0)}
//   singleton  one loss on two states
//   random20   20 losses with values in [0,1] on 10 states (seeded)
//   quadratic  (x - theta)^2 on a 51-point grid theta in [-1/4, 1/4]
//   nested3    24 losses, models = first 4 / first 12 / all 24

std::vector<std::string> fixture_names();
nlohmann::json fixture_document(std::string_view name);
ExperimentConfig fixture_config(std::string_view name);

/// Members (x_s - theta_i)^2 for each state value x_s and grid point theta_i.
FunctionClass quadratic_class(const Vector& state_values, const Vector& theta_grid);

}  // namespace exrisk

#endif  // EXRISK_FIXTURES_HPP
