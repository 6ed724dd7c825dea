#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbell/model.hpp"
#include "qbell/quadrature.hpp"

namespace qbell {

enum class Task {
  qubit_dynamics,
  entropy_time,
  entropy_lambda_scan,
  q_grid,
  moments,
  wehrl_time,
  complexity_lambda_scan,
  slope_fit
};
const char* to_string(Task t);

enum class MethodChoice { series, theta, both, linear };
const char* to_string(MethodChoice m);

enum class OutputFormat { csv, binary, both };
const char* to_string(OutputFormat f);

// Inclusive uniform grid start, start + step, ... up to stop.
struct RangeSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> samples() const;
};

struct SmoothingSpec {
  int window = 51;
  int order = 3;
  int local_mean = 200;  // boxcar width for the locally time-averaged series
};

struct Scenario {
  std::string name;
  Task task = Task::qubit_dynamics;
  PhysicalInputs params;
  Branch branch = Branch::plus;
  MethodChoice method = MethodChoice::series;
  std::optional<RangeSpec> time;
  std::optional<RangeSpec> lambda;
  std::optional<double> t;
  GridSpec grid;
  SmoothingSpec smoothing;
  bool quadrature = false;  // moments: add quadrature columns
  std::string output = "out";
  OutputFormat format = OutputFormat::csv;
};

// Throws ConfigError with the offending key in the message.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace qbell
