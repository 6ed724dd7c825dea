#include "qbell/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "qbell/errors.hpp"

namespace qbell {

using nlohmann::json;

const char* to_string(Task t) {
  switch (t) {
    case Task::qubit_dynamics: return "qubit-dynamics";
    case Task::entropy_time: return "entropy-time";
    case Task::entropy_lambda_scan: return "entropy-lambda-scan";
    case Task::q_grid: return "q-grid";
    case Task::moments: return "moments";
    case Task::wehrl_time: return "wehrl-time";
    case Task::complexity_lambda_scan: return "complexity-lambda-scan";
    case Task::slope_fit: return "slope-fit";
  }
  return "?";
}

const char* to_string(MethodChoice m) {
  switch (m) {
    case MethodChoice::series: return "series";
    case MethodChoice::theta: return "theta";
    case MethodChoice::both: return "both";
    case MethodChoice::linear: return "linear";
  }
  return "?";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::binary: return "binary";
    case OutputFormat::both: return "both";
  }
  return "?";
}

std::vector<double> RangeSpec::samples() const {
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + ": not finite");
  return v;
}

double get_number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

int get_int_or(const json& j, const std::string& key, const std::string& where, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

RangeSpec parse_range(const json& j, const std::string& where) {
  check_keys(j, where, {"start", "stop", "step"});
  RangeSpec r{get_number(j, "start", where), get_number(j, "stop", where), get_number(j, "step", where)};
  if (!(r.step > 0.0)) throw ConfigError(where + ".step: must be positive");
  if (r.stop < r.start) throw ConfigError(where + ": stop precedes start");
  if ((r.stop - r.start) / r.step > 1e7) throw ConfigError(where + ": too many samples");
  return r;
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::qubit_dynamics, Task::entropy_time, Task::entropy_lambda_scan, Task::q_grid, Task::moments,
                 Task::wehrl_time, Task::complexity_lambda_scan, Task::slope_fit})
    if (s == to_string(t)) return t;
  throw ConfigError("task: unknown task '" + s + "'");
}

enum class Axis { time, lambda, point };

Axis axis_of(Task t) {
  switch (t) {
    case Task::qubit_dynamics:
    case Task::entropy_time:
    case Task::moments:
    case Task::wehrl_time: return Axis::time;
    case Task::entropy_lambda_scan:
    case Task::complexity_lambda_scan:
    case Task::slope_fit: return Axis::lambda;
    case Task::q_grid: return Axis::point;
  }
  return Axis::point;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  check_keys(j, "config", {"name", "task", "params", "branch", "method", "time", "lambda", "t", "grid", "smoothing",
                           "quadrature", "output"});
  Scenario s;
  s.name = j.contains("name") ? get_string(j, "name", "config") : std::string("scenario");
  s.task = parse_task(get_string(j, "task", "config"));

  if (!j.contains("params")) throw ConfigError("config: missing 'params'");
  const json& pj = j.at("params");
  check_keys(pj, "params", {"delta", "epsilon", "omega", "lambda", "alpha"});
  s.params.delta = get_number(pj, "delta", "params");
  s.params.epsilon = get_number_or(pj, "epsilon", "params", 0.0);
  s.params.omega = get_number_or(pj, "omega", "params", 1.0);
  s.params.lambda = get_number_or(pj, "lambda", "params", 0.0);
  if (!pj.contains("alpha")) throw ConfigError("params: missing 'alpha'");
  const json& aj = pj.at("alpha");
  if (aj.is_number()) {
    s.params.alpha = aj.get<double>();
  } else if (aj.is_array() && aj.size() == 2 && aj[0].is_number() && aj[1].is_number()) {
    s.params.alpha = cplx(aj[0].get<double>(), aj[1].get<double>());
  } else {
    throw ConfigError("params.alpha: expected a number or [re, im]");
  }

  if (j.contains("branch")) {
    const auto b = get_string(j, "branch", "config");
    if (b == "+" || b == "plus") s.branch = Branch::plus;
    else if (b == "-" || b == "minus") s.branch = Branch::minus;
    else throw ConfigError("branch: expected '+' or '-'");
  }

  const bool grid_task = s.task == Task::q_grid || s.task == Task::wehrl_time ||
                         s.task == Task::complexity_lambda_scan || s.task == Task::slope_fit;
  if (j.contains("method")) {
    const auto m = get_string(j, "method", "config");
    if (m == "series") s.method = MethodChoice::series;
    else if (m == "theta") s.method = MethodChoice::theta;
    else if (m == "both") s.method = MethodChoice::both;
    else if (m == "linear") s.method = MethodChoice::linear;
    else throw ConfigError("method: expected series, theta, both or linear");
  }
  if (s.method == MethodChoice::linear && s.task != Task::q_grid)
    throw ConfigError("method: 'linear' applies to q-grid only");
  if (s.task == Task::q_grid && (s.method == MethodChoice::theta || s.method == MethodChoice::both))
    throw ConfigError("method: q-grid supports series or linear");
  if (grid_task && s.task != Task::q_grid && s.method != MethodChoice::series)
    throw ConfigError("method: delocalization tasks use the series method");

  if (j.contains("time")) s.time = parse_range(j.at("time"), "time");
  if (j.contains("lambda")) s.lambda = parse_range(j.at("lambda"), "lambda");
  if (j.contains("t")) s.t = get_number(j, "t", "config");

  switch (axis_of(s.task)) {
    case Axis::time:
      if (!s.time) throw ConfigError(std::string(to_string(s.task)) + ": needs a 'time' range");
      if (s.lambda || s.t) throw ConfigError(std::string(to_string(s.task)) + ": only a 'time' range may be given");
      break;
    case Axis::lambda:
      if (!s.lambda || !s.t) throw ConfigError(std::string(to_string(s.task)) + ": needs a 'lambda' range and a fixed 't'");
      if (s.time) throw ConfigError(std::string(to_string(s.task)) + ": a 'time' range is not allowed");
      if (s.lambda->start < 0.0) throw ConfigError("lambda.start: must be non-negative");
      break;
    case Axis::point:
      if (!s.t) throw ConfigError("q-grid: needs a fixed 't'");
      if (s.time || s.lambda) throw ConfigError("q-grid: scan ranges are not allowed");
      break;
  }

  if (j.contains("grid")) {
    const json& gj = j.at("grid");
    check_keys(gj, "grid", {"n_re", "n_im", "rule", "box"});
    s.grid.n_re = get_int_or(gj, "n_re", "grid", s.grid.n_re);
    s.grid.n_im = get_int_or(gj, "n_im", "grid", s.grid.n_im);
    if (s.grid.n_re < 2 || s.grid.n_im < 2 || s.grid.n_re > 5000 || s.grid.n_im > 5000)
      throw ConfigError("grid: node counts must lie in [2, 5000]");
    if (gj.contains("rule")) {
      const auto r = get_string(gj, "rule", "grid");
      if (r == "gauss-legendre") s.grid.rule = QuadratureRule::gauss_legendre;
      else if (r == "trapezoid") s.grid.rule = QuadratureRule::trapezoid;
      else throw ConfigError("grid.rule: expected gauss-legendre or trapezoid");
    }
    if (gj.contains("box")) {
      const json& bj = gj.at("box");
      if (!bj.is_array() || bj.size() != 4) throw ConfigError("grid.box: expected [re_min, re_max, im_min, im_max]");
      for (const auto& v : bj)
        if (!v.is_number()) throw ConfigError("grid.box: expected numbers");
      Box b{bj[0].get<double>(), bj[1].get<double>(), bj[2].get<double>(), bj[3].get<double>()};
      if (!(b.re_max > b.re_min) || !(b.im_max > b.im_min)) throw ConfigError("grid.box: empty box");
      s.grid.box = b;
    }
  } else if (grid_task && s.task != Task::q_grid) {
    s.grid.n_re = s.grid.n_im = 201;
  }

  if (j.contains("smoothing")) {
    const json& sj = j.at("smoothing");
    check_keys(sj, "smoothing", {"window", "order", "local_mean"});
    s.smoothing.window = get_int_or(sj, "window", "smoothing", s.smoothing.window);
    s.smoothing.order = get_int_or(sj, "order", "smoothing", s.smoothing.order);
    s.smoothing.local_mean = get_int_or(sj, "local_mean", "smoothing", s.smoothing.local_mean);
    if (s.smoothing.window < 1 || s.smoothing.window % 2 == 0) throw ConfigError("smoothing.window: must be odd");
    if (s.smoothing.order < 0 || s.smoothing.order >= s.smoothing.window)
      throw ConfigError("smoothing.order: must lie in [0, window)");
    if (s.smoothing.local_mean < 1) throw ConfigError("smoothing.local_mean: must be positive");
  }

  if (j.contains("quadrature")) {
    if (!j.at("quadrature").is_boolean()) throw ConfigError("quadrature: expected true or false");
    s.quadrature = j.at("quadrature").get<bool>();
    if (s.quadrature && s.task != Task::moments) throw ConfigError("quadrature: applies to the moments task only");
  }

  if (j.contains("output")) {
    const json& oj = j.at("output");
    check_keys(oj, "output", {"path", "format"});
    if (oj.contains("path")) s.output = get_string(oj, "path", "output");
    if (oj.contains("format")) {
      const auto f = get_string(oj, "format", "output");
      if (f == "csv") s.format = OutputFormat::csv;
      else if (f == "binary") s.format = OutputFormat::binary;
      else if (f == "both") s.format = OutputFormat::both;
      else throw ConfigError("output.format: expected csv, binary or both");
    }
    if (s.format != OutputFormat::csv && s.task != Task::q_grid)
      throw ConfigError("output.format: binary output exists for q-grid only");
  }
  if (s.output.empty()) throw ConfigError("output.path: empty");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

}  // namespace qbell
