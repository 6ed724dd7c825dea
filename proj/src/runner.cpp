#include "qbell/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "qbell/delocalization.hpp"
#include "qbell/errors.hpp"
#include "qbell/oscillator_phase_space.hpp"
#include "qbell/qubit_dynamics.hpp"

namespace qbell {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

constexpr const char* kVersion = "qbell 0.1.0";

std::vector<std::pair<std::string, std::string>> base_metadata(const Scenario& s, const SystemParams& p) {
  std::vector<std::pair<std::string, std::string>> m;
  m.emplace_back("tool", kVersion);
  m.emplace_back("name", s.name);
  m.emplace_back("task", to_string(s.task));
  m.emplace_back("branch", to_string(s.branch));
  m.emplace_back("method", to_string(s.method));
  m.emplace_back("delta", format_number(s.params.delta));
  m.emplace_back("epsilon", format_number(s.params.epsilon));
  m.emplace_back("omega", format_number(s.params.omega));
  if (!s.lambda) {
    m.emplace_back("lambda", format_number(s.params.lambda));
    m.emplace_back("x", format_number(p.x));
    m.emplace_back("delta_tilde", format_number(p.delta_tilde));
  }
  m.emplace_back("alpha", format_number(s.params.alpha.real()) + "," + format_number(s.params.alpha.imag()));
  if (s.time)
    m.emplace_back("time", format_number(s.time->start) + ":" + format_number(s.time->step) + ":" +
                               format_number(s.time->stop));
  if (s.lambda)
    m.emplace_back("lambda_range", format_number(s.lambda->start) + ":" + format_number(s.lambda->step) + ":" +
                                       format_number(s.lambda->stop));
  if (s.t) m.emplace_back("t", format_number(*s.t));
  for (const auto& w : p.warnings) m.emplace_back("warning", w);
  return m;
}

GridSpec effective_grid(const Scenario& s, const RunOptions& opt) {
  GridSpec g = s.grid;
  if (opt.fine_grid) {
    g.n_re = g.n_im = 601;
    g.rule = QuadratureRule::gauss_legendre;
  }
  return g;
}

void grid_metadata(Table& t, const GridSpec& g) {
  t.metadata.emplace_back("grid", std::to_string(g.n_re) + "x" + std::to_string(g.n_im) + " " + to_string(g.rule));
  if (g.box)
    t.metadata.emplace_back("grid_box", format_number(g.box->re_min) + "," + format_number(g.box->re_max) + "," +
                                            format_number(g.box->im_min) + "," + format_number(g.box->im_max));
  else
    t.metadata.emplace_back("grid_box", "auto (half-width |alpha_hat| + lambda/omega + 6)");
}

PhysicalInputs with_lambda(PhysicalInputs in, double lambda) {
  in.lambda = lambda;
  return in;
}

bool wants(MethodChoice m, Method which) {
  if (m == MethodChoice::both) return true;
  return (m == MethodChoice::series) == (which == Method::series);
}

RunResult run_qubit_time(const Scenario& s, const RunOptions& opt, bool entropies) {
  const SystemParams p = derive(s.params);
  const auto ts = s.time->samples();
  const bool ser = wants(s.method, Method::series), th = wants(s.method, Method::theta);

  RunResult r;
  r.table.metadata = base_metadata(s, p);
  r.table.columns = {"t"};
  for (Method m : {Method::series, Method::theta}) {
    if (!wants(s.method, m)) continue;
    const std::string suffix = std::string("_") + to_string(m);
    if (entropies) {
      for (const char* c : {"varpi", "s_vn", "s_lin"}) r.table.columns.push_back(c + suffix);
    } else {
      for (const char* c : {"zeta", "re_xi", "im_xi"}) r.table.columns.push_back(c + suffix);
    }
  }

  std::optional<QubitSeries> series;
  if (ser) {
    series.emplace(p);
    r.table.metadata.emplace_back("n_max", std::to_string(series->n_max()));
  }
  if (th) r.table.metadata.emplace_back("theta_validity", theta_in_validity_region(p) ? "inside" : "outside");

  r.table.rows.assign(ts.size(), {});
  parallel_for(ts.size(), opt.threads, [&](std::size_t i) {
    const double t = ts[i];
    std::vector<double> row{t};
    auto emit = [&](const QubitStateRecord& rec) {
      if (entropies) {
        row.insert(row.end(), {rec.varpi, rec.s_vn, rec.s_lin});
      } else {
        row.insert(row.end(), {rec.zeta, rec.xi.real(), rec.xi.imag()});
      }
    };
    if (ser) {
      const double z = series->zeta(t);
      emit(make_record(t, s.branch, z, series->xi(t, s.branch), Method::series));
    }
    if (th) {
      const double z = zeta_theta(p, t);
      emit(make_record(t, s.branch, z, xi_theta(p, t, s.branch, z), Method::theta));
    }
    r.table.rows[i] = std::move(row);
  });
  return r;
}

RunResult run_entropy_lambda(const Scenario& s, const RunOptions& opt) {
  const auto lambdas = s.lambda->samples();
  const double t = *s.t;
  RunResult r;
  r.table.metadata = base_metadata(s, derive(with_lambda(s.params, lambdas.front())));
  r.table.columns = {"lambda"};
  for (Method m : {Method::series, Method::theta}) {
    if (!wants(s.method, m)) continue;
    const std::string suffix = std::string("_") + to_string(m);
    for (const char* c : {"varpi", "s_vn", "s_lin"}) r.table.columns.push_back(c + suffix);
  }
  r.table.rows.assign(lambdas.size(), {});
  parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
    const SystemParams p = derive(with_lambda(s.params, lambdas[i]));
    std::vector<double> row{lambdas[i]};
    for (Method m : {Method::series, Method::theta}) {
      if (!wants(s.method, m)) continue;
      const auto rec = qubit_record(p, t, s.branch, m);
      row.insert(row.end(), {rec.varpi, rec.s_vn, rec.s_lin});
    }
    r.table.rows[i] = std::move(row);
  });
  return r;
}

RunResult run_q_grid(const Scenario& s, const RunOptions& opt) {
  const SystemParams p = derive(s.params);
  const GridSpec spec = effective_grid(s, opt);
  const double t = *s.t;
  RunResult r;
  r.table.metadata = base_metadata(s, p);
  grid_metadata(r.table, spec);

  QGrid g;
  if (s.method == MethodChoice::linear) {
    g = tabulate_grid(p, t, s.branch, spec, [&](cplx beta) { return q_linear(p, t, s.branch, beta); });
  } else {
    // rows are independent; fill them in parallel on a shared layout
    g = tabulate_grid(p, t, s.branch, spec, [](cplx) { return 0.0; });
    const double radius = std::hypot(std::max(std::abs(g.box.re_min), std::abs(g.box.re_max)),
                                     std::max(std::abs(g.box.im_min), std::abs(g.box.im_max)));
    const HusimiSeries q(p, t, s.branch, radius);
    parallel_for(static_cast<std::size_t>(g.n_re()), opt.threads, [&](std::size_t i) {
      for (int j = 0; j < g.n_im(); ++j) g.values(static_cast<int>(i), j) = q(cplx(g.re.nodes[i], g.im.nodes[j]));
    });
  }
  r.table.metadata.emplace_back("quadrature_total", format_number(g.total()));
  r.table.columns = {"re", "im", "q", "weight"};
  r.table.rows.reserve(static_cast<std::size_t>(g.n_re()) * g.n_im());
  for (int i = 0; i < g.n_re(); ++i)
    for (int j = 0; j < g.n_im(); ++j)
      r.table.rows.push_back({g.re.nodes[i], g.im.nodes[j], g.values(i, j), g.re.weights[i] * g.im.weights[j]});
  r.grid = std::move(g);
  return r;
}

RunResult run_moments(const Scenario& s, const RunOptions& opt) {
  const SystemParams p = derive(s.params);
  const auto ts = s.time->samples();
  const GridSpec spec = effective_grid(s, opt);
  RunResult r;
  r.table.metadata = base_metadata(s, p);
  if (s.quadrature) grid_metadata(r.table, spec);
  r.table.columns = {"t"};
  std::vector<MomentMethod> methods;
  if (wants(s.method, Method::series)) methods.push_back(MomentMethod::series);
  if (wants(s.method, Method::theta)) methods.push_back(MomentMethod::theta);
  if (s.quadrature) methods.push_back(MomentMethod::quadrature);
  for (auto m : methods) {
    const std::string suffix = std::string("_") + to_string(m);
    for (const char* c : {"e1", "b1", "e2", "b2", "uncertainty"}) r.table.columns.push_back(c + suffix);
  }
  r.table.rows.assign(ts.size(), {});
  parallel_for(ts.size(), opt.threads, [&](std::size_t i) {
    const double t = ts[i];
    std::vector<double> row{t};
    for (auto m : methods) {
      MomentRecord rec;
      if (m == MomentMethod::series) rec = moments_series(p, t, s.branch);
      else if (m == MomentMethod::theta) rec = moments_theta(p, t, s.branch);
      else rec = moments_quadrature(evaluate_grid(p, t, s.branch, spec));
      row.insert(row.end(), {rec.e1, rec.b1, rec.e2, rec.b2, rec.uncertainty});
    }
    r.table.rows[i] = std::move(row);
  });
  return r;
}

DelocalizationRecord delocalization_point(const SystemParams& p, double t, Branch b, const GridSpec& spec) {
  DelocalizationRecord d;
  d.t = t;
  d.lambda = p.lambda;
  d.branch = b;
  d.s_wehrl = wehrl_entropy(evaluate_grid(p, t, b, spec));
  d.m2 = complexity_m2_series(p, t, b);
  d.w2 = 1.0 / d.m2;
  d.uncertainty = moments_series(p, t, b).uncertainty;
  return d;
}

void smoothing_metadata(Table& t, const SmoothingSpec& sm) {
  t.metadata.emplace_back("smoothing", "savitzky-golay window " + std::to_string(sm.window) + " order " +
                                           std::to_string(sm.order));
}

RunResult run_delocalization(const Scenario& s, const RunOptions& opt) {
  const GridSpec spec = effective_grid(s, opt);
  const bool over_time = s.task == Task::wehrl_time;
  const auto axis = over_time ? s.time->samples() : s.lambda->samples();

  RunResult r;
  r.table.metadata =
      base_metadata(s, derive(over_time ? s.params : with_lambda(s.params, axis.front())));
  grid_metadata(r.table, spec);
  smoothing_metadata(r.table, s.smoothing);

  std::vector<DelocalizationRecord> recs(axis.size());
  const SystemParams fixed = derive(s.params);
  parallel_for(axis.size(), opt.threads, [&](std::size_t i) {
    if (over_time) {
      recs[i] = delocalization_point(fixed, axis[i], s.branch, spec);
    } else {
      recs[i] = delocalization_point(derive(with_lambda(s.params, axis[i])), *s.t, s.branch, spec);
    }
  });

  std::vector<double> sq(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) sq[i] = recs[i].s_wehrl;
  const int window = std::min<int>(s.smoothing.window, static_cast<int>(sq.size()) - (sq.size() % 2 == 0 ? 1 : 0));
  if (window < 1) throw ConfigError("smoothing: series too short");
  const auto smoothed = smooth(sq, window, std::min(s.smoothing.order, window - 1));

  r.table.columns = {"lambda", "t", "branch", "s_wehrl", "s_wehrl_smoothed", "m2", "w2", "uncertainty"};
  std::vector<double> local;
  if (over_time) {
    local = boxcar(sq, s.smoothing.local_mean);
    r.table.columns.push_back("s_wehrl_local_mean");
    r.table.metadata.emplace_back("local_mean_window", std::to_string(s.smoothing.local_mean));
  }
  std::vector<double> ratio;
  if (s.task == Task::slope_fit) {
    const SlopeFit fit = fit_slopes(s.lambda->samples(), smoothed);
    ratio = weight_ratio(smoothed, fit.index_0);
    r.table.columns.push_back("w_ratio");
    r.table.metadata.emplace_back("lambda_0", format_number(fit.lambda_0));
    r.table.metadata.emplace_back("s_wehrl_peak", format_number(smoothed[fit.index_0]));
    r.table.metadata.emplace_back("m_less", format_number(fit.m_less));
    r.table.metadata.emplace_back("m_greater", format_number(fit.m_greater));
    r.table.metadata.emplace_back("fit_window", format_number(fit.lambda_min) + ":" + format_number(fit.lambda_max));
  }
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& d = recs[i];
    std::vector<double> row{d.lambda, d.t, static_cast<double>(sign_of(d.branch)), d.s_wehrl, smoothed[i], d.m2, d.w2,
                            d.uncertainty};
    if (over_time) row.push_back(local[i]);
    if (!ratio.empty()) row.push_back(ratio[i]);
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  switch (s.task) {
    case Task::qubit_dynamics: return run_qubit_time(s, opt, false);
    case Task::entropy_time: return run_qubit_time(s, opt, true);
    case Task::entropy_lambda_scan: return run_entropy_lambda(s, opt);
    case Task::q_grid: return run_q_grid(s, opt);
    case Task::moments: return run_moments(s, opt);
    case Task::wehrl_time:
    case Task::complexity_lambda_scan:
    case Task::slope_fit: return run_delocalization(s, opt);
  }
  throw ConfigError("unknown task");
}

std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunResult& r,
                                                 const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  const std::filesystem::path base = out_dir / s.output;
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  if (s.format != OutputFormat::binary) {
    auto path = base;
    path += ".csv";
    write_csv(path, r.table);
    written.push_back(path);
  }
  if (s.format != OutputFormat::csv && r.grid) {
    auto path = base;
    path += ".qgrid";
    write_grid_binary(path, *r.grid);
    written.push_back(path);
  }
  return written;
}

}  // namespace qbell
