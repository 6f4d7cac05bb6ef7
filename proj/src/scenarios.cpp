// Copyright 2026 The rel-toa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reltoa/scenarios.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <span>
#include <sstream>

#include "reltoa/acceptance.hpp"
#include "reltoa/csv.hpp"
#include "reltoa/errors.hpp"
#include "reltoa/expectation.hpp"
#include "reltoa/physcore.hpp"
#include "reltoa/toadist.hpp"

namespace reltoa::app {

// Generated from presets/*.ini at configure time.
namespace detail {
const std::vector<std::pair<std::string, std::string>>& bundled_presets();
}

namespace {

using config::RunConfig;
using waves::MomentumFunction;
using waves::Snapshot;
using waves::UniformGrid;

// Shortest round-trip text of a value, for file names.
std::string label(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t count(int n) { return static_cast<std::size_t>(n); }

// Gnuplot script assembled line by line.
class PlotScript {
 public:
  explicit PlotScript(std::string_view title) {
    text_ << "# gnuplot script; run from the output directory: gnuplot plot.gp\n"
          << "set datafile separator ','\n"
          << "set datafile commentschars '#'\n"
          << "set key autotitle columnhead\n"
          << "set terminal pngcairo size 900,600\n"
          << "# " << title << "\n";
  }
  void page(std::string_view png, std::string_view xlabel, std::string_view ylabel) {
    text_ << "\nset output '" << png << "'\n"
          << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n";
  }
  void raw(std::string_view line) { text_ << line << '\n'; }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

double trapezoid_l1(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
    s += w * std::abs(a[i] - b[i]);
  }
  return s * h;
}

// ---- kernel ---------------------------------------------------------------

int run_kernel(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& k = cfg.kernel;
  const auto& params = cfg.params;
  const double ratio = std::log(k.dq_max / k.dq_min);
  double worst = 0.0;
  out.write("kernel.csv", [&](std::ostream& os) {
    csv::write_header(os, {"delta_q", "a", "tc_closed", "tc_integral", "rel_diff"});
    for (int i = 0; i < k.dq_points; ++i) {
      const double dq = k.dq_min * std::exp(ratio * i / (k.dq_points - 1));
      const double closed = physcore::tc_closed(dq, params);
      const double integral = physcore::tc_integral(dq, params, k.rel_tol);
      const double rel = std::abs(closed - integral) / std::abs(integral);
      worst = std::max(worst, rel);
      csv::write_row(os, {dq, dq * params.inverse_compton_length(), closed, integral, rel});
    }
  });
  double worst_pv = 0.0;
  out.write("pv_check.csv", [&](std::ostream& os) {
    csv::write_meta(os, "p_max", k.pv_p_max);
    csv::write_meta(os, "points_per_panel", static_cast<double>(k.pv_points));
    csv::write_header(os, {"delta_q", "oracle_re", "oracle_im", "expected_re", "expected_im", "abs_error"});
    const physcore::PvOracleOptions opts{k.pv_p_max, k.pv_points, k.pv_tolerance};
    for (double dq : k.pv_delta_q) {
      const auto oracle = physcore::pv_momentum_kernel_oracle(dq, params, opts);
      const std::complex<double> expected(
          0.0, physcore::tc_closed(std::abs(dq), params) * physcore::sgn(dq) / (2.0 * params.hbar()));
      const double err = std::abs(oracle - expected);
      worst_pv = std::max(worst_pv, err);
      csv::write_row(os, {dq, oracle.real(), oracle.imag(), expected.real(), expected.imag(), err});
    }
  });
  log << "kernel: max relative closed/integral difference " << worst << ", max PV oracle error "
      << worst_pv << '\n';

  PlotScript plot("T_c factor and momentum-space oracle");
  plot.page("kernel.png", "delta q", "T_c");
  plot.raw("set logscale x");
  plot.raw("plot 'kernel.csv' using 1:3 with lines title 'closed form', "
           "'' using 1:4 with points title 'quadrature'");
  plot.raw("unset logscale x");
  plot.page("pv_check.png", "delta q", "Im");
  plot.raw("plot 'pv_check.csv' using 1:3 with points title 'oracle', '' using 1:5 with lines title 'expected'");
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- spectrum -------------------------------------------------------------

bool has_class(const nystrom::EigenSystem& s, nystrom::ParityClass c) {
  return std::any_of(s.modes.begin(), s.modes.end(), [c](const auto& m) { return m.parity_class == c; });
}

std::optional<std::pair<double, double>> configured_window(const config::GridSettings& g) {
  if (g.tau_window_min && g.tau_window_max) return std::make_pair(*g.tau_window_min, *g.tau_window_max);
  return std::nullopt;
}

int run_spectrum(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto system = solve_grid(cfg.grid, cfg.params, nystrom::ParityBlock::Both,
                                 configured_window(cfg.grid), cfg.grid.vectors);
  log << "spectrum: " << system.modes.size() << " modes, spectral radius " << system.spectral_radius
      << '\n';
  out.write("spectrum_modes.csv", [&](std::ostream& os) { nystrom::write_modes_csv(os, system); });

  PlotScript plot("coarse-grained spectrum");
  plot.page("spectrum.png", "index", "tau");
  plot.raw("plot 'spectrum_modes.csv' using 1:2 with points title 'tau'");

  if (system.has_vectors()) {
    out.write("spectrum_vectors.csv", [&](std::ostream& os) { nystrom::write_vectors_csv(os, system); });
    using nystrom::ParityClass;
    if (has_class(system, ParityClass::NonNodal) && has_class(system, ParityClass::Nodal)) {
      const auto& nn = system.modes[system.nearest(cfg.evolve.tau, ParityClass::NonNodal)];
      const auto& nd = system.modes[system.nearest(cfg.evolve.tau, ParityClass::Nodal)];
      const nystrom::EigenfunctionInterpolant f_nn(nn, system.grid, system.params);
      const nystrom::EigenfunctionInterpolant f_nd(nd, system.grid, system.params);
      const double l = system.grid.half_length;
      const auto qg = UniformGrid::span(-l, l, count(cfg.evolve.interp_points));
      out.write("eigenfunctions_interp.csv", [&](std::ostream& os) {
        csv::write_meta(os, "tau_nonnodal", nn.tau);
        csv::write_meta(os, "tau_nodal", nd.tau);
        csv::write_meta(os, "method", nystrom::to_string(f_nn.method()));
        csv::write_header(os, {"q", "re_nonnodal", "im_nonnodal", "re_nodal", "im_nodal"});
        for (std::size_t i = 0; i < qg.size(); ++i) {
          const auto a = f_nn(qg[i]);
          const auto b = f_nd(qg[i]);
          csv::write_row(os, {qg[i], a.real(), a.imag(), b.real(), b.imag()});
        }
      });
      plot.page("eigenfunctions.png", "q", "amplitude");
      plot.raw("plot 'eigenfunctions_interp.csv' using 1:2 with lines title 'non-nodal re', "
               "'' using 1:3 with lines title 'non-nodal im', '' using 1:4 with lines title 'nodal re', "
               "'' using 1:5 with lines title 'nodal im'");
    }
  }
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- evolve ---------------------------------------------------------------

struct Track {
  std::string name;
  double tau;
  std::vector<Snapshot> snapshots;
  std::optional<waves::ArrivalReport> report;
};

void write_tracks(const std::vector<Track>& tracks, io::OutputSet& out, PlotScript& plot) {
  for (const Track& tr : tracks) {
    const std::string file = "snapshots_" + tr.name + ".csv";
    out.write(file, [&](std::ostream& os) {
      csv::write_meta(os, "tau", tr.tau);
      waves::write_snapshots_csv(os, tr.snapshots);
    });
    plot.page("snapshots_" + tr.name + ".png", "q", "t");
    plot.raw("set view map");
    plot.raw("splot '" + file + "' using 2:1:3 with points palette pointsize 0.4 pointtype 5 notitle");
  }
  const bool any_report = std::any_of(tracks.begin(), tracks.end(), [](const Track& t) { return t.report.has_value(); });
  if (!any_report) return;

  out.write("arrival.csv", [&](std::ostream& os) {
    os << "mode,tau,t_min_spread,t_min_separation,rel_error_spread,rel_error_separation\n";
    for (const Track& tr : tracks) {
      if (!tr.report) continue;
      const double sep = tr.report->t_min_separation.value_or(std::nan(""));
      os << tr.name;
      for (double v : {tr.tau, tr.report->t_min_spread, sep,
                       std::abs(tr.report->t_min_spread - tr.tau) / std::abs(tr.tau),
                       std::abs(sep - tr.tau) / std::abs(tr.tau)}) {
        os << ',' << csv::format(v);
      }
      os << '\n';
    }
  });
  out.write("arrival_series.csv", [&](std::ostream& os) {
    os << 't';
    for (const Track& tr : tracks) os << ",spread_" << tr.name << ",separation_" << tr.name;
    os << '\n';
    const auto& times = tracks.front().report->times;
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << csv::format(times[i]);
      for (const Track& tr : tracks) {
        os << ',' << csv::format(tr.report->spreads[i]) << ',' << csv::format(tr.report->peak_separation[i]);
      }
      os << '\n';
    }
  });
  plot.raw("unset view");
  plot.page("arrival.png", "t", "spread / separation");
  plot.raw("plot for [c=2:" + std::to_string(1 + 2 * tracks.size()) +
           "] 'arrival_series.csv' using 1:c with lines");
}

int run_evolve(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& ev = cfg.evolve;
  const auto& params = cfg.params;
  const auto p_grid = UniformGrid::symmetric(ev.p_max, count(ev.p_points));
  std::vector<Track> tracks;

  auto with_delta = [&](MomentumFunction g) {
    g.converging_delta = ev.delta;
    return g;
  };

  switch (ev.source) {
    case config::EvolveSource::Coarse: {
      const auto window = configured_window(cfg.grid).value_or(std::make_pair(ev.tau - 0.25, ev.tau + 0.25));
      const auto system = solve_grid(cfg.grid, params, nystrom::ParityBlock::Both, window, true);
      using nystrom::ParityClass;
      if (!has_class(system, ParityClass::NonNodal) || !has_class(system, ParityClass::Nodal)) {
        throw ValidationError("no non-nodal/nodal mode pair in the tau window (" + csv::format(window.first) +
                                  ", " + csv::format(window.second) + "]",
                              "tau");
      }
      for (auto cls : {ParityClass::NonNodal, ParityClass::Nodal}) {
        const auto& mode = system.modes[system.nearest(ev.tau, cls)];
        tracks.push_back({nystrom::to_string(cls), mode.tau, propagate(coarse_mode_momentum(mode, system, ev), ev, params), {}});
      }
      break;
    }
    case config::EvolveSource::Analytic:
      tracks.push_back({"nonnodal", ev.tau, propagate(with_delta(waves::nonnodal_eigenfunction(p_grid, ev.tau, params)), ev, params), {}});
      tracks.push_back({"nodal", ev.tau, propagate(with_delta(waves::nodal_eigenfunction(p_grid, ev.tau, params)), ev, params), {}});
      break;
    case config::EvolveSource::RazaviComplex:
      for (double im : ev.tau_imag) {
        const auto g = with_delta(waves::razavi_complex_eigenfunction(p_grid, {ev.tau, im}, params));
        tracks.push_back({"razavi_complex_im_" + label(im), ev.tau, propagate(g, ev, params), {}});
      }
      break;
    case config::EvolveSource::RazaviReal:
      for (double eps : ev.epsilon) {
        const auto g = with_delta(waves::razavi_real_eigenfunction(p_grid, ev.tau, eps, params));
        tracks.push_back({"razavi_real_eps_" + label(eps), ev.tau, propagate(g, ev, params), {}});
      }
      break;
  }

  const bool diagnose = ev.source == config::EvolveSource::Coarse || ev.source == config::EvolveSource::Analytic;
  if (diagnose) {
    for (Track& tr : tracks) {
      tr.report = waves::arrival_diagnostic(tr.snapshots, 0.0, ev.window);
      log << "evolve: " << tr.name << " tau=" << tr.tau << " t_min_spread=" << tr.report->t_min_spread;
      if (tr.report->t_min_separation) log << " t_min_separation=" << *tr.report->t_min_separation;
      log << '\n';
    }
  }
  PlotScript plot(std::string("evolution, source ") + config::to_string(ev.source));
  write_tracks(tracks, out, plot);
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- expectation ----------------------------------------------------------

int run_expectation(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& ex = cfg.expectation;
  const auto& params = cfg.params;
  out.write("expectation.csv", [&](std::ostream& os) {
    csv::write_meta(os, "q0", cfg.wavepacket.q0);
    csv::write_meta(os, "t_photon", expectation::photon_toa(cfg.wavepacket.q0, params));
    csv::write_header(os, {"p", "sigma", "t_classical", "qc", "tau_borel", "tau_exact", "tau_exact_error",
                           "tau_series_optimal", "n_optimal", "rel_diff_exact_borel"});
    for (double sigma : ex.sigma_values) {
      for (double p : ex.p_values) {
        waves::WavepacketSpec spec = cfg.wavepacket;
        spec.p0 = p;
        spec.sigma = sigma;
        spec.validate();
        const double t = expectation::classical_rel_toa(spec.q0, p, params);
        const double qc = expectation::qc_borel(p, sigma, params);
        double exact = std::nan(""), exact_err = std::nan("");
        if (ex.exact) {
          const auto e = expectation::toa_exact(spec, params, ex.tolerance);
          exact = e.value;
          exact_err = e.error;
        }
        double series = std::nan(""), n_opt = std::nan("");
        if (!spec.support_half_width) {
          const auto s = expectation::toa_series(expectation::chi_moments(spec, ex.n_max), p, params, ex.n_max);
          series = s.optimal_value;
          n_opt = static_cast<double>(s.optimal_truncation_index);
        }
        const double rel = std::abs(exact - t * qc) / std::abs(exact);
        log << "expectation: p=" << p << " sigma=" << sigma << " t*Qc=" << t * qc << " exact=" << exact << '\n';
        csv::write_row(os, {p, sigma, t, qc, t * qc, exact, exact_err, series, n_opt, rel});
      }
    }
  });
  PlotScript plot("expected arrival time");
  plot.page("expectation.png", "p", "tau");
  plot.raw("plot 'expectation.csv' using 1:6 with points title 'exact', '' using 1:5 with lines title 'Borel', "
           "'' using 1:3 with lines title 'classical'");
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- qfactor --------------------------------------------------------------

int run_qfactor(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& ex = cfg.expectation;
  const auto& params = cfg.params;
  struct Row {
    double sigma, p;
    expectation::BorelParts borel;
    expectation::SeriesEvaluation series;
  };
  std::vector<Row> rows;
  for (double sigma : ex.sigma_values) {
    for (double p : ex.p_values) {
      rows.push_back({sigma, p, expectation::qc_borel_parts(p, sigma, params),
                      expectation::qc_series(p, sigma, params, ex.n_max)});
      log << "qfactor: sigma=" << sigma << " p=" << p << " Qc=" << rows.back().borel.value() << '\n';
    }
  }
  out.write("qfactor.csv", [&](std::ostream& os) {
    csv::write_header(os, {"sigma", "p", "qc_borel", "q1", "q2", "prefactor", "qc_series_optimal", "n_optimal",
                           "diverged_after"});
    for (const Row& r : rows) {
      const double div = r.series.diverged_after ? static_cast<double>(*r.series.diverged_after) : -1.0;
      csv::write_row(os, {r.sigma, r.p, r.borel.value(), r.borel.q1, r.borel.q2, r.borel.prefactor,
                          r.series.optimal_value, static_cast<double>(r.series.optimal_truncation_index), div});
    }
  });
  out.write("qc_series.csv", [&](std::ostream& os) {
    csv::write_header(os, {"sigma", "p", "n", "term", "partial_sum"});
    for (const Row& r : rows) {
      for (std::size_t n = 0; n < r.series.terms.size(); ++n) {
        csv::write_row(os, {r.sigma, r.p, static_cast<double>(n), r.series.terms[n], r.series.partial_sums[n]});
      }
    }
  });
  PlotScript plot("quantum correction factor");
  plot.page("qfactor.png", "p", "Q_c");
  plot.raw("plot 'qfactor.csv' using 2:3:1 with linespoints palette title 'Borel'");
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- dist / translate -----------------------------------------------------

void write_dist(io::OutputSet& out, const std::string& name, const toadist::ToaDistribution& d) {
  out.write(name, [&](std::ostream& os) { toadist::write_csv(os, d); });
}

int run_dist(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& ds = cfg.dist;
  const auto& params = cfg.params;
  const auto& spec = cfg.wavepacket;
  spec.validate();
  const auto tau_grid = UniformGrid::span(ds.tau_min, ds.tau_max, count(ds.tau_points));
  const auto p_grid = UniformGrid::symmetric(ds.p_max, count(ds.p_points));
  const double t_photon = expectation::photon_toa(spec.q0, params);

  std::optional<std::pair<double, double>> bounds;
  if (spec.support_half_width) {
    const double a = *spec.support_half_width;
    const double qc = expectation::qc_borel(spec.p0, spec.sigma, params);
    bounds = std::make_pair(expectation::classical_rel_toa(spec.q0 + a, spec.p0, params) * qc,
                            expectation::classical_rel_toa(spec.q0 - a, spec.p0, params) * qc);
  }

  std::vector<std::pair<std::string, toadist::ToaDistribution>> made;
  for (const std::string& kind : ds.kinds) {
    if (kind == "coarse") {
      const auto parity = ds.include_nodal ? nystrom::ParityBlock::Both : nystrom::ParityBlock::Even;
      const auto window =
          configured_window(cfg.grid).value_or(std::make_pair(ds.tau_min - 0.5, ds.tau_max + 0.5));
      const auto system = solve_grid(cfg.grid, params, parity, window, true);
      toadist::CoarseOptions opts;
      opts.include_nodal = ds.include_nodal;
      made.emplace_back("coarse", toadist::dist_coarse(spec, system, tau_grid, opts));
    } else if (kind == "analytic") {
      made.emplace_back("analytic", toadist::dist_analytic(spec, tau_grid, params, p_grid));
    } else {
      for (double eps : ds.epsilon) {
        made.emplace_back("razavi_eps_" + label(eps), toadist::dist_razavi_real(spec, tau_grid, eps, params, p_grid));
      }
    }
  }

  const toadist::ToaDistribution* coarse = nullptr;
  const toadist::ToaDistribution* analytic = nullptr;
  for (const auto& [name, d] : made) {
    write_dist(out, "toadist_" + name + ".csv", d);
    if (name == "coarse") coarse = &d;
    if (name == "analytic") analytic = &d;
  }

  out.write("dist_summary.csv", [&](std::ostream& os) {
    csv::write_meta(os, "t_photon", t_photon);
    if (bounds) {
      csv::write_meta(os, "bound_lower", bounds->first);
      csv::write_meta(os, "bound_upper", bounds->second);
    }
    if (coarse && analytic) csv::write_meta(os, "l1_coarse_analytic", toadist::l1_distance(*coarse, *analytic));
    os << "name,raw_integral,peak,mean,superluminal_mass,max_density_raw,mass_in_bounds\n";
    for (const auto& [name, d] : made) {
      const double inside = bounds ? toadist::mass_between(d, bounds->first * 0.99, bounds->second * 1.01)
                                   : std::nan("");
      os << name;
      for (double v : {d.raw_integral, toadist::peak(d), toadist::mean(d), toadist::superluminal_mass(d, t_photon),
                       toadist::max_density_raw(d), inside}) {
        os << ',' << csv::format(v);
      }
      os << '\n';
      log << "dist: " << name << " raw integral " << d.raw_integral << ", peak " << toadist::peak(d) << '\n';
    }
  });

  PlotScript plot("arrival-time distributions");
  plot.page("toadist.png", "tau", "density (normalized)");
  std::string cmd = "plot ";
  for (std::size_t i = 0; i < made.size(); ++i) {
    if (i) cmd += ", ";
    cmd += "'toadist_" + made[i].first + ".csv' using 1:3 with lines title '" + made[i].first + "'";
  }
  plot.raw(cmd);
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

int run_translate(const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  const auto& ds = cfg.dist;
  const auto& params = cfg.params;
  const auto& spec = cfg.wavepacket;
  spec.validate();
  const auto tau_grid = UniformGrid::span(ds.tau_min, ds.tau_max, count(ds.tau_points));
  const auto p_grid = UniformGrid::symmetric(ds.p_max, count(ds.p_points));
  write_dist(out, "toadist_analytic.csv", toadist::dist_analytic(spec, tau_grid, params, p_grid));

  std::vector<std::array<double, 4>> summary;
  PlotScript plot("time translation of the arrival-time distribution");
  plot.page("translate.png", "tau", "density (normalized)");
  std::string cmd = "plot 'toadist_analytic.csv' using 1:3 with lines title 't=0'";
  for (double t : ds.t_shift) {
    const auto tr = toadist::dist_translated(spec, t, tau_grid, params, p_grid);
    UniformGrid shifted = tau_grid;
    shifted.start += t;
    const auto ref = toadist::dist_analytic(spec, shifted, params, p_grid);
    const double l1 = trapezoid_l1(tr.density, ref.density, tau_grid.step);
    summary.push_back({t, l1, toadist::mean(tr), toadist::peak(tr)});
    const std::string file = "toadist_translated_" + label(t) + ".csv";
    write_dist(out, file, tr);
    cmd += ", '" + file + "' using 1:3 with lines title 't=" + label(t) + "'";
    log << "translate: t=" << t << " L1 vs shifted analytic " << l1 << '\n';
  }
  out.write("translate_summary.csv", [&](std::ostream& os) {
    csv::write_header(os, {"t_shift", "l1_vs_shifted_analytic", "mean", "peak"});
    for (const auto& r : summary) csv::write_row(os, std::span<const double>(r));
  });
  plot.raw(cmd);
  out.write_text("plot.gp", plot.str());
  return exit_ok;
}

// ---- selftest -------------------------------------------------------------

int run_selftest(io::OutputSet& out, std::ostream& log) {
  const auto results = run_acceptance(log);
  out.write("acceptance.csv", [&](std::ostream& os) {
    os << "criterion,result,detail\n";
    for (const auto& r : results) {
      std::string detail = r.detail;
      std::replace(detail.begin(), detail.end(), '"', '\'');
      os << r.id << ',' << (r.pass ? "PASS" : "FAIL") << ",\"" << detail << "\"\n";
    }
  });
  PlotScript plot("acceptance summary (no figure)");
  out.write_text("plot.gp", plot.str());
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  return all ? exit_ok : exit_failed_criteria;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"kernel",  "spectrum", "evolve",    "expectation",
                                              "qfactor", "dist",     "translate", "selftest"};
  return names;
}

bool is_subcommand(std::string_view name) {
  const auto& n = subcommand_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::bundled_presets()) names.push_back(name);
  return names;
}

const std::string& preset_text(std::string_view name) {
  for (const auto& [n, text] : detail::bundled_presets()) {
    if (n == name) return text;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown preset '" + std::string(name) + "' (known: " + known + ")", "preset");
}

nystrom::EigenSystem solve_grid(const config::GridSettings& grid, const physcore::PhysicalParams& params,
                                nystrom::ParityBlock parity, std::optional<std::pair<double, double>> window,
                                bool vectors) {
  const auto q = nystrom::gauss_legendre_grid((grid.nodes - 1) / 2, grid.half_length);
  if (grid.solver == "blocks") {
    nystrom::BlockSolveOptions opts;
    opts.parity = parity;
    opts.vectors = vectors;
    opts.tau_window = window;
    opts.classification_threshold = grid.classification_threshold;
    return nystrom::solve_parity_blocks(q, params, opts);
  }
  const auto hermitian = nystrom::symmetrize(nystrom::build_kernel_matrix(q, params), q.weights);
  auto system = nystrom::classify_modes(nystrom::eigensolve(hermitian, q, params), grid.classification_threshold);
  if (parity != nystrom::ParityBlock::Both) {
    const auto keep = parity == nystrom::ParityBlock::Even ? nystrom::ParityClass::NonNodal
                                                            : nystrom::ParityClass::Nodal;
    std::erase_if(system.modes, [keep](const auto& m) { return m.parity_class != keep; });
  }
  return system;
}

MomentumFunction coarse_mode_momentum(const nystrom::EigenMode& mode, const nystrom::EigenSystem& system,
                                      const config::EvolveSettings& settings) {
  const nystrom::EigenfunctionInterpolant f(mode, system.grid, system.params);
  const double l = system.grid.half_length;
  waves::PositionFunction pos{UniformGrid::span(-l, l, count(settings.interp_points)), {}};
  pos.values.reserve(pos.grid.size());
  for (std::size_t i = 0; i < pos.grid.size(); ++i) pos.values.push_back(f(pos.grid[i]));
  auto g = waves::to_momentum(pos, UniformGrid::symmetric(settings.p_max, count(settings.p_points)), system.params);
  g.converging_delta = settings.delta;
  return g;
}

std::vector<Snapshot> propagate(const MomentumFunction& g, const config::EvolveSettings& settings,
                                const physcore::PhysicalParams& params) {
  const auto t_grid = UniformGrid::span(settings.t_min, settings.t_max, count(settings.t_points));
  const auto q_grid = UniformGrid::span(settings.q_min, settings.q_max, count(settings.q_points));
  std::vector<Snapshot> snaps;
  snaps.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    snaps.push_back({t_grid[i], waves::to_position(g, q_grid, params, t_grid[i])});
  }
  return snaps;
}

int run_scenario(std::string_view name, const RunConfig& cfg, io::OutputSet& out, std::ostream& log) {
  if (name == "kernel") return run_kernel(cfg, out, log);
  if (name == "spectrum") return run_spectrum(cfg, out, log);
  if (name == "evolve") return run_evolve(cfg, out, log);
  if (name == "expectation") return run_expectation(cfg, out, log);
  if (name == "qfactor") return run_qfactor(cfg, out, log);
  if (name == "dist") return run_dist(cfg, out, log);
  if (name == "translate") return run_translate(cfg, out, log);
  if (name == "selftest") return run_selftest(out, log);
  throw ValidationError("unknown subcommand '" + std::string(name) + "'", "subcommand");
}

int run_subcommand(std::string_view name, const RunConfig& cfg, const std::filesystem::path& out_dir,
                   std::ostream& log, std::ostream& err) {
  std::optional<io::OutputSet> out;
  try {
    if (!is_subcommand(name)) throw ValidationError("unknown subcommand '" + std::string(name) + "'", "subcommand");
    out.emplace(out_dir);
    out->write_text("config.ini", config::to_ini(cfg));
    const int rc = run_scenario(name, cfg, *out, log);
    out->commit();
    return rc;
  } catch (const ConvergenceError& e) {
    err << "error (no convergence): " << e.what() << '\n';
    if (out) out->discard();
    return exit_convergence;
  } catch (const std::invalid_argument& e) {  // ValidationError, ParseError
    err << "error: " << e.what() << '\n';
    if (out) out->discard();
    return exit_validation;
  } catch (const std::domain_error& e) {  // DomainError
    err << "error: " << e.what() << '\n';
    if (out) out->discard();
    return exit_validation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: cannot write outputs: " << e.what() << '\n';
    if (out) out->discard();
    return exit_validation;
  } catch (const std::exception& e) {
    // Remaining failures come from numerical back ends (overflow, evaluation
    // errors), so they are reported as non-convergence.
    err << "error (numerical failure): " << e.what() << '\n';
    if (out) out->discard();
    return exit_convergence;
  }
}

}  // namespace reltoa::app
