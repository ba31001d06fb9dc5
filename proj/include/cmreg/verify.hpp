#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cmreg/connection.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/periods.hpp"
#include "cmreg/quad/monodromy.hpp"
#include "cmreg/quad/oracles.hpp"
#include "cmreg/regulator.hpp"
#include "cmreg/specialfn.hpp"

// The acceptance suite: thirteen checks over a list of parameter cells, shared by the CLI's
// `verify` command and the acceptance test binary.

namespace cmreg {

struct VerifyConfig {
  /// Lower bound applied to every numeric gate (the CLI's --tol); 0 keeps the defaults.
  double tol_floor = 0.0;
  Precision precision = Precision::extended;
  bool parallel = false;
  /// Test hook: added to the (0,0) entry of every expected Res₀ table, which must make check 4 fail.
  std::optional<Rational> residue_perturbation;

  [[nodiscard]] double gate(double default_tol) const { return std::max(default_tol, tol_floor); }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool applicable = true;
  bool numeric_ok = true;
  double worst = 0.0;  // largest observed deviation (0 for exact checks)
  double gate = 0.0;   // tolerance the deviation is compared against
  double seconds = 0.0;
  double budget = 0.0;
  std::string detail;

  [[nodiscard]] bool within_budget() const { return seconds <= budget; }
  [[nodiscard]] bool pass() const { return numeric_ok && within_budget(); }
};

namespace detail {

/// Runs fn on every cell, concurrently when asked; results keep the cell order.
template <typename Fn>
auto map_cells(const std::vector<FibrationParams>& cells, bool parallel, Fn fn) {
  using Result = decltype(fn(cells.front()));
  std::vector<Result> out;
  out.reserve(cells.size());
  if (!parallel) {
    for (const auto& fp : cells) out.push_back(fn(fp));
    return out;
  }
  std::vector<std::future<Result>> jobs;
  jobs.reserve(cells.size());
  for (const auto& fp : cells) jobs.push_back(std::async(std::launch::async, fn, fp));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Largest deviation with the cell where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;

  void update(double v, const std::string& at) {
    if (v > value || (where.empty() && v >= value)) {
      value = v;
      where = at;
    }
  }
  void merge(const Worst& other) {
    if (!other.where.empty()) update(other.value, other.where);
  }
};

inline std::string at(const FibrationParams& fp, long long n, const std::string& extra = {}) {
  return fp.label() + " n=" + std::to_string(n) + (extra.empty() ? "" : " " + extra);
}

/// Admissible m for the 2-periods: m ∈ I¹(n) with μ > α − β.
inline std::vector<long long> admissible_m(const FibrationParams& fp, long long n) {
  const auto [alpha, beta_, gamma, mu] = frac_params(fp, n);
  std::vector<long long> out;
  for (long long m : index_sets(fp, n).i1)
    if (rat(m, fp.l()) > alpha - beta_) out.push_back(m);
  return out;
}

inline double rel_dev(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

template <typename Body>
CriterionResult timed(int id, std::string title, double budget, Body body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.budget = budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.numeric_ok = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void finish(CriterionResult& r, const Worst& w, double gate) {
  r.worst = w.value;
  r.gate = gate;
  r.numeric_ok = r.numeric_ok && w.value <= gate;
  if (r.detail.empty() && !w.where.empty()) r.detail = "worst at " + w.where;
}

}  // namespace detail

inline CriterionResult check_cm_rank(const std::vector<FibrationParams>& cells) {
  return detail::timed(1, "Hodge dimensions sum to l-1 per n and (l-1)(p-1) in total", 1.0, [&](CriterionResult& r) {
    std::vector<std::string> bad;
    for (const auto& fp : cells) {
      const CmRankReport rep = cm_rank_check(fp);
      if (!rep.pass) bad.push_back(fp.label() + (rep.offending_n ? " n=" + std::to_string(*rep.offending_n) : ""));
    }
    r.numeric_ok = bad.empty();
    r.detail = bad.empty() ? std::to_string(cells.size()) + " cells" : "fails at " + bad.front();
  });
}

inline CriterionResult check_hodge_duality(const std::vector<FibrationParams>& cells) {
  return detail::timed(2, "Hodge position duality p(h)+p(-h)=2, p(h) in {0,1,2}", 1.0, [&](CriterionResult& r) {
    long long count = 0;
    for (const auto& fp : cells)
      for (long long h : char_indices(fp)) {
        ++count;
        const int ph = hodge_position(fp, h);
        const int pm = hodge_position(fp, -h);
        if ((ph + pm != 2 || ph < 0 || ph > 2) && r.numeric_ok) {
          r.numeric_ok = false;
          r.detail = "fails at " + fp.label() + " h=" + std::to_string(h);
        }
      }
    if (r.numeric_ok) r.detail = std::to_string(count) + " characters";
  });
}

inline CriterionResult check_hodge_consistency(const std::vector<FibrationParams>& cells) {
  return detail::timed(3, "epsilon-sum position equals index-set classification", 1.0, [&](CriterionResult& r) {
    long long count = 0;
    for (const auto& fp : cells)
      for (long long h : char_indices(fp)) {
        ++count;
        if (hodge_position(fp, h) != hodge_side(fp, h) && r.numeric_ok) {
          r.numeric_ok = false;
          r.detail = "fails at " + fp.label() + " h=" + std::to_string(h);
        }
      }
    if (r.numeric_ok) r.detail = std::to_string(count) + " characters";
  });
}

inline CriterionResult check_residue_tables(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  return detail::timed(4, "symbolic residues match the closed-form tables; spectra in [0,1)", 5.0, [&](CriterionResult& r) {
    long long count = 0;
    for (const auto& fp : cells)
      for (long long n = 1; n < fp.p(); ++n)
        for (const SingularPoint pt : kSingularPoints) {
          ++count;
          RatMat2 expected = residue_table(fp, n, pt);
          if (pt == SingularPoint::zero && cfg.residue_perturbation) expected[0][0] += *cfg.residue_perturbation;
          const RatMat2 computed = residue_matrix(fp, n, pt);
          const auto spectrum = rational_spectrum(expected);
          const bool in_range = spectrum && (*spectrum)[0] >= 0 && (*spectrum)[1] < 1;
          if ((computed != expected || !in_range) && r.numeric_ok) {
            r.numeric_ok = false;
            r.detail = "mismatch at " + detail::at(fp, n, to_string(pt)) + ": computed " + to_string(computed) +
                       ", table " + to_string(expected);
          }
        }
    if (r.numeric_ok) r.detail = std::to_string(count) + " residue matrices";
  });
}

inline CriterionResult check_contiguous(const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-10);
  return detail::timed(5, "contiguous relations on 50 random points", 5.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(20240601);
    // a, b ∈ (0,2) and c ∈ (1,3) on a 1/24 grid; c stays off the integers.
    std::uniform_int_distribution<long long> step(1, 47);
    std::uniform_real_distribution<double> t_dist(0.05, 0.9);
    detail::Worst w;
    for (int sample = 0; sample < 50; ++sample) {
      const Rational a = rat(step(rng), 24);
      const Rational b = rat(step(rng), 24);
      Rational c = 1 + rat(step(rng), 24);
      if (is_integer(c)) c += rat(1, 24);
      const double t = t_dist(rng);
      for (const Contiguous rel : {Contiguous::R1, Contiguous::R3, Contiguous::R5, Contiguous::R9, Contiguous::R13}) {
        const NumValue res = contiguous_residual(rel, a, b, c, t);
        w.update(res.abs(), to_string(rel) + " (" + to_pretty(a) + ", " + to_pretty(b) + ", " + to_pretty(c) + ", " +
                                std::to_string(t) + ")");
      }
    }
    detail::finish(r, w, gate);
  });
}

inline CriterionResult check_gauss_manin(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-6);
  return detail::timed(6, "period matrix satisfies t dM/dt = M B (p in {2,3})", 30.0, [&](CriterionResult& r) {
    detail::Worst w;
    long long used = 0;
    for (const auto& fp : cells) {
      if (fp.p() != 2 && fp.p() != 3) continue;
      ++used;
      for (long long n = 1; n < fp.p(); ++n) {
        const auto [alpha, beta_, gamma, mu] = frac_params(fp, n);
        const double a = to_double(alpha);
        const double b = to_double(beta_);
        for (const double t : {0.2, 0.5, 0.8}) {
          const double h = 1e-4;
          const PeriodMatrix m = period_matrix(fp, n, t);
          std::array<PeriodMatrix, 4> near{period_matrix(fp, n, t - 2 * h), period_matrix(fp, n, t - h),
                                           period_matrix(fp, n, t + h), period_matrix(fp, n, t + 2 * h)};
          const double coeff[2][2] = {{-(1 - b), -(1 - b)}, {(1 - a) / (1 - t), (1 - a)}};
          double err = 0.0, scale = 0.0;
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
              const Complex der = (near[0].entries[i][j].value - 8.0 * near[1].entries[i][j].value +
                                   8.0 * near[2].entries[i][j].value - near[3].entries[i][j].value) /
                                  (12.0 * h);
              const Complex rhs = m.entries[i][0].value * coeff[0][j] + m.entries[i][1].value * coeff[1][j];
              err = std::max(err, std::abs(t * der - rhs));
              scale = std::max(scale, std::abs(rhs));
            }
          w.update(err / scale, detail::at(fp, n, "t=" + std::to_string(t)));
        }
      }
    }
    r.applicable = used > 0;
    detail::finish(r, w, gate);
    if (!r.applicable) r.detail = "no cell with p in {2,3}";
  });
}

inline CriterionResult check_det_limit(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-5);
  return detail::timed(7, "extrapolated det M_n(t) matches the closed-form limit", 30.0, [&](CriterionResult& r) {
    detail::Worst w;
    for (const auto& fp : cells)
      for (long long n = 1; n < fp.p(); ++n)
        w.update(detail::rel_dev(extrapolated_det_limit(fp, n).value, det_limit(fp, n).value), detail::at(fp, n));
    detail::finish(r, w, gate);
  });
}

inline CriterionResult check_period_oracles(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-7);
  return detail::timed(8, "closed-form 1- and 2-periods agree with quadrature oracles", 300.0, [&](CriterionResult& r) {
    const auto per_cell = detail::map_cells(cells, cfg.parallel, [](const FibrationParams& fp) {
      detail::Worst w;
      for (long long n = 1; n < fp.p(); ++n) {
        for (const Form form : {Form::omega, Form::eta}) {
          const FormExponents e = form_exponents(fp, n, form);
          for (const double t : {0.2, 0.5, 0.8}) {
            w.update(detail::rel_dev(oracle_one_period(fp, n, e, t, Cycle::delta0).value,
                                     one_period_delta0(fp, n, e, t).value),
                     detail::at(fp, n, "delta0 t=" + std::to_string(t)));
            w.update(detail::rel_dev(oracle_one_period(fp, n, e, t, Cycle::delta1).value,
                                     one_period_delta1(fp, n, e, t).value),
                     detail::at(fp, n, "delta1 t=" + std::to_string(t)));
          }
        }
        for (long long m : detail::admissible_m(fp, n)) {
          const std::string where = "m=" + std::to_string(m);
          const TwoPeriods d0 = two_period_delta0(fp, m, n);
          w.update(detail::rel_dev(oracle_two_period(fp, m, n, Thimble::Delta0, Form::omega).value, d0.omega.value),
                   detail::at(fp, n, where + " Delta0 omega"));
          w.update(detail::rel_dev(oracle_two_period(fp, m, n, Thimble::Delta0, Form::eta).value, d0.eta.value),
                   detail::at(fp, n, where + " Delta0 eta"));
          if (m <= 0) continue;  // the Δ₁ iterated integral diverges for μ ≤ 0
          const TwoPeriods d1 = two_period_delta1(fp, m, n);
          w.update(detail::rel_dev(oracle_two_period(fp, m, n, Thimble::Delta1, Form::omega).value, d1.omega.value),
                   detail::at(fp, n, where + " Delta1 omega"));
          w.update(detail::rel_dev(oracle_two_period(fp, m, n, Thimble::Delta1, Form::eta).value, d1.eta.value),
                   detail::at(fp, n, where + " Delta1 eta"));
        }
      }
      return w;
    });
    detail::Worst w;
    for (const auto& c : per_cell) w.merge(c);
    detail::finish(r, w, gate);
  });
}

inline CriterionResult check_gross_deligne(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-9);
  return detail::timed(9, "Gamma-product period equals B-product times the shift rational", 60.0, [&](CriterionResult& r) {
    detail::Worst w;
    for (const auto& fp : cells)
      for (const auto& row : gross_deligne_check(fp, gate))
        w.update(row.deviation, fp.label() + " h=" + std::to_string(row.h));
    detail::finish(r, w, gate);
  });
}

inline CriterionResult check_monodromy(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-6);
  return detail::timed(10, "monodromy: zeta-loops unipotent, 0/infinity spectra match residues", 120.0,
                       [&](CriterionResult& r) {
    const auto sign = calibrate_monodromy_sign();
    if (!sign || *sign != kMonodromySign) {
      r.numeric_ok = false;
      r.detail = "sign calibration does not reproduce the build constant";
      return;
    }
    const auto per_cell = detail::map_cells(cells, cfg.parallel, [](const FibrationParams& fp) {
      detail::Worst w;
      for (long long n = 1; n < fp.p(); ++n)
        for (const auto& row : monodromy_check(fp, n).rows) {
          const double dev =
              row.target.point == SingularPoint::zeta ? row.unipotent_defect : row.spectrum_deviation;
          w.update(dev, detail::at(fp, n, row.target.label()));
        }
      return w;
    });
    detail::Worst w;
    for (const auto& c : per_cell) w.merge(c);
    detail::finish(r, w, gate);
  });
}

inline CriterionResult check_regulator(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  const double series_gate = cfg.gate(1e-8);
  const double oracle_gate = cfg.gate(1e-7);
  return detail::timed(11, "R via series equals the integral route and the Delta0 oracle", 120.0,
                       [&](CriterionResult& r) {
    struct Pair {
      detail::Worst series, oracle;
    };
    const auto per_cell = detail::map_cells(cells, cfg.parallel, [&cfg](const FibrationParams& fp) {
      Pair p;
      for (long long n = 1; n < fp.p(); ++n)
        for (long long m : detail::admissible_m(fp, n)) {
          const NumValue reg = regulator_value(fp, m, n, cfg.precision);
          const std::string where = detail::at(fp, n, "m=" + std::to_string(m));
          p.series.update(detail::rel_dev(regulator_value_integral(fp, m, n).value, reg.value), where);
          p.oracle.update(detail::rel_dev(oracle_two_period(fp, m, n, Thimble::Delta0, Form::omega).value, reg.value),
                          where);
        }
      return p;
    });
    Pair all;
    for (const auto& c : per_cell) {
      all.series.merge(c.series);
      all.oracle.merge(c.oracle);
    }
    // Report the ratio to the gate so that one number summarizes both comparisons.
    r.worst = std::max(all.series.value / series_gate, all.oracle.value / oracle_gate);
    r.gate = 1.0;
    r.numeric_ok = r.worst <= 1.0;
    std::ostringstream os;
    os << "integral route " << all.series.value << " (gate " << series_gate << "), oracle " << all.oracle.value
       << " (gate " << oracle_gate << "); worst/gate shown";
    r.detail = os.str();
  });
}

inline CriterionResult check_nonvanishing(const std::vector<FibrationParams>& cells, const VerifyConfig& cfg) {
  return detail::timed(12, "non-vanishing of the real regulator pairing (p<l, a+b!=p)", 60.0, [&](CriterionResult& r) {
    long long used = 0;
    for (const auto& fp : cells) {
      if (fp.p() >= fp.l() || fp.a() + fp.b() == fp.p()) continue;
      ++used;
      for (const auto& row : nonvanishing_check(fp, cfg.precision))
        if (!row.pass() && r.numeric_ok) {
          r.numeric_ok = false;
          r.detail = "fails at " + detail::at(fp, row.n);
        }
    }
    r.applicable = used > 0;
    if (r.numeric_ok) r.detail = used > 0 ? std::to_string(used) + " cells" : "no cell with p<l and a+b!=p";
  });
}

inline CriterionResult check_legendre(const VerifyConfig& cfg) {
  const double gate = cfg.gate(1e-10);
  return detail::timed(13, "Legendre probe: 12 digits, precision-stable, two paths agree", 10.0, [&](CriterionResult& r) {
    const LegendreReport rep = legendre_probe();
    const double digits_dev = rep.value.err / rep.value.abs() / 1e-12;  // ≤ 1 means 12 digits
    r.worst = std::max({rep.path_difference / gate, rep.precision_difference / gate, digits_dev});
    r.gate = 1.0;
    r.numeric_ok = r.worst <= 1.0 && rep.value.re() > 0.0;
    std::ostringstream os;
    os.precision(16);
    os << "V=" << rep.value.re() << " paths " << rep.path_difference << " precision " << rep.precision_difference
       << " best " << rep.probe.num << "/" << rep.probe.den << " quality " << rep.probe.quality;
    r.detail = os.str();
  });
}

inline std::vector<CriterionResult> run_verification(const std::vector<FibrationParams>& cells,
                                                     const VerifyConfig& cfg = {}) {
  return {check_cm_rank(cells),          check_hodge_duality(cells),          check_hodge_consistency(cells),
          check_residue_tables(cells, cfg), check_contiguous(cfg),            check_gauss_manin(cells, cfg),
          check_det_limit(cells, cfg),   check_period_oracles(cells, cfg),    check_gross_deligne(cells, cfg),
          check_monodromy(cells, cfg),   check_regulator(cells, cfg),         check_nonvanishing(cells, cfg),
          check_legendre(cfg)};
}

}  // namespace cmreg
