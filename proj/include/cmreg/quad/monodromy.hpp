#pragma once

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmreg/connection.hpp"
#include "cmreg/error.hpp"
#include "cmreg/fibration.hpp"
#include "cmreg/numvalue.hpp"

namespace cmreg {

/// Orientation convention linking residue eigenvalues λ to monodromy eigenvalues e^{2πi·s·λ}.
/// Calibrated by calibrate_monodromy_sign() and pinned by a unit test.
inline constexpr int kMonodromySign = +1;

/// Counter-clockwise circle |x − center| = radius in the given chart (the ∞ loop is a circle
/// around s = 0). `samples` is the number of arcs the circle is split into for integration.
struct LoopPath {
  Complex center;
  double radius = 0.25;
  int samples = 8;
  Chart chart = Chart::t;
};

using CMat2 = Eigen::Matrix2cd;

namespace detail {

/// Double-precision copy of a log-form connection matrix for fast complex evaluation.
class NumericConnection {
 public:
  explicit NumericConnection(const ConnMat& a) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const RatFunc& f = a.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        num_[r][c] = to_doubles(f.num());
        den_[r][c] = to_doubles(f.den());
      }
  }

  /// A(x)/x, the coefficient of dx.
  [[nodiscard]] CMat2 at(Complex x) const {
    CMat2 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m(r, c) = horner(num_[r][c], x) / horner(den_[r][c], x);
    return m / x;
  }

 private:
  static std::vector<double> to_doubles(const Poly& p) {
    std::vector<double> out;
    for (const Rational& v : p.coeffs()) out.push_back(to_double(v));
    return out;
  }
  static Complex horner(const std::vector<double>& c, Complex x) {
    Complex acc(0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  std::array<std::array<std::vector<double>, 2>, 2> num_, den_;
};

/// A smooth piece of path x(τ), τ ∈ [0,1], with velocity dx/dτ.
struct Segment {
  std::function<Complex(double)> pos;
  std::function<Complex(double)> vel;
};

inline Segment arc(Complex center, double radius, double from, double to) {
  const Complex i(0.0, 1.0);
  return {[=](double tau) { return center + radius * std::exp(i * (from + (to - from) * tau)); },
          [=](double tau) { return i * (to - from) * radius * std::exp(i * (from + (to - from) * tau)); }};
}

inline Segment line(Complex from, Complex to) {
  return {[=](double tau) { return from + (to - from) * tau; }, [=](double) { return to - from; }};
}

inline Segment reversed(const Segment& s) {
  return {[s](double tau) { return s.pos(1.0 - tau); }, [s](double tau) { return -s.vel(1.0 - tau); }};
}

using State = std::array<double, 8>;

inline State pack(const CMat2& m) {
  State s{};
  for (int k = 0; k < 4; ++k) {
    s[static_cast<std::size_t>(2 * k)] = m(k / 2, k % 2).real();
    s[static_cast<std::size_t>(2 * k + 1)] = m(k / 2, k % 2).imag();
  }
  return s;
}

inline CMat2 unpack(const State& s) {
  CMat2 m;
  for (int k = 0; k < 4; ++k)
    m(k / 2, k % 2) = {s[static_cast<std::size_t>(2 * k)], s[static_cast<std::size_t>(2 * k + 1)]};
  return m;
}

/// Solves dY/dτ = Y·(A(x)/x)·dx/dτ along the segment from Y(0) = start.
inline CMat2 transport(const NumericConnection& conn, const Segment& seg, const CMat2& start, double tol) {
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const State& y, State& dy, double tau) {
    dy = pack(unpack(y) * conn.at(seg.pos(tau)) * seg.vel(tau));
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
  State y = pack(start);
  double tau = 0.0;
  double dt = 1e-3;
  while (tau < 1.0) {
    dt = std::min(dt, 1.0 - tau);
    if (stepper.try_step(rhs, y, tau, dt) == ode::fail) {
      if (dt < 1e-14) throw Error(ErrorKind::nonconvergence, "monodromy: step size underflow near a singularity");
    }
  }
  return unpack(y);
}

/// Basepoint of the chart: t = 1/2, i.e. s = 2.
inline Complex basepoint(Chart chart) { return chart == Chart::t ? 0.5 : 2.0; }

/// Tail from the basepoint to the circle, then the circle, then the tail backwards. The tail runs
/// along |x| = |basepoint| to the direction of the center (or to arg = −π/l around s = 0, which
/// matches a counter-clockwise turn of π/l in t and avoids s = 1), then radially to the circle.
inline std::vector<Segment> loop_segments(const LoopPath& loop, long long l) {
  const Complex base = basepoint(loop.chart);
  const double rb = std::abs(base);
  double phi = 0.0;
  if (std::abs(loop.center) > 0.0) {
    phi = std::arg(loop.center);
    if (phi < 0.0) phi += 2.0 * kPi;
  } else if (loop.chart == Chart::s) {
    phi = -kPi / static_cast<double>(l);
  }
  const Complex dir = std::polar(1.0, phi);
  const Complex toward = rb * dir - loop.center;
  const Complex entry = loop.center + loop.radius * toward / std::abs(toward);
  std::vector<Segment> tail;
  if (phi != 0.0) tail.push_back(arc(0.0, rb, 0.0, phi));
  tail.push_back(line(rb * dir, entry));
  std::vector<Segment> path = tail;
  const double start = std::arg(entry - loop.center);
  const int pieces = std::max(1, loop.samples);
  for (int k = 0; k < pieces; ++k)
    path.push_back(arc(loop.center, loop.radius, start + 2.0 * kPi * k / pieces, start + 2.0 * kPi * (k + 1) / pieces));
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) path.push_back(reversed(*it));
  return path;
}

}  // namespace detail

/// Monodromy of the rank-2 system ∇e = e·A·dx/x once around the loop, in the (ω_n, η_n) frame at
/// the basepoint: the value at the end of the loop of the row solution Y with Y(basepoint) = I.
inline CMat2 monodromy(const FibrationParams& fp, long long n, const LoopPath& loop, double tol = 1e-12) {
  require(loop.radius > 0.0, ErrorKind::invalid_argument, "monodromy: radius must be positive");
  const detail::NumericConnection conn(gm_matrix(fp, n, loop.chart));
  CMat2 y = CMat2::Identity();
  for (const auto& seg : detail::loop_segments(loop, fp.l())) y = detail::transport(conn, seg, y, tol);
  return y;
}

/// A singular point with its index k when it is ζ_l^k.
struct LoopTarget {
  SingularPoint point;
  long long k = 0;

  [[nodiscard]] std::string label() const {
    return point == SingularPoint::zeta ? "zeta^" + std::to_string(k) : to_string(point);
  }
};

/// Loop of radius 1/4 of the distance to the nearest other singular point.
inline LoopPath default_loop(const FibrationParams& fp, const LoopTarget& target) {
  const auto l = static_cast<double>(fp.l());
  switch (target.point) {
    case SingularPoint::zero:
      return {0.0, 0.25, 8, Chart::t};
    case SingularPoint::infinity:
      return {0.0, 0.25, 8, Chart::s};
    case SingularPoint::zeta:
      return {std::polar(1.0, 2.0 * kPi * static_cast<double>(target.k) / l),
              0.25 * std::min(1.0, 2.0 * std::sin(kPi / l)), 8, Chart::t};
  }
  throw Error(ErrorKind::internal, "unknown singular point");
}

/// 0, ζ⁰, …, ζ^{l−1}, ∞.
inline std::vector<LoopTarget> loop_targets(const FibrationParams& fp) {
  std::vector<LoopTarget> out{{SingularPoint::zero, 0}};
  for (long long k = 0; k < fp.l(); ++k) out.push_back({SingularPoint::zeta, k});
  out.push_back({SingularPoint::infinity, 0});
  return out;
}

/// Trace and determinant of diag(e^{2πi·s·λ}) over the residue spectrum.
struct PredictedMonodromy {
  Complex trace;
  Complex det;
};

inline PredictedMonodromy predicted_monodromy(const RatMat2& residue, int sign) {
  const auto spectrum = rational_spectrum(residue);
  require(spectrum.has_value(), ErrorKind::internal, "predicted_monodromy: residue spectrum is not rational");
  const Complex i(0.0, 1.0);
  const Complex e0 = std::exp(2.0 * kPi * i * static_cast<double>(sign) * to_double((*spectrum)[0]));
  const Complex e1 = std::exp(2.0 * kPi * i * static_cast<double>(sign) * to_double((*spectrum)[1]));
  return {e0 + e1, e0 * e1};
}

/// Eigenvalues from the characteristic polynomial; a near-double root is reported as the cluster
/// mean tr/2, which stays accurate when the matrix is a perturbed Jordan block.
inline std::array<Complex, 2> eigenvalues(const CMat2& m) {
  const Complex tr = m.trace();
  const Complex disc = tr * tr - 4.0 * m.determinant();
  if (std::abs(disc) < 1e-8 * std::max(1.0, std::norm(tr))) return {tr / 2.0, tr / 2.0};
  const Complex root = std::sqrt(disc);
  return {(tr - root) / 2.0, (tr + root) / 2.0};
}

/// Distance between the eigenvalue multiset of M and the prediction, via trace and determinant
/// (individual eigenvalues of a Jordan block are ill-conditioned).
inline double spectrum_deviation(const CMat2& m, const PredictedMonodromy& pred) {
  return std::max(std::abs(m.trace() - pred.trace), std::abs(m.determinant() - pred.det));
}

struct MonodromyRow {
  LoopTarget target;
  CMat2 matrix;
  std::array<Complex, 2> eigen;
  double spectrum_deviation = 0.0;  // against e^{2πi·s·Res-spectrum}
  double unipotent_defect = 0.0;    // ‖(M − I)²‖, meaningful for ζ-loops
  double modulus_defect = 0.0;      // max ||eig| − 1|
};

struct MonodromyReport {
  std::vector<MonodromyRow> rows;
  double composite_defect = 0.0;  // ‖M_ζ¹⋯M_ζ^{l−1}·M₀·M_ζ⁰ − M_∞⁻¹‖
};

inline MonodromyReport monodromy_check(const FibrationParams& fp, long long n, int sign = kMonodromySign) {
  MonodromyReport report;
  // With the tails of loop_segments, the counter-clockwise circle |t| = 2 based at t = 1/2 is
  // ζ¹, …, ζ^{l−1}, then 0, then ζ⁰ (path order), and it equals the inverse of the ∞-loop.
  CMat2 composite = CMat2::Identity();
  CMat2 at_zero = CMat2::Identity();
  CMat2 at_zeta0 = CMat2::Identity();
  CMat2 at_infinity = CMat2::Identity();
  for (const LoopTarget& target : loop_targets(fp)) {
    MonodromyRow row{target, monodromy(fp, n, default_loop(fp, target)), {}};
    row.eigen = eigenvalues(row.matrix);
    row.spectrum_deviation =
        spectrum_deviation(row.matrix, predicted_monodromy(residue_table(fp, n, target.point), sign));
    const CMat2 shifted = row.matrix - CMat2::Identity();
    row.unipotent_defect = (shifted * shifted).cwiseAbs().maxCoeff();
    row.modulus_defect = std::max(std::abs(std::abs(row.eigen[0]) - 1.0), std::abs(std::abs(row.eigen[1]) - 1.0));
    if (target.point == SingularPoint::zeta) {
      if (target.k == 0) {
        at_zeta0 = row.matrix;
      } else {
        composite = composite * row.matrix;
      }
    }
    if (target.point == SingularPoint::zero) at_zero = row.matrix;
    if (target.point == SingularPoint::infinity) at_infinity = row.matrix;
    report.rows.push_back(row);
  }
  report.composite_defect = (composite * at_zero * at_zeta0 - at_infinity.inverse()).cwiseAbs().maxCoeff();
  return report;
}

/// The sign s ∈ {±1} for which the 0-loop monodromy of a case with α ≠ β matches e^{2πi·s·Res₀}.
/// Empty if neither or both signs fit.
inline std::optional<int> calibrate_monodromy_sign() {
  const FibrationParams fp(3, 5, 1, 2);
  const long long n = 1;
  const CMat2 m = monodromy(fp, n, default_loop(fp, {SingularPoint::zero, 0}));
  const RatMat2 res = residue_table(fp, n, SingularPoint::zero);
  const bool plus = spectrum_deviation(m, predicted_monodromy(res, +1)) < 1e-6;
  const bool minus = spectrum_deviation(m, predicted_monodromy(res, -1)) < 1e-6;
  if (plus == minus) return std::nullopt;
  return plus ? 1 : -1;
}

}  // namespace cmreg
