#include "gy/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gy {

namespace {

double simpson(const Nonlinearity::Fn& f, int x, double a, double b) {
  double mid = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(x, a) + 4.0 * f(x, mid) + f(x, b));
}

double adaptive_simpson(const Nonlinearity::Fn& f, int x, double a, double b, double whole,
                        double tol, int depth) {
  double mid = 0.5 * (a + b);
  double left = simpson(f, x, a, mid);
  double right = simpson(f, x, mid, b);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, x, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, x, mid, b, right, 0.5 * tol, depth - 1);
}

double integrate_f(const Nonlinearity::Fn& f, int x, double s) {
  if (s == 0.0) return 0.0;
  double a = 0.0, b = s, sign = 1.0;
  if (s < 0.0) {
    a = s;
    b = 0.0;
    sign = -1.0;
  }
  return sign * adaptive_simpson(f, x, a, b, simpson(f, x, a, b), 1e-10, 40);
}

std::string format_sample(int x, double t, double lhs, double rhs) {
  std::ostringstream out;
  out << "x=" << x << " t=" << t << " lhs=" << lhs << " rhs=" << rhs;
  return out.str();
}

}  // namespace

Nonlinearity::Nonlinearity(std::string name, Fn f, Fn primitive, double p, double q,
                           double threshold, NonlinearityMode mode)
    : name_(std::move(name)),
      f_(std::move(f)),
      primitive_(std::move(primitive)),
      p_(p),
      q_(q),
      threshold_(threshold),
      mode_(mode) {
  if (!(p_ > 1.0)) throw Error(ErrorKind::BadExponent, "nonlinearity needs p > 1");
  if (!(q_ > p_)) throw Error(ErrorKind::BadExponent, "nonlinearity needs q > p");
  if (!(threshold_ >= 0.0)) throw Error(ErrorKind::BadExponent, "threshold must be >= 0");
}

Nonlinearity Nonlinearity::custom(std::string name, Fn f, double p, double q, double threshold,
                                  NonlinearityMode mode) {
  return Nonlinearity(std::move(name), std::move(f), Fn{}, p, q, threshold, mode);
}

double Nonlinearity::F(int x, double s) const {
  if (primitive_) return primitive_(x, s);
  return integrate_f(f_, x, s);
}

Nonlinearity Nonlinearity::power(double p, double q, NonlinearityMode mode) {
  std::ostringstream name;
  name << "power" << q;
  if (mode == NonlinearityMode::OneSided) {
    return Nonlinearity(
        name.str(), [q](int, double t) { return t > 0.0 ? std::pow(t, q - 1.0) : 0.0; },
        [q](int, double s) { return s > 0.0 ? std::pow(s, q) / q : 0.0; }, p, q, 0.0, mode);
  }
  return Nonlinearity(
      name.str(),
      [q](int, double t) { return t == 0.0 ? 0.0 : std::pow(std::abs(t), q - 2.0) * t; },
      [q](int, double s) { return std::pow(std::abs(s), q) / q; }, p, q, 1.0, mode);
}

Nonlinearity Nonlinearity::exp_growth(double p, double q, NonlinearityMode mode) {
  return Nonlinearity(
      "exp_growth", [](int, double t) { return t * std::exp(t * t); },
      [](int, double s) { return 0.5 * (std::exp(s * s) - 1.0); }, p, q, 1.0, mode);
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> ts, std::vector<double> fs, double p,
                                     double q, double threshold, NonlinearityMode mode) {
  if (ts.size() != fs.size() || ts.size() < 2)
    throw Error(ErrorKind::ParseError, "tabulated nonlinearity needs matching t/f samples");
  for (size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1]))
      throw Error(ErrorKind::ParseError, "tabulated t grid must be strictly increasing");
  auto interp = [ts = std::move(ts), fs = std::move(fs)](int, double t) -> double {
    if (t == 0.0) return 0.0;
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    size_t hi = static_cast<size_t>(it - ts.begin());
    if (hi == 0) hi = 1;
    if (hi >= ts.size()) hi = ts.size() - 1;
    size_t lo = hi - 1;
    double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return fs[lo] + w * (fs[hi] - fs[lo]);
  };
  return Nonlinearity("tabulated", interp, Fn{}, p, q, threshold, mode);
}

void Nonlinearity::validate(std::span<const int> vertices) const {
  for (int x : vertices) {
    if (std::abs(f_(x, 0.0)) > 1e-14)
      throw Error(ErrorKind::HypothesisViolation, "f(x,0) != 0 at vertex " + std::to_string(x));
    for (double s : {1e-3, 0.5, 1.0, 2.5, -0.7, -2.0}) {
      if (mode_ == NonlinearityMode::OneSided && s < 0.0) continue;
      double direct = F(x, s);
      double quad = integrate_f(f_, x, s);
      if (!(std::abs(direct - quad) <= 1e-8 * (1.0 + std::abs(quad))))
        throw Error(ErrorKind::HypothesisViolation,
                    "F does not match the quadrature of f at s = " + std::to_string(s));
    }
  }
}

HypothesisReport check_hypotheses(const Nonlinearity& nl, double threshold_eig,
                                  std::span<const int> vertices, const HypothesisGrid& grid) {
  HypothesisReport report;
  report.threshold_eig = threshold_eig;
  const bool one_sided = nl.mode() == NonlinearityMode::OneSided;
  const double p = nl.p();
  const double q = nl.q();

  std::vector<double> ts(static_cast<size_t>(grid.points));
  const double log_lo = std::log10(grid.t_min);
  const double log_hi = std::log10(grid.t_max);
  for (int i = 0; i < grid.points; ++i)
    ts[static_cast<size_t>(i)] = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (grid.points - 1.0));
  const double tail_max =
      std::pow(10.0, log_lo + (log_hi - log_lo) * grid.tail_fraction);

  auto signed_grid = [&](double t) { return one_sided ? std::vector<double>{t} : std::vector<double>{t, -t}; };

  HypothesisCheck continuity{one_sided ? "H1 continuity" : "A1 continuity/f(x,0)=0", true, true, ""};
  HypothesisCheck sign{"H2 nonnegativity on [0,inf)", true, false, ""};
  HypothesisCheck superlinear{one_sided ? "H3 Ambrosetti-Rabinowitz" : "A3 Ambrosetti-Rabinowitz",
                              true, false, ""};
  HypothesisCheck small_t{one_sided ? "H4 limsup f/t^{p-1} < lambda" : "A2 limsup |f|/|t|^{p-1} < lambda",
                          true, true, ""};

  for (int x : vertices) {
    if (std::abs(nl.f(x, 0.0)) > 1e-14) {
      continuity.passed = false;
      continuity.detail = format_sample(x, 0.0, nl.f(x, 0.0), 0.0);
    }
    for (double t0 : ts) {
      for (double t : signed_grid(t0)) {
        double value = nl.f(x, t);
        if (std::isnan(value)) {
          continuity.passed = false;
          if (continuity.detail.empty()) continuity.detail = format_sample(x, t, value, 0.0);
          continue;
        }
        if (one_sided && t > 0.0 && value < 0.0 && sign.passed) {
          sign.passed = false;
          sign.detail = format_sample(x, t, value, 0.0);
        }
        // Ambrosetti-Rabinowitz condition past the threshold.
        double abs_t = std::abs(t);
        if (abs_t >= nl.threshold()) {
          double big_f = nl.F(x, t);
          double sf = t * value;
          if (std::isfinite(big_f) && std::isfinite(sf)) {
            bool ok = one_sided ? (big_f <= sf / q + 1e-12 * (1.0 + std::abs(sf)))
                                : (q * big_f > 0.0 && q * big_f <= sf * (1.0 + 1e-12) + 1e-12);
            if (!ok && superlinear.passed) {
              superlinear.passed = false;
              superlinear.detail = format_sample(x, t, q * big_f, sf);
            }
          }
        }
        // Small-t growth against the eigenvalue threshold.
        if (abs_t <= tail_max) {
          double ratio = std::abs(value) / std::pow(abs_t, p - 1.0);
          if (!(ratio < threshold_eig) && small_t.passed) {
            small_t.passed = false;
            small_t.detail = format_sample(x, t, ratio, threshold_eig);
          }
        }
      }
    }
  }

  report.checks.push_back(continuity);
  if (one_sided) report.checks.push_back(sign);
  report.checks.push_back(superlinear);
  report.checks.push_back(small_t);
  return report;
}

}  // namespace gy
