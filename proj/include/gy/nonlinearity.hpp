#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gy/error.hpp"

namespace gy {

/// One-sided nonlinearities are only ever evaluated at u+ = max(u, 0)
/// (the functionals truncate), so f needs no meaning for t < 0.
/// Two-sided ones enter the signed functionals.
enum class NonlinearityMode { OneSided, TwoSided };

/// Right-hand side f(x, t) with primitive F(x, s) = int_0^s f(x, t) dt and
/// the exponents its superlinearity hypotheses quantify over: p (the
/// problem's gradient exponent), q > p, and the threshold s0 (one-sided)
/// or M (two-sided) past which q F <= s f must hold.
class Nonlinearity {
 public:
  using Fn = std::function<double(int, double)>;

  Nonlinearity(std::string name, Fn f, Fn primitive, double p, double q, double threshold,
               NonlinearityMode mode);

  /// Custom f with the primitive obtained by adaptive Simpson quadrature
  /// (absolute target 1e-10).
  static Nonlinearity custom(std::string name, Fn f, double p, double q, double threshold,
                             NonlinearityMode mode);

  /// f(x,t) = (t+)^{q-1} (one-sided) or |t|^{q-2} t (two-sided).
  static Nonlinearity power(double p, double q, NonlinearityMode mode);

  /// f(x,t) = t e^{t^2}, F(x,s) = (e^{s^2} - 1)/2; the exponential-growth
  /// case, admissible for p < q = p + 1 style hypotheses with s0 = 1.
  static Nonlinearity exp_growth(double p, double q, NonlinearityMode mode);

  /// Piecewise-linear interpolant of sampled values (t_i, f_i) shared by
  /// all vertices; f vanishes at 0 and extends linearly beyond the table.
  static Nonlinearity tabulated(std::vector<double> ts, std::vector<double> fs, double p, double q,
                                double threshold, NonlinearityMode mode);

  double f(int x, double t) const { return f_(x, t); }
  double F(int x, double s) const;

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double threshold() const noexcept { return threshold_; }
  NonlinearityMode mode() const noexcept { return mode_; }
  const std::string& name() const noexcept { return name_; }

  /// Checks p > 1, q > p, threshold >= 0, f(x,0) = 0, and that F matches
  /// quadrature of f on sampled (x, s) to 1e-8.
  void validate(std::span<const int> vertices) const;

 private:
  std::string name_;
  Fn f_;
  Fn primitive_;  // empty: integrate f on demand
  double p_;
  double q_;
  double threshold_;
  NonlinearityMode mode_;
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  bool sampled_evidence = false;  // finite sampling cannot prove a limit
  std::string detail;             // witnessing sample on failure
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  double threshold_eig = 0.0;
  bool threshold_certified = true;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct HypothesisGrid {
  double t_min = 1e-8;
  double t_max = 1e3;
  int points = 200;
  double tail_fraction = 0.25;  // lowest-t slice used for the limsup checks
};

/// Samples the growth/superlinearity hypotheses of the existence theorems
/// on a logarithmic grid, per vertex. One-sided mode checks (H1)-(H4)
/// against threshold_eig = lambda_p; two-sided mode checks (A1)-(A3)
/// against lambda_{mp}. Limit conditions are reported as sampled evidence,
/// never as proof. Report-only: nothing throws.
HypothesisReport check_hypotheses(const Nonlinearity& nl, double threshold_eig,
                                  std::span<const int> vertices, const HypothesisGrid& grid = {});

}  // namespace gy
