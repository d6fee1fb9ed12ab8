#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include "gy/admissible.hpp"
#include "gy/nonlinearity.hpp"
#include "gy/spectrum.hpp"

namespace gy {

/// The six problem families. Local variants (thm1/thm2/thm4) live on a
/// Dirichlet domain; global ones (thm5/thm6/thm8) on the whole graph with
/// a positive potential. thm1/thm2/thm5/thm6 truncate the nonlinearity at
/// u+ and certify positive solutions; thm4/thm8 are signed.
enum class Variant { Thm1, Thm2, Thm4, Thm5, Thm6, Thm8 };

std::string_view variant_name(Variant v);
Variant variant_from_name(std::string_view name);

bool variant_is_global(Variant v);
bool variant_is_signed(Variant v);

/// A validated instance: graph, admissible space, functional parameters.
/// Structural hypotheses (p > 2 where required, alpha < lambda1, h > 0,
/// q > p) are enforced at construction; the sampled growth hypotheses are
/// checked separately by check_problem_hypotheses.
class Problem {
 public:
  static Problem thm1(const WeightedGraph& g, const DomainDecomposition& dom, double alpha,
                      double p);
  static Problem thm2(const WeightedGraph& g, const DomainDecomposition& dom,
                      const Nonlinearity& nl);
  static Problem thm4(const WeightedGraph& g, const DomainDecomposition& dom, int m,
                      const Nonlinearity& nl);
  static Problem thm5(const WeightedGraph& g, const VertexField& h, double p);
  static Problem thm6(const WeightedGraph& g, const VertexField& h, const Nonlinearity& nl);
  static Problem thm8(const WeightedGraph& g, const VertexField& h, int m, const Nonlinearity& nl);

  Variant variant() const noexcept { return variant_; }
  const WeightedGraph& graph() const noexcept { return g_; }
  const AdmissibleSpace& space() const noexcept { return space_; }
  const OperatorOrder& order() const noexcept { return order_; }
  double alpha() const noexcept { return alpha_; }
  double growth_p() const noexcept { return growth_p_; }
  const std::optional<Nonlinearity>& nonlinearity() const noexcept { return nl_; }
  /// lambda_1(Omega) for thm1, NaN otherwise (other thresholds are sampled
  /// on demand by check_problem_hypotheses).
  double lambda1_threshold() const noexcept { return lambda1_; }

  /// Exponent of the superlinear term (growth p for thm1/thm5, q of the
  /// nonlinearity otherwise); always exceeds order().p.
  double superlinear_exponent() const;

  // Energy functional and its first variation. The public entry points
  // verify membership in the admissible space; the *_coords versions act
  // on basis coordinates and skip the check.
  double energy(const VertexField& u) const;
  VertexField energy_gradient(const VertexField& u) const;  // mu-Riesz representative
  double energy_coords(const Eigen::VectorXd& c) const;
  Eigen::VectorXd gradient_coords(const Eigen::VectorXd& c) const;

  /// The variational norm of the problem's space: the order-m seminorm on
  /// Dirichlet classes, the h-weighted whole-graph norm otherwise.
  double space_norm(const VertexField& u) const;
  double norm_coords(const Eigen::VectorXd& c) const;
  Eigen::VectorXd norm_gradient_coords(const Eigen::VectorXd& c) const;

 private:
  Problem(Variant variant, WeightedGraph g, AdmissibleSpace space, OperatorOrder order);

  Eigen::VectorXd euclidean_gradient(const VertexField& u) const;

  Variant variant_;
  WeightedGraph g_;
  AdmissibleSpace space_;
  OperatorOrder order_;
  double alpha_ = 0.0;
  double growth_p_ = 0.0;
  std::optional<Nonlinearity> nl_;
  double lambda1_ = std::numeric_limits<double>::quiet_NaN();
};

/// ||u||_{W} on the admissible space: Dirichlet kind gives the order-m
/// seminorm (int_Omega |grad^m u|^p)^{1/p}; whole-graph kind adds h|u|^p.
double admissible_norm(const WeightedGraph& g, const AdmissibleSpace& space, const VertexField& u,
                       OperatorOrder order);

/// Full Sobolev norm (sum_{k=0}^m int_region |grad^k u|^p dmu)^{1/p}.
double full_sobolev_norm(const WeightedGraph& g, std::span<const int> region, const VertexField& u,
                         int m, double p);

struct ProblemHypotheses {
  HypothesisReport report;  // sampled checks; empty check list for thm1/thm5
  bool structural_passed = true;
  std::string summary;
};

/// Computes the variant's eigenvalue threshold and runs the sampled
/// hypothesis checks of its nonlinearity. For p != 2 thresholds the report
/// flags the eigenvalue as an uncertified upper bound.
ProblemHypotheses check_problem_hypotheses(const Problem& prob, const SpectrumOptions& opts = {});

}  // namespace gy
