#include "gy/problem.hpp"

#include <cmath>
#include <sstream>

namespace gy {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Thm1: return "thm1";
    case Variant::Thm2: return "thm2";
    case Variant::Thm4: return "thm4";
    case Variant::Thm5: return "thm5";
    case Variant::Thm6: return "thm6";
    case Variant::Thm8: return "thm8";
  }
  return "unknown";
}

Variant variant_from_name(std::string_view name) {
  if (name == "thm1") return Variant::Thm1;
  if (name == "thm2") return Variant::Thm2;
  if (name == "thm4") return Variant::Thm4;
  if (name == "thm5") return Variant::Thm5;
  if (name == "thm6") return Variant::Thm6;
  if (name == "thm8") return Variant::Thm8;
  throw Error(ErrorKind::UsageError, "unknown variant '" + std::string(name) + "'");
}

bool variant_is_global(Variant v) {
  return v == Variant::Thm5 || v == Variant::Thm6 || v == Variant::Thm8;
}

bool variant_is_signed(Variant v) { return v == Variant::Thm4 || v == Variant::Thm8; }

Problem::Problem(Variant variant, WeightedGraph g, AdmissibleSpace space, OperatorOrder order)
    : variant_(variant), g_(std::move(g)), space_(std::move(space)), order_(order) {}

Problem Problem::thm1(const WeightedGraph& g, const DomainDecomposition& dom, double alpha,
                      double p) {
  if (!(p > 2.0))
    throw Error(ErrorKind::HypothesisViolation, "thm1 needs p > 2, got p = " + std::to_string(p));
  if (dom.interior.empty()) throw Error(ErrorKind::EmptyInterior, "thm1 needs a nonempty interior");
  double l1 = lambda1(g, dom).value;
  if (!(alpha < l1))
    throw Error(ErrorKind::HypothesisViolation,
                "alpha " + std::to_string(alpha) + " >= lambda1 " + std::to_string(l1));
  Problem prob(Variant::Thm1, g, build_admissible_space(g, dom, 1), {1, 2.0});
  prob.alpha_ = alpha;
  prob.growth_p_ = p;
  prob.lambda1_ = l1;
  return prob;
}

Problem Problem::thm2(const WeightedGraph& g, const DomainDecomposition& dom,
                      const Nonlinearity& nl) {
  if (dom.interior.empty()) throw Error(ErrorKind::EmptyInterior, "thm2 needs a nonempty interior");
  if (nl.mode() != NonlinearityMode::OneSided)
    throw Error(ErrorKind::UsageError, "thm2 takes a one-sided nonlinearity");
  Problem prob(Variant::Thm2, g, build_admissible_space(g, dom, 1), {1, nl.p()});
  prob.nl_ = nl;
  return prob;
}

Problem Problem::thm4(const WeightedGraph& g, const DomainDecomposition& dom, int m,
                      const Nonlinearity& nl) {
  if (dom.interior.empty()) throw Error(ErrorKind::EmptyInterior, "thm4 needs a nonempty interior");
  if (nl.mode() != NonlinearityMode::TwoSided)
    throw Error(ErrorKind::UsageError, "thm4 takes a two-sided nonlinearity");
  Problem prob(Variant::Thm4, g, build_admissible_space(g, dom, m),
               OperatorOrder{m, nl.p()});
  prob.nl_ = nl;
  return prob;
}

Problem Problem::thm5(const WeightedGraph& g, const VertexField& h, double p) {
  if (!(p > 2.0))
    throw Error(ErrorKind::HypothesisViolation, "thm5 needs p > 2, got p = " + std::to_string(p));
  Problem prob(Variant::Thm5, g, whole_graph_space(g, h), {1, 2.0});
  prob.growth_p_ = p;
  return prob;
}

Problem Problem::thm6(const WeightedGraph& g, const VertexField& h, const Nonlinearity& nl) {
  if (nl.mode() != NonlinearityMode::OneSided)
    throw Error(ErrorKind::UsageError, "thm6 takes a one-sided nonlinearity");
  Problem prob(Variant::Thm6, g, whole_graph_space(g, h), {1, nl.p()});
  prob.nl_ = nl;
  return prob;
}

Problem Problem::thm8(const WeightedGraph& g, const VertexField& h, int m, const Nonlinearity& nl) {
  if (nl.mode() != NonlinearityMode::TwoSided)
    throw Error(ErrorKind::UsageError, "thm8 takes a two-sided nonlinearity");
  Problem prob(Variant::Thm8, g, whole_graph_space(g, h), OperatorOrder{m, nl.p()});
  prob.nl_ = nl;
  return prob;
}

double Problem::superlinear_exponent() const {
  if (nl_) return nl_->q();
  return growth_p_;
}

namespace {

inline double positive_part(double t) { return t > 0.0 ? t : 0.0; }

}  // namespace

double Problem::energy(const VertexField& u) const {
  space_.require_member(g_, u);
  return energy_coords(space_.coords(g_, u));
}

VertexField Problem::energy_gradient(const VertexField& u) const {
  space_.require_member(g_, u);
  return space_.basis * gradient_coords(space_.coords(g_, u));
}

double Problem::energy_coords(const Eigen::VectorXd& c) const {
  VertexField u = space_.field(c);
  const double p = order_.p;
  double quad = m_dirichlet_energy(g_, space_.mask, u, order_.m, p);

  double value = 0.0;
  switch (variant_) {
    case Variant::Thm1: {
      double mass = 0.0, power = 0.0;
      for (int x : space_.region) {
        mass += g_.mu(x) * u[x] * u[x];
        power += g_.mu(x) * std::pow(positive_part(u[x]), growth_p_);
      }
      value = 0.5 * (quad - alpha_ * mass) - power / growth_p_;
      break;
    }
    case Variant::Thm2:
    case Variant::Thm4: {
      double nonlinear = 0.0;
      const bool truncate = variant_ == Variant::Thm2;
      for (int x : space_.region)
        nonlinear += g_.mu(x) * nl_->F(x, truncate ? positive_part(u[x]) : u[x]);
      value = quad / p - nonlinear;
      break;
    }
    case Variant::Thm5: {
      double hmass = 0.0, power = 0.0;
      for (int x : space_.region) {
        hmass += g_.mu(x) * space_.h[x] * u[x] * u[x];
        power += g_.mu(x) * std::pow(positive_part(u[x]), growth_p_);
      }
      value = 0.5 * (quad + hmass) - power / growth_p_;
      break;
    }
    case Variant::Thm6:
    case Variant::Thm8: {
      double hterm = 0.0, nonlinear = 0.0;
      const bool truncate = variant_ == Variant::Thm6;
      for (int x : space_.region) {
        hterm += g_.mu(x) * space_.h[x] * std::pow(std::abs(u[x]), p);
        nonlinear += g_.mu(x) * nl_->F(x, truncate ? positive_part(u[x]) : u[x]);
      }
      value = (quad + hterm) / p - nonlinear;
      break;
    }
  }
  return value;
}

Eigen::VectorXd Problem::euclidean_gradient(const VertexField& u) const {
  const double p = order_.p;
  Eigen::VectorXd grad = m_dirichlet_energy_grad(g_, space_.mask, u, order_.m, p);

  switch (variant_) {
    case Variant::Thm1: {
      grad *= 0.5;
      for (int x : space_.region)
        grad[x] += g_.mu(x) * (-alpha_ * u[x] - std::pow(positive_part(u[x]), growth_p_ - 1.0));
      break;
    }
    case Variant::Thm2:
    case Variant::Thm4: {
      grad /= p;
      const bool truncate = variant_ == Variant::Thm2;
      for (int x : space_.region)
        grad[x] -= g_.mu(x) * nl_->f(x, truncate ? positive_part(u[x]) : u[x]);
      break;
    }
    case Variant::Thm5: {
      grad *= 0.5;
      for (int x : space_.region)
        grad[x] += g_.mu(x) * (space_.h[x] * u[x] - std::pow(positive_part(u[x]), growth_p_ - 1.0));
      break;
    }
    case Variant::Thm6:
    case Variant::Thm8: {
      grad /= p;
      const bool truncate = variant_ == Variant::Thm6;
      for (int x : space_.region) {
        double signed_power =
            u[x] == 0.0 ? 0.0 : std::pow(std::abs(u[x]), p - 2.0) * u[x];
        grad[x] += g_.mu(x) * (space_.h[x] * signed_power -
                               nl_->f(x, truncate ? positive_part(u[x]) : u[x]));
      }
      break;
    }
  }
  return grad;
}

Eigen::VectorXd Problem::gradient_coords(const Eigen::VectorXd& c) const {
  return space_.basis.transpose() * euclidean_gradient(space_.field(c));
}

double Problem::space_norm(const VertexField& u) const {
  return admissible_norm(g_, space_, u, order_);
}

double Problem::norm_coords(const Eigen::VectorXd& c) const { return space_norm(space_.field(c)); }

Eigen::VectorXd Problem::norm_gradient_coords(const Eigen::VectorXd& c) const {
  VertexField u = space_.field(c);
  const double p = order_.p;
  double total = m_dirichlet_energy(g_, space_.mask, u, order_.m, p);
  Eigen::VectorXd grad = m_dirichlet_energy_grad(g_, space_.mask, u, order_.m, p);
  if (space_.kind == AdmissibleSpace::Kind::WholeGraph) {
    for (int x : space_.region) {
      total += g_.mu(x) * space_.h[x] * std::pow(std::abs(u[x]), p);
      if (u[x] != 0.0)
        grad[x] += p * g_.mu(x) * space_.h[x] * std::pow(std::abs(u[x]), p - 1.0) *
                   (u[x] > 0.0 ? 1.0 : -1.0);
    }
  }
  if (total <= 0.0) return Eigen::VectorXd::Zero(c.size());
  double scale = std::pow(total, 1.0 / p - 1.0) / p;
  return space_.basis.transpose() * (scale * grad);
}

double admissible_norm(const WeightedGraph& g, const AdmissibleSpace& space, const VertexField& u,
                       OperatorOrder order) {
  order.validate();
  space.require_member(g, u);
  double total = m_dirichlet_energy(g, space.mask, u, order.m, order.p);
  if (space.kind == AdmissibleSpace::Kind::WholeGraph) {
    for (int x : space.region)
      total += g.mu(x) * space.h[x] * std::pow(std::abs(u[x]), order.p);
  }
  return std::pow(total, 1.0 / order.p);
}

double full_sobolev_norm(const WeightedGraph& g, std::span<const int> region, const VertexField& u,
                         int m, double p) {
  auto mask = region_mask(g, region);
  double total = 0.0;
  for (int x : region) total += g.mu(x) * std::pow(std::abs(u[x]), p);
  for (int k = 1; k <= m; ++k) total += m_dirichlet_energy(g, mask, u, k, p);
  return std::pow(total, 1.0 / p);
}

ProblemHypotheses check_problem_hypotheses(const Problem& prob, const SpectrumOptions& opts) {
  ProblemHypotheses result;
  std::ostringstream summary;
  const WeightedGraph& g = prob.graph();
  const AdmissibleSpace& space = prob.space();

  switch (prob.variant()) {
    case Variant::Thm1:
      summary << "alpha = " << prob.alpha() << " < lambda1 = " << prob.lambda1_threshold()
              << ", p = " << prob.growth_p() << " > 2";
      result.report.threshold_eig = prob.lambda1_threshold();
      break;
    case Variant::Thm5:
      summary << "h > 0 on V, p = " << prob.growth_p() << " > 2";
      break;
    case Variant::Thm2: {
      EigenResult eig = lambda_p(g, space.dom, prob.order().p, opts);
      result.report = check_hypotheses(*prob.nonlinearity(), eig.value, space.dom.omega);
      result.report.threshold_certified = eig.certified;
      break;
    }
    case Variant::Thm4: {
      EigenResult eig = lambda_mp(g, space.dom, prob.order(), opts);
      result.report = check_hypotheses(*prob.nonlinearity(), eig.value, space.dom.omega);
      result.report.threshold_certified = eig.certified;
      break;
    }
    case Variant::Thm6: {
      EigenResult eig = lambda_p_V(g, space.h, prob.order().p, opts);
      result.report = check_hypotheses(*prob.nonlinearity(), eig.value, space.region);
      result.report.threshold_certified = eig.certified;
      break;
    }
    case Variant::Thm8: {
      EigenResult eig = lambda_mp_V(g, space.h, prob.order(), opts);
      result.report = check_hypotheses(*prob.nonlinearity(), eig.value, space.region);
      result.report.threshold_certified = eig.certified;
      break;
    }
  }
  result.structural_passed = true;  // enforced by the Problem constructors
  if (summary.str().empty() && !result.report.checks.empty()) {
    summary << (result.report.all_passed() ? "sampled hypotheses passed" : "sampled hypotheses FAILED")
            << " against lambda = " << result.report.threshold_eig;
    if (!result.report.threshold_certified) summary << " (uncertified upper bound)";
  }
  result.summary = summary.str();
  return result;
}

}  // namespace gy
