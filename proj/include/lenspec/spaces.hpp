#pragma once

// Concrete actions: weighted Cayley trees, word metrics, the hyperbolic plane
// and 3-space through 2x2 unit-determinant matrices, singular-value
// pseudo-metrics of linear representations, and a Schottky builder.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lenspec/action.hpp"
#include "lenspec/anosov.hpp"
#include "lenspec/matrix_rep.hpp"
#include "lenspec/word_metric.hpp"

namespace lenspec {

inline const double kLog2 = std::log(2.0);

// Weighted reduced length; 0-hyperbolic and (max weight)/2-cobounded.
// Empty weights mean unit weights.
ActionModel tree_model(const Alphabet& alphabet, std::vector<double> weights = {});

// Cayley graph of a weighted, possibly asymmetric generating set. A standard
// symmetric S is recognised and handled as a weighted tree.
ActionModel word_metric_model(const Alphabet& alphabet, const GeneratingSet& S, SearchLimits limits = {},
                              int k_max = 8);

// arccosh(|A|_F^2 / 2) for the unit-determinant image; stable length
// 2 log |lambda_max| (0 for elliptic and parabolic elements).
ActionModel mobius_model(const MobiusRep2& rep, double delta = kLog2);
ActionModel mobius_model(const MobiusRep3& rep, double delta = kLog2);

// psi(x, g x) = log sigma_1(rho(g)); stable length log lambda_1(rho(g)).
ActionModel linear_model(const LinearRep& rep, double delta = kLog2);

struct SchottkyBuilder {
  std::vector<double> stretch{4.0};  // lambda > 1 per generator (one value is broadcast)
  std::vector<double> angles{0.0, 1.2};  // axis rotation per generator
  std::vector<double> twists;  // 3-space only: rotation about the axis
  int dim = 2;
  double delta = kLog2;
  int cert_radius = 6;
};

struct SchottkyModels {
  ActionModel mobius;
  std::optional<ActionModel> linear;  // plane case only
  AnosovCertificate certificate;
  std::vector<std::string> warnings;
  std::vector<linalg::Matrix2cd> generators;
};

SchottkyModels build_schottky(const SchottkyBuilder& b);

// Coverage rates ell_X >= rate * ell_std derived from an Anosov certificate.
double mobius_rate(const AnosovCertificate& cert);
double linear_rate(const AnosovCertificate& cert, Eigen::Index dim);

}  // namespace lenspec
