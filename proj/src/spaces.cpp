#include "lenspec/spaces.hpp"

#include <memory>

#include "lenspec/errors.hpp"

namespace lenspec {

namespace {

std::vector<double> checked_weights(const Alphabet& alphabet, std::vector<double> weights) {
  if (weights.empty()) weights.assign(static_cast<std::size_t>(alphabet.rank()), 1.0);
  if (weights.size() != static_cast<std::size_t>(alphabet.rank()))
    throw InputError("tree needs one weight per generator: expected " + std::to_string(alphabet.rank()) +
                     ", got " + std::to_string(weights.size()));
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("tree weights must be positive and finite");
  return weights;
}

template <typename MatrixT>
double mobius_stable(const MatrixRep<MatrixT>& rep, const Word& g) {
  const auto p = rep.image(g);
  if (p.log_scale < 1.0) {
    const auto tr = std::complex<double>(p.unit.trace()) * std::exp(p.log_scale);
    if (std::abs(tr.imag()) <= 1e-12 && std::abs(tr.real()) <= 2.0 + 1e-12) return 0.0;
  }
  return std::max(0.0, 2.0 * p.log_spectral_radius());
}

template <typename MatrixT>
ActionModel mobius_impl(const MatrixRep<MatrixT>& rep, double delta, const char* name) {
  if (rep.dim() != 2) throw InputError("Möbius model needs 2x2 generator images");
  if (!(delta >= 0.0)) throw InputError("delta must be nonnegative");
  auto shared = std::make_shared<const MatrixRep<MatrixT>>(rep);
  ActionModel A;
  A.name = name;
  A.rank = rep.rank();
  A.displacement = [shared](const Word& g) {
    return linalg::acosh_exp(shared->image(g).log_frobenius_sq() - kLog2);
  };
  A.stable = [shared](const Word& g) { return LengthBracket::point(mobius_stable(*shared, g)); };
  A.symmetric = true;
  A.delta = delta;
  A.exactness = Exactness::eigenvalue_exact;
  A.rounding = 1e-10;
  return A;
}

template <typename MatrixT>
ActionModel linear_impl(const MatrixRep<MatrixT>& rep, double delta) {
  auto shared = std::make_shared<const MatrixRep<MatrixT>>(rep);
  ActionModel A;
  A.name = "linear";
  A.rank = rep.rank();
  A.displacement = [shared](const Word& g) { return shared->image(g).log_top_singular_value(); };
  A.stable = [shared](const Word& g) {
    return LengthBracket::point(std::max(0.0, shared->image(g).log_spectral_radius()));
  };
  A.symmetric = false;
  A.delta = delta;
  A.exactness = Exactness::eigenvalue_exact;
  A.rounding = 1e-10;
  return A;
}

}  // namespace

ActionModel tree_model(const Alphabet& alphabet, std::vector<double> weights) {
  weights = checked_weights(alphabet, std::move(weights));
  ActionModel A;
  A.name = "tree";
  A.rank = alphabet.rank();
  A.displacement = [weights](const Word& g) { return weighted_length(g, weights); };
  A.stable = [weights](const Word& g) {
    return LengthBracket::point(weighted_length(cyclic_reduce(g).rep, weights));
  };
  A.symmetric = true;
  A.delta = 0.0;
  A.cobound = *std::max_element(weights.begin(), weights.end()) / 2.0;
  A.alpha = 0.0;
  A.std_rate = *std::min_element(weights.begin(), weights.end());
  A.tree_weights = weights;
  A.exactness = Exactness::tree_exact;
  return A;
}

ActionModel word_metric_model(const Alphabet& alphabet, const GeneratingSet& S, SearchLimits limits,
                              int k_max) {
  if (S.is_standard(alphabet.rank())) {
    ActionModel A = tree_model(alphabet, S.standard_weights(alphabet.rank()));
    A.name = "word_metric";
    return A;
  }
  auto metric = std::make_shared<const WordMetric>(alphabet, S, limits);
  ActionModel A;
  A.name = "word_metric";
  A.rank = alphabet.rank();
  A.displacement = [metric](const Word& g) { return metric->length(g); };
  A.stable = [metric, k_max](const Word& g) { return metric->stable_length(g, k_max); };
  A.symmetric = S.symmetric();
  A.delta = 0.0;
  double wmax = 0.0;
  for (const auto& s : S.elements()) wmax = std::max(wmax, s.weight);
  A.cobound = wmax / 2.0;
  A.alpha = 0.0;
  A.std_rate = 1.0 / metric->standard_lipschitz();
  A.exactness = Exactness::bracket_only;
  return A;
}

ActionModel mobius_model(const MobiusRep2& rep, double delta) { return mobius_impl(rep, delta, "H2"); }
ActionModel mobius_model(const MobiusRep3& rep, double delta) { return mobius_impl(rep, delta, "H3"); }

ActionModel linear_model(const LinearRep& rep, double delta) {
  if (rep.dim() == 2) {
    std::vector<linalg::Matrix2d> fixed;
    for (const auto& g : rep.generators()) fixed.push_back(g);
    return linear_impl(MatrixRep<linalg::Matrix2d>(fixed), delta);
  }
  return linear_impl(rep, delta);
}

double mobius_rate(const AnosovCertificate& cert) { return cert.ok ? cert.mu : 0.0; }

double linear_rate(const AnosovCertificate& cert, Eigen::Index dim) {
  // log sigma_1 >= (m-1)/m log(sigma_1/sigma_2) when the determinant is one.
  const double m = static_cast<double>(dim);
  return cert.ok ? cert.mu * (m - 1.0) / m : 0.0;
}

SchottkyModels build_schottky(const SchottkyBuilder& b) {
  using C = std::complex<double>;
  if (b.dim != 2 && b.dim != 3) throw InputError("Schottky dimension must be 2 or 3");
  const std::size_t rank = b.angles.size();
  if (rank == 0) throw InputError("Schottky builder needs at least one angle");
  if (b.stretch.size() != 1 && b.stretch.size() != rank)
    throw InputError("stretch must have one entry or one per generator");
  if (!b.twists.empty() && b.twists.size() != rank) throw InputError("twists must have one entry per generator");
  if (b.dim == 2 && !b.twists.empty()) throw InputError("twists are only meaningful in 3-space");

  std::vector<linalg::Matrix2cd> gens;
  for (std::size_t i = 0; i < rank; ++i) {
    const double lambda = b.stretch.size() == 1 ? b.stretch[0] : b.stretch[i];
    if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InputError("Schottky stretch must be > 1");
    const double th = b.angles[i];
    const double tw = b.twists.empty() ? 0.0 : b.twists[i];
    linalg::Matrix2cd R, D;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    D << std::polar(lambda, tw), 0.0, 0.0, std::polar(1.0 / lambda, -tw);
    gens.push_back(R * D * R.inverse());
  }

  SchottkyModels out;
  out.generators = gens;
  if (b.dim == 2) {
    std::vector<linalg::Matrix2d> real;
    std::vector<linalg::MatrixXd> dyn;
    for (const auto& g : gens) {
      real.push_back(g.real());
      dyn.push_back(g.real());
    }
    const MobiusRep2 rep(real);
    out.certificate = anosov_certificate(rep, b.cert_radius);
    out.mobius = mobius_model(rep, b.delta);
    out.linear = linear_model(LinearRep(dyn), b.delta);
  } else {
    const MobiusRep3 rep(gens);
    out.certificate = anosov_certificate(rep, b.cert_radius);
    out.mobius = mobius_model(rep, b.delta);
  }
  if (rank >= 2) {
    const linalg::Matrix2cd& A = gens[0];
    const linalg::Matrix2cd& B = gens[1];
    const C tr = (A * B * A.inverse() * B.inverse()).trace();
    if (std::abs(tr - C(2.0)) < 1e-9)
      out.warnings.push_back("generators 1 and 2 share a fixed point (commutator trace 2); group is not Schottky");
  }
  if (!out.certificate.ok) {
    out.warnings.push_back("Anosov certificate failed at radius " + std::to_string(b.cert_radius) +
                           " (mu = " + std::to_string(out.certificate.mu) + ")");
  } else {
    out.mobius.std_rate = mobius_rate(out.certificate);
    out.mobius.std_rate_certified = false;
    if (out.linear) {
      out.linear->std_rate = linear_rate(out.certificate, 2);
      out.linear->std_rate_certified = false;
    }
  }
  out.mobius.name = b.dim == 2 ? "H2-schottky" : "H3-schottky";
  if (out.linear) out.linear->name = "linear-schottky";
  return out;
}

}  // namespace lenspec
