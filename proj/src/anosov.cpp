#include "lenspec/anosov.hpp"

#include <functional>
#include <limits>

namespace lenspec {

template <typename MatrixT>
AnosovCertificate anosov_certificate(const MatrixRep<MatrixT>& rep, int radius) {
  if (radius < 2) throw InputError("anosov certificate radius must be >= 2");
  AnosovCertificate cert;
  cert.radius = radius;
  cert.min_gap.assign(static_cast<std::size_t>(radius) + 1, std::numeric_limits<double>::infinity());
  cert.min_gap[0] = 0.0;

  const Alphabet alphabet(rep.rank());
  const auto letters = alphabet.letters();
  using Scaled = typename MatrixRep<MatrixT>::Scaled;

  std::function<void(const Scaled&, Letter, int)> walk = [&](const Scaled& p, Letter last, int depth) {
    for (Letter x : letters) {
      if (x == -last) continue;
      Scaled q = p;
      q *= rep.letter(x);
      const auto [s1, s2] = linalg::top_two_singular_values(q.unit);
      const double gap = s2 > 0.0 ? std::log(s1 / s2) : std::numeric_limits<double>::infinity();
      auto& slot = cert.min_gap[static_cast<std::size_t>(depth + 1)];
      slot = std::min(slot, gap);
      if (depth + 1 < radius) walk(q, x, depth + 1);
    }
  };
  walk(Scaled::identity(rep.dim()), 0, 0);

  const double top = cert.min_gap.back();
  double mu = std::numeric_limits<double>::infinity();
  for (int n = 0; n < radius; ++n)
    mu = std::min(mu, (top - cert.min_gap[static_cast<std::size_t>(n)]) / (radius - n));
  cert.mu = mu;
  double log_c = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= radius; ++n) log_c = std::min(log_c, cert.min_gap[static_cast<std::size_t>(n)] - mu * n);
  cert.log_C = log_c;
  cert.ok = std::isfinite(mu) && mu > 1e-12;
  return cert;
}

template AnosovCertificate anosov_certificate(const MatrixRep<linalg::Matrix2d>&, int);
template AnosovCertificate anosov_certificate(const MatrixRep<linalg::Matrix2cd>&, int);
template AnosovCertificate anosov_certificate(const MatrixRep<linalg::MatrixXd>&, int);

}  // namespace lenspec
