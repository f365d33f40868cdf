#pragma once

// A representation of the free group of rank r given by the images of its
// generators, normalised to unit determinant. Images of words are returned
// in log-scaled form so that long products never overflow.

#include <vector>

#include "lenspec/linalg.hpp"
#include "lenspec/words.hpp"

namespace lenspec {

template <typename MatrixT>
class MatrixRep {
 public:
  using Matrix = MatrixT;
  using Scaled = linalg::ScaledMatrix<MatrixT>;

  MatrixRep() = default;
  explicit MatrixRep(const std::vector<MatrixT>& generators) {
    if (generators.empty()) throw InputError("representation needs at least one generator");
    dim_ = generators.front().rows();
    for (const auto& g : generators) {
      if (g.rows() != dim_ || g.cols() != dim_) throw InputError("generator images must be square of equal size");
      if (!g.allFinite()) throw InputError("generator image has non-finite entries");
      MatrixT u = linalg::unit_determinant(g);
      MatrixT inv = u.inverse();
      gens_.push_back(std::move(u));
      invs_.push_back(std::move(inv));
    }
  }

  int rank() const noexcept { return static_cast<int>(gens_.size()); }
  Eigen::Index dim() const noexcept { return dim_; }
  const std::vector<MatrixT>& generators() const noexcept { return gens_; }

  const MatrixT& letter(Letter x) const {
    const auto i = static_cast<std::size_t>((x < 0 ? -x : x) - 1);
    if (x == 0 || i >= gens_.size()) throw InputError("letter outside representation rank");
    return x > 0 ? gens_[i] : invs_[i];
  }

  Scaled image(const Word& w) const {
    Scaled p = Scaled::identity(dim_);
    for (Letter x : w.letters()) p *= letter(x);
    return p;
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<MatrixT> gens_;
  std::vector<MatrixT> invs_;
};

using MobiusRep2 = MatrixRep<linalg::Matrix2d>;
using MobiusRep3 = MatrixRep<linalg::Matrix2cd>;
using LinearRep = MatrixRep<linalg::MatrixXd>;

}  // namespace lenspec
