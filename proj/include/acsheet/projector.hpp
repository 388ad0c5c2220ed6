#pragma once

#include <memory>
#include <vector>

#include "acsheet/field.hpp"
#include "acsheet/grid.hpp"

namespace acsheet {

// Discrete sine basis on the interior nodes: s_n(i) = sin(n pi i / (N+1)),
// n = 1..N. These are the exact eigenvectors of the 3-point Dirichlet
// Laplacian, and the node samples of sin(n pi x / L).
class SineBasis {
 public:
  explicit SineBasis(const GridSpec& g);

  int n() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }

  // coefficients a_n with u_i = sum_n a_n s_n(i)
  void to_modes(const std::vector<double>& u, std::vector<double>& a) const;
  void from_modes(const std::vector<double>& a, std::vector<double>& u) const;

  // L2(0,L)-orthonormal coefficient scale: c_n = a_n * sqrt(L/2)
  double orthonormal_scale() const noexcept { return ortho_scale_; }

  double entry(int n, int i) const noexcept {  // s_n(i), 1-based n and i
    return table_[static_cast<std::size_t>(n - 1) * n_ + (i - 1)];
  }

 private:
  int n_;
  double dx_, ortho_scale_;
  std::vector<double> table_;  // row n-1: s_n(i), i=1..N
};

// Orthogonal projector P onto span{sin(n pi x/L) : n <= m} and Q = I - P.
class ProjectorSpec {
 public:
  ProjectorSpec(std::shared_ptr<const SineBasis> basis, int m);
  ProjectorSpec(const GridSpec& g, int m);

  int m() const noexcept { return m_; }

  Field project(const Field& u) const;     // P u
  Field complement(const Field& u) const;  // Q u

  // L2 norms of the two parts in one pass
  struct Split {
    double p_norm;
    double q_norm;
  };
  Split split_norms(const Field& u) const;

  const SineBasis& basis() const noexcept { return *basis_; }

 private:
  std::shared_ptr<const SineBasis> basis_;
  int m_;
};

}  // namespace acsheet
