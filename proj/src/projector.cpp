#include "acsheet/projector.hpp"

#include <cmath>

#include "acsheet/errors.hpp"

namespace acsheet {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

SineBasis::SineBasis(const GridSpec& g) : n_(g.N()), dx_(g.dx()) {
  ortho_scale_ = std::sqrt(g.L() / 2.0);
  table_.resize(static_cast<std::size_t>(n_) * n_);
  for (int n = 1; n <= n_; ++n)
    for (int i = 1; i <= n_; ++i)
      table_[static_cast<std::size_t>(n - 1) * n_ + (i - 1)] =
          std::sin(n * kPi * i / (n_ + 1));
}

void SineBasis::to_modes(const std::vector<double>& u, std::vector<double>& a) const {
  a.assign(static_cast<std::size_t>(n_), 0.0);
  const double scale = 2.0 / (n_ + 1);
  for (int n = 0; n < n_; ++n) {
    const double* row = &table_[static_cast<std::size_t>(n) * n_];
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += row[i] * u[static_cast<std::size_t>(i)];
    a[static_cast<std::size_t>(n)] = scale * s;
  }
}

void SineBasis::from_modes(const std::vector<double>& a, std::vector<double>& u) const {
  u.assign(static_cast<std::size_t>(n_), 0.0);
  for (int n = 0; n < n_; ++n) {
    const double an = a[static_cast<std::size_t>(n)];
    if (an == 0.0) continue;
    const double* row = &table_[static_cast<std::size_t>(n) * n_];
    for (int i = 0; i < n_; ++i) u[static_cast<std::size_t>(i)] += an * row[i];
  }
}

ProjectorSpec::ProjectorSpec(std::shared_ptr<const SineBasis> basis, int m)
    : basis_(std::move(basis)), m_(m) {
  if (m_ < 0 || m_ > basis_->n()) throw GridMismatch("projector cutoff out of range");
}

ProjectorSpec::ProjectorSpec(const GridSpec& g, int m)
    : ProjectorSpec(std::make_shared<SineBasis>(g), m) {}

Field ProjectorSpec::project(const Field& u) const {
  std::vector<double> a, v;
  basis_->to_modes(u.values(), a);
  for (int n = m_; n < basis_->n(); ++n) a[static_cast<std::size_t>(n)] = 0.0;
  basis_->from_modes(a, v);
  Field out(basis_->n(), u.dx());
  out.values() = std::move(v);
  return out;
}

Field ProjectorSpec::complement(const Field& u) const {
  Field p = project(u);
  Field out = u;
  out -= p;
  return out;
}

ProjectorSpec::Split ProjectorSpec::split_norms(const Field& u) const {
  std::vector<double> a;
  basis_->to_modes(u.values(), a);
  const double c = basis_->dx() * (basis_->n() + 1) / 2.0;  // |u|^2 = c * sum a_n^2
  double sp = 0.0, sq = 0.0;
  for (int n = 0; n < basis_->n(); ++n) {
    const double a2 = a[static_cast<std::size_t>(n)] * a[static_cast<std::size_t>(n)];
    if (n < m_)
      sp += a2;
    else
      sq += a2;
  }
  return {std::sqrt(c * sp), std::sqrt(c * sq)};
}

}  // namespace acsheet
