#include "acsheet/test_function.hpp"

#include <cmath>

#include "acsheet/errors.hpp"

namespace acsheet {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

TestFunction TestFunction::from_sine_series(const GridSpec& g,
                                            const std::vector<double>& amplitudes) {
  TestFunction tf;
  tf.dx_ = g.dx();
  tf.node_.resize(static_cast<std::size_t>(g.N()));
  tf.node_dd_.resize(static_cast<std::size_t>(g.N()));
  tf.mid_.resize(static_cast<std::size_t>(g.N() + 1));
  for (int i = 1; i <= g.N(); ++i) {
    double v = 0.0, vdd = 0.0;
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
      const double w = (n + 1) * kPi / g.L();
      const double s = std::sin(w * g.node(i));
      v += amplitudes[n] * s;
      vdd -= amplitudes[n] * w * w * s;
    }
    tf.node_[static_cast<std::size_t>(i - 1)] = v;
    tf.node_dd_[static_cast<std::size_t>(i - 1)] = vdd;
  }
  for (int j = 0; j <= g.N(); ++j) {
    double v = 0.0;
    for (std::size_t n = 0; n < amplitudes.size(); ++n)
      v += amplitudes[n] * std::sin((n + 1) * kPi * g.cell_mid(j) / g.L());
    tf.mid_[static_cast<std::size_t>(j)] = v;
  }
  return tf;
}

TestFunction TestFunction::from_callables(const GridSpec& g,
                                          const std::function<double(double)>& phi,
                                          const std::function<double(double)>& phi_dd) {
  if (std::abs(phi(0.0)) > 0.0 || std::abs(phi(g.L())) > 0.0)
    throw TestFunctionBoundaryViolation();
  TestFunction tf;
  tf.dx_ = g.dx();
  tf.node_.resize(static_cast<std::size_t>(g.N()));
  tf.node_dd_.resize(static_cast<std::size_t>(g.N()));
  tf.mid_.resize(static_cast<std::size_t>(g.N() + 1));
  for (int i = 1; i <= g.N(); ++i) {
    tf.node_[static_cast<std::size_t>(i - 1)] = phi(g.node(i));
    tf.node_dd_[static_cast<std::size_t>(i - 1)] = phi_dd(g.node(i));
  }
  for (int j = 0; j <= g.N(); ++j) tf.mid_[static_cast<std::size_t>(j)] = phi(g.cell_mid(j));
  return tf;
}

double TestFunction::pair(const Field& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < node_.size(); ++i) s += u[static_cast<int>(i)] * node_[i];
  return dx_ * s;
}

double TestFunction::pair_dd(const Field& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < node_dd_.size(); ++i) s += u[static_cast<int>(i)] * node_dd_[i];
  return dx_ * s;
}

double TestFunction::l2_norm_sq() const {
  double s = 0.0;
  for (double v : node_) s += v * v;
  return dx_ * s;
}

}  // namespace acsheet
