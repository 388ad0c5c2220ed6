#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "acsheet/grid.hpp"

namespace acsheet {

// One realization of space-time white noise, seen through its cell increments
// xi(k,j) ~ N(0, dt*dx). Implementations must be deterministic in (k,j) and
// safe for concurrent reads.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;

  virtual double dt() const noexcept = 0;
  virtual double dx() const noexcept = 0;
  virtual int cells() const noexcept = 0;

  // increment of one space-time cell; k is a signed absolute time index
  virtual double increment(std::int64_t k, int j) const = 0;

  // all cell increments of time slab k, written into out (size cells())
  virtual void fill_row(std::int64_t k, std::span<double> out) const {
    for (int j = 0; j < cells(); ++j) out[static_cast<std::size_t>(j)] = increment(k, j);
  }
};

// Counter-based realization: xi(k,j) is a pure function of (seed, k+offset, j),
// so any two windows over the same (seed, dt, dx) see identical increments no
// matter which was evaluated first. The time shift is an integer offset on k;
// no state is re-seeded at 0 and negative indices are ordinary.
class NoisePath : public NoiseSource {
 public:
  NoisePath(std::uint64_t seed, const GridSpec& grid, std::size_t cache_rows = 256);

  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t offset() const noexcept { return offset_; }

  double dt() const noexcept override { return dt_; }
  double dx() const noexcept override { return dx_; }
  int cells() const noexcept override { return cells_; }

  double increment(std::int64_t k, int j) const override;
  void fill_row(std::int64_t k, std::span<double> out) const override;

  // path with the same underlying sheet viewed tau time units later;
  // shift(shift(p,a),b) == shift(p,a+b) exactly (integer index arithmetic)
  NoisePath shifted(double tau) const;

  // sum of increments over time cells [k0,k1) x space cells [j0,j1)
  double rectangle_sum(std::int64_t k0, std::int64_t k1, int j0, int j1) const;

  friend bool operator==(const NoisePath& a, const NoisePath& b) noexcept {
    return a.seed_ == b.seed_ && a.offset_ == b.offset_ && a.dt_ == b.dt_ &&
           a.dx_ == b.dx_ && a.cells_ == b.cells_;
  }

 private:
  NoisePath(std::uint64_t seed, std::int64_t offset, double dt, double dx, int cells,
            std::size_t cache_rows);

  double raw_cell(std::int64_t k_abs, int j) const noexcept;

  std::uint64_t seed_;
  std::uint64_t seed_hash_;
  std::int64_t offset_ = 0;
  double dt_, dx_, amp_;
  int cells_;

  // LRU cache of whole time slabs keyed by absolute index. Values are pure
  // functions of (seed,k,j); the cache only avoids recomputation, so reads
  // through it are identical regardless of eviction history.
  struct Slab {
    std::vector<double> values;
    std::list<std::int64_t>::iterator lru_it;
  };
  std::size_t cache_rows_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::int64_t, Slab> cache_;
  mutable std::list<std::int64_t> lru_;
};

// Deterministic zero field; used by noise-free reference solves.
class ZeroNoise : public NoiseSource {
 public:
  ZeroNoise(double dt, double dx, int cells) : dt_(dt), dx_(dx), cells_(cells) {}
  explicit ZeroNoise(const GridSpec& g) : ZeroNoise(g.dt(), g.dx(), g.N() + 1) {}

  double dt() const noexcept override { return dt_; }
  double dx() const noexcept override { return dx_; }
  int cells() const noexcept override { return cells_; }
  double increment(std::int64_t, int) const override { return 0.0; }
  void fill_row(std::int64_t, std::span<double> out) const override {
    for (auto& v : out) v = 0.0;
  }

 private:
  double dt_, dx_;
  int cells_;
};

// View of a finer path with time step dt*factor: each coarse increment is the
// sum of `factor` fine increments of the same space cell. Refinement studies
// use this so coarse and fine solves share one underlying sheet.
class CoarsenedNoise : public NoiseSource {
 public:
  CoarsenedNoise(const NoiseSource& fine, int factor)
      : fine_(fine), factor_(factor) {}

  double dt() const noexcept override { return fine_.dt() * factor_; }
  double dx() const noexcept override { return fine_.dx(); }
  int cells() const noexcept override { return fine_.cells(); }

  double increment(std::int64_t k, int j) const override {
    double s = 0.0;
    for (int r = 0; r < factor_; ++r) s += fine_.increment(k * factor_ + r, j);
    return s;
  }

  void fill_row(std::int64_t k, std::span<double> out) const override {
    std::vector<double> buf(static_cast<std::size_t>(cells()));
    for (auto& v : out) v = 0.0;
    for (int r = 0; r < factor_; ++r) {
      fine_.fill_row(k * factor_ + r, buf);
      for (std::size_t j = 0; j < buf.size(); ++j) out[j] += buf[j];
    }
  }

 private:
  const NoiseSource& fine_;
  int factor_;
};

// View of a coarser path with time step dt/factor: the coarse increment is
// split evenly over the fine substeps, so both resolutions integrate the same
// piecewise-constant noise density. Scheme self-convergence studies refine dt
// against this fixed density.
class RefinedNoise : public NoiseSource {
 public:
  RefinedNoise(const NoiseSource& coarse, int factor)
      : coarse_(coarse), factor_(factor) {}

  double dt() const noexcept override { return coarse_.dt() / factor_; }
  double dx() const noexcept override { return coarse_.dx(); }
  int cells() const noexcept override { return coarse_.cells(); }

  double increment(std::int64_t k, int j) const override {
    const std::int64_t kc = k >= 0 ? k / factor_ : -((-k - 1) / factor_ + 1);
    return coarse_.increment(kc, j) / factor_;
  }

 private:
  const NoiseSource& coarse_;
  int factor_;
};

// scaled view (linearity checks)
class ScaledNoise : public NoiseSource {
 public:
  ScaledNoise(const NoiseSource& base, double factor) : base_(base), factor_(factor) {}
  double dt() const noexcept override { return base_.dt(); }
  double dx() const noexcept override { return base_.dx(); }
  int cells() const noexcept override { return base_.cells(); }
  double increment(std::int64_t k, int j) const override {
    return factor_ * base_.increment(k, j);
  }

 private:
  const NoiseSource& base_;
  double factor_;
};

inline NoisePath shift(const NoisePath& path, double tau) { return path.shifted(tau); }

}  // namespace acsheet
