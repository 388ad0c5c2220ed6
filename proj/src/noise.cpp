#include "acsheet/noise.hpp"

#include <cmath>

#include "acsheet/rng.hpp"

namespace acsheet {

namespace {
constexpr std::uint64_t kSheetTag = 0x7368656574a11e5cULL;
}

NoisePath::NoisePath(std::uint64_t seed, const GridSpec& grid, std::size_t cache_rows)
    : NoisePath(seed, 0, grid.dt(), grid.dx(), grid.N() + 1, cache_rows) {}

NoisePath::NoisePath(std::uint64_t seed, std::int64_t offset, double dt, double dx,
                     int cells, std::size_t cache_rows)
    : seed_(seed),
      seed_hash_(hash_combine(kSheetTag, seed)),
      offset_(offset),
      dt_(dt),
      dx_(dx),
      amp_(std::sqrt(dt * dx)),
      cells_(cells),
      cache_rows_(cache_rows) {}

double NoisePath::raw_cell(std::int64_t k_abs, int j) const noexcept {
  const std::uint64_t hk = hash_combine(seed_hash_, static_cast<std::uint64_t>(k_abs));
  return amp_ * gaussian_at(hash_combine(hk, static_cast<std::uint64_t>(j)));
}

double NoisePath::increment(std::int64_t k, int j) const {
  if (j < 0 || j >= cells_) throw CellOutOfRange();
  const std::int64_t k_abs = k + offset_;

  if (cache_rows_ > 0) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k_abs);
    if (it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.lru_it);
      return it->second.values[static_cast<std::size_t>(j)];
    }
  }
  return raw_cell(k_abs, j);
}

void NoisePath::fill_row(std::int64_t k, std::span<double> out) const {
  const std::int64_t k_abs = k + offset_;

  if (cache_rows_ > 0) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k_abs);
    if (it == cache_.end()) {
      Slab slab;
      slab.values.resize(static_cast<std::size_t>(cells_));
      const std::uint64_t hk = hash_combine(seed_hash_, static_cast<std::uint64_t>(k_abs));
      for (int j = 0; j < cells_; ++j)
        slab.values[static_cast<std::size_t>(j)] =
            amp_ * gaussian_at(hash_combine(hk, static_cast<std::uint64_t>(j)));
      lru_.push_front(k_abs);
      slab.lru_it = lru_.begin();
      it = cache_.emplace(k_abs, std::move(slab)).first;
      if (cache_.size() > cache_rows_) {
        cache_.erase(lru_.back());
        lru_.pop_back();
      }
    } else {
      lru_.splice(lru_.begin(), lru_, it->second.lru_it);
    }
    for (int j = 0; j < cells_; ++j)
      out[static_cast<std::size_t>(j)] = it->second.values[static_cast<std::size_t>(j)];
    return;
  }

  const std::uint64_t hk = hash_combine(seed_hash_, static_cast<std::uint64_t>(k_abs));
  for (int j = 0; j < cells_; ++j)
    out[static_cast<std::size_t>(j)] =
        amp_ * gaussian_at(hash_combine(hk, static_cast<std::uint64_t>(j)));
}

NoisePath NoisePath::shifted(double tau) const {
  const double steps = tau / dt_;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
    throw NonIntegralShift();
  return NoisePath(seed_, offset_ + static_cast<std::int64_t>(rounded), dt_, dx_, cells_,
                   cache_rows_);
}

double NoisePath::rectangle_sum(std::int64_t k0, std::int64_t k1, int j0, int j1) const {
  if (j0 < 0 || j1 > cells_ || j0 >= j1) throw CellOutOfRange();
  double s = 0.0;
  for (std::int64_t k = k0; k < k1; ++k)
    for (int j = j0; j < j1; ++j) s += increment(k, j);
  return s;
}

}  // namespace acsheet
