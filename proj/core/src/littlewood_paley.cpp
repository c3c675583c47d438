#include "sqg/littlewood_paley.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sqg {

namespace {

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Smooth monotone step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump(t);
  return a / (a + bump(1.0 - t));
}

}  // namespace

double DyadicFamily::chi(double r) {
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  return 1.0 - smooth_step((r - kInner) / (kOuter - kInner));
}

double DyadicFamily::phi(double r) { return chi(0.5 * r) - chi(r); }

struct DyadicFamily::Tables {
  std::vector<std::vector<Entry>> homogeneous;    // j_min .. j_max
  std::vector<std::vector<Entry>> inhomogeneous;  // 0 .. j_max
};

DyadicFamily::DyadicFamily(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  // Lowest nonzero lattice radius sits in block j_min; 2^{j_max} * 8/3 <= Nyquist.
  j_min_ = static_cast<int>(std::floor(std::log2(grid_.base_wavenumber()) + 1e-12));
  j_max_ = static_cast<int>(std::floor(std::log2(grid_.nyquist() * 3.0 / 8.0) + 1e-12));
  if (j_max_ - j_min_ + 1 < 3) {
    throw std::invalid_argument("dyadic family: grid n=" + std::to_string(grid_.n) +
                                " hosts fewer than 3 dyadic blocks");
  }

  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::weak_ptr<const Tables>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{grid_.n, grid_.period}];
  tables_ = slot.lock();
  if (tables_) return;
  auto tables = std::make_shared<Tables>();
  auto fill = [&](std::vector<std::vector<Entry>>& out, Localization loc) {
    for (int j = first_block(loc); j <= j_max_; ++j) {
      std::vector<Entry> entries;
      for_each_mode(grid_, [&](int ix, int iy, const Wavevector& xi) {
        const double m = block_symbol(j, xi.norm(), loc);
        if (m != 0.0) entries.push_back({static_cast<std::uint32_t>(iy * grid_.n + ix), m});
      });
      out.push_back(std::move(entries));
    }
  };
  fill(tables->homogeneous, Localization::Homogeneous);
  fill(tables->inhomogeneous, Localization::Inhomogeneous);
  tables_ = tables;
  slot = tables_;
}

std::span<const DyadicFamily::Entry> DyadicFamily::block_entries(int j, Localization loc) const {
  (void)block_symbol(j, 0.0, loc);  // range check
  const auto& set = loc == Localization::Homogeneous ? tables_->homogeneous : tables_->inhomogeneous;
  return set[static_cast<std::size_t>(j - first_block(loc))];
}

int DyadicFamily::first_block(Localization loc) const {
  return loc == Localization::Homogeneous ? j_min_ : 0;
}

double DyadicFamily::block_symbol(int j, double r, Localization loc) const {
  if (j < first_block(loc) || j > j_max_) {
    throw std::out_of_range("dyadic block index " + std::to_string(j) + " outside [" +
                            std::to_string(first_block(loc)) + ", " + std::to_string(j_max_) + "]");
  }
  if (r == 0.0) return 0.0;
  const double scale = std::ldexp(1.0, -j);
  const double outer = j == j_max_ ? 1.0 : chi(0.5 * scale * r);
  const bool absorb_bottom = loc == Localization::Homogeneous && j == j_min_;
  const double inner = absorb_bottom ? 0.0 : chi(scale * r);
  return outer - inner;
}

double DyadicFamily::low_symbol(int j, double r) const {
  if (j > j_max_) return 1.0;
  return chi(std::ldexp(r, -j));
}

// ---------------------------------------------------------------------------

SpectralField block(const SpectralField& f, int j, const DyadicFamily& fam, Localization loc) {
  require_same_grid(f.grid(), fam.grid(), "block");
  SpectralField out(f.grid());
  const auto src = f.coeffs();
  auto dst = out.coeffs();
  for (const DyadicFamily::Entry& e : fam.block_entries(j, loc)) dst[e.index] = e.value * src[e.index];
  return out;
}

SpectralField low_pass(const SpectralField& f, int j, const DyadicFamily& fam) {
  require_same_grid(f.grid(), fam.grid(), "low_pass");
  if (j < std::min(fam.j_min(), 0)) {
    throw std::out_of_range("low_pass index " + std::to_string(j) + " below the family range");
  }
  SpectralField out(f.grid());
  for_each_mode(f.grid(), [&](int ix, int iy, const Wavevector& xi) {
    const double m = fam.low_symbol(j, xi.norm());
    if (m != 0.0) out.at(ix, iy) = m * f.at(ix, iy);
  });
  return out;
}

BlockSet decompose(const SpectralField& f, const DyadicFamily& fam, Localization loc) {
  require_same_grid(f.grid(), fam.grid(), "decompose");
  BlockSet set;
  set.first = fam.first_block(loc);
  for (int j = set.first; j <= fam.j_max(); ++j) set.blocks.push_back(block(f, j, fam, loc));
  if (loc == Localization::Inhomogeneous) {
    set.low = low_pass(f, 0, fam);
  } else {
    set.low = SpectralField(f.grid());
    set.low.at(0, 0) = f.mean();
  }
  return set;
}

SpectralField reconstruct(const BlockSet& set) {
  SpectralField out = set.low;
  for (const SpectralField& b : set.blocks) out += b;
  return out;
}

BonyParts bony_decompose(const RealField& u, const RealField& v, const DyadicFamily& fam, DealiasRule rule) {
  require_same_grid(u.grid(), v.grid(), "bony_decompose");
  require_same_grid(u.grid(), fam.grid(), "bony_decompose");
  const GridSpec& grid = u.grid();
  const SpectralField uh = forward_transform(u);
  const SpectralField vh = forward_transform(v);
  const double u_mean = uh.mean().real();
  const double v_mean = vh.mean().real();

  const int first = fam.j_min();
  const int last = fam.j_max();
  std::vector<RealField> du;
  std::vector<RealField> dv;
  for (int j = first; j <= last; ++j) {
    du.push_back(inverse_transform(block(uh, j, fam)));
    dv.push_back(inverse_transform(block(vh, j, fam)));
  }
  auto at = [first](const std::vector<RealField>& b, int j) -> const RealField& {
    return b[static_cast<std::size_t>(j - first)];
  };

  const std::size_t size = grid.size();
  std::vector<double> t_uv(size, 0.0);
  std::vector<double> t_vu(size, 0.0);
  std::vector<double> rem(size, 0.0);

  // Running partial sums sum_{k<=j-2} Delta_k of the mean-free parts.
  std::vector<double> low_u(size, 0.0);
  std::vector<double> low_v(size, 0.0);
  for (int j = first; j <= last; ++j) {
    if (j - 2 >= first) {
      const auto bu = at(du, j - 2).samples();
      const auto bv = at(dv, j - 2).samples();
      for (std::size_t i = 0; i < size; ++i) {
        low_u[i] += bu[i];
        low_v[i] += bv[i];
      }
    }
    const auto uj = at(du, j).samples();
    const auto vj = at(dv, j).samples();
    for (std::size_t i = 0; i < size; ++i) {
      t_uv[i] += low_u[i] * vj[i];
      t_vu[i] += low_v[i] * uj[i];
    }
    for (int k = std::max(first, j - 1); k <= std::min(last, j + 1); ++k) {
      const auto vk = at(dv, k).samples();
      for (std::size_t i = 0; i < size; ++i) rem[i] += uj[i] * vk[i];
    }
  }
  // Mean terms: ubar * v + vbar * (u - ubar).
  const auto us = u.samples();
  const auto vs = v.samples();
  for (std::size_t i = 0; i < size; ++i) rem[i] += u_mean * vs[i] + v_mean * (us[i] - u_mean);

  auto finish = [&](std::vector<double>& s) {
    return inverse_transform(truncate(forward_transform(RealField(grid, std::move(s))), rule));
  };
  return {finish(t_uv), finish(t_vu), finish(rem)};
}

void write_profile_csv(std::ostream& os, double r_max, int samples) {
  if (samples < 2 || !(r_max > 0.0)) throw std::invalid_argument("profile: need samples >= 2 and r_max > 0");
  os << "r,chi,phi\n";
  char buf[96];
  for (int i = 0; i < samples; ++i) {
    const double r = r_max * i / (samples - 1);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r, DyadicFamily::chi(r), DyadicFamily::phi(r));
    os << buf;
  }
}

}  // namespace sqg
