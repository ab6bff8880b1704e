#include "radial/maps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "radial/distributions.hpp"
#include "radial/io.hpp"
#include "radial/linalg.hpp"
#include "radial/losses.hpp"
#include "radial/metrics.hpp"
#include "radial/parallel.hpp"
#include "radial/rng.hpp"

namespace radial {

MapKind parse_map_kind(const std::string& name) {
  if (name == "vcreg") return MapKind::kVcreg;
  if (name == "radial" || name == "radial_vcreg") return MapKind::kRadialVcreg;
  throw ConfigError("unknown map kind: " + name);
}

std::string to_string(MapKind kind) {
  return kind == MapKind::kVcreg ? "vcreg" : "radial_vcreg";
}

PushforwardMap::PushforwardMap(MapKind kind, std::vector<double> mean,
                               std::vector<double> whitener,
                               std::vector<double> cdf_radii)
    : kind_(kind),
      mean_(std::move(mean)),
      whitener_(std::move(whitener)),
      cdf_radii_(std::move(cdf_radii)),
      chi_(mean_.size()) {
  if (whitener_.size() != mean_.size() * mean_.size()) {
    throw std::invalid_argument("PushforwardMap: whitener shape");
  }
  if (kind_ == MapKind::kRadialVcreg && cdf_radii_.size() < 2) {
    throw std::invalid_argument("PushforwardMap: radial kind needs cdf knots");
  }
  if (!std::is_sorted(cdf_radii_.begin(), cdf_radii_.end())) {
    throw std::invalid_argument("PushforwardMap: cdf knots must be sorted");
  }
}

double PushforwardMap::radius_cdf(double r) const {
  const std::size_t n = cdf_radii_.size();
  const double lo_clamp = 0.5 / static_cast<double>(n);
  const double hi_clamp = 1.0 - lo_clamp;
  // Hazen plotting position of knot k is (k + 0.5) / n.
  if (r <= cdf_radii_.front()) return lo_clamp;
  if (r >= cdf_radii_.back()) return hi_clamp;
  const auto it = std::upper_bound(cdf_radii_.begin(), cdf_radii_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - cdf_radii_.begin());
  const double r0 = cdf_radii_[k - 1];
  const double r1 = cdf_radii_[k];
  const double p0 = (static_cast<double>(k - 1) + 0.5) / static_cast<double>(n);
  const double p1 = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  const double t = r1 > r0 ? (r - r0) / (r1 - r0) : 0.0;
  const double p = p0 + t * (p1 - p0);
  return std::clamp(p, lo_clamp, hi_clamp);
}

PushforwardMap fit_map(const SampleSet& z, MapKind kind) {
  const std::size_t n = z.count;
  const std::size_t d = z.dim;
  if (n < d + 1) {
    throw std::invalid_argument("fit_map: need at least d+1 samples");
  }

  std::vector<double> mean(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    mean[j] = par::sum(n, [&](std::size_t i) { return z(i, j); }) /
              static_cast<double>(n);
  }
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const double c = par::sum(n, [&](std::size_t i) {
                         return (z(i, a) - mean[a]) * (z(i, b) - mean[b]);
                       }) /
                       static_cast<double>(n - 1);
      cov[a * d + b] = c;
      cov[b * d + a] = c;
    }
  }

  std::vector<double> whitener;
  try {
    whitener = inverse_sqrt_spd(cov, d, 1e-8);
  } catch (const std::runtime_error& e) {
    throw RankError(std::string("fit_map: singular covariance: ") + e.what());
  }

  std::vector<double> knots;
  if (kind == MapKind::kRadialVcreg) {
    knots.resize(n);
    par::for_each(n, [&](std::size_t i) {
      double sq = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        double y = 0.0;
        for (std::size_t b = 0; b < d; ++b) {
          y += whitener[a * d + b] * (z(i, b) - mean[b]);
        }
        sq += y * y;
      }
      knots[i] = std::sqrt(sq);
    });
    std::sort(knots.begin(), knots.end());
  }
  return PushforwardMap(kind, std::move(mean), std::move(whitener),
                        std::move(knots));
}

SampleSet apply_map(const PushforwardMap& map, const SampleSet& x) {
  const std::size_t d = map.dim();
  if (x.dim != d) throw std::invalid_argument("apply_map: dimension mismatch");
  SampleSet out(x.count, d);
  const std::vector<double>& w = map.whitener();
  const std::vector<double>& mu = map.mean();
  std::atomic<bool> degenerate{false};
  par::for_each(x.count, [&](std::size_t i) {
    auto row = out.row(i);
    double sq = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      double y = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        y += w[a * d + b] * (x(i, b) - mu[b]);
      }
      row[a] = y;
      sq += y * y;
    }
    if (map.kind() == MapKind::kRadialVcreg) {
      const double r = std::sqrt(sq);
      if (r < 1e-12) {
        degenerate.store(true);
        return;
      }
      const double target = map.chi().quantile(map.radius_cdf(r));
      const double scale = target / r;
      for (std::size_t a = 0; a < d; ++a) row[a] *= scale;
    }
  });
  if (degenerate.load()) {
    throw NearOriginError("apply_map: whitened point at the origin");
  }
  return out;
}

void write_map_csv(const std::string& path, const PushforwardMap& map,
                   const std::vector<std::string>& comment_lines) {
  std::vector<std::vector<std::string>> rows;
  const std::size_t d = map.dim();
  rows.push_back({"kind", "0", "0",
                  map.kind() == MapKind::kVcreg ? "0" : "1"});
  rows.push_back({"dim", "0", "0", std::to_string(d)});
  for (std::size_t i = 0; i < d; ++i) {
    rows.push_back({"mean", std::to_string(i), "0",
                    format_double(map.mean()[i])});
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      rows.push_back({"whitener", std::to_string(i), std::to_string(j),
                      format_double(map.whitener()[i * d + j])});
    }
  }
  for (std::size_t i = 0; i < map.cdf_radii().size(); ++i) {
    rows.push_back({"cdf_knot", std::to_string(i), "0",
                    format_double(map.cdf_radii()[i])});
  }
  write_string_table_csv(path, comment_lines, {"field", "i", "j", "value"},
                         rows);
}

PushforwardMap read_map_csv(const std::string& path) {
  const CsvTable table = read_csv_table(path);
  const std::size_t fcol = table.column_index("field");
  const std::size_t icol = table.column_index("i");
  const std::size_t jcol = table.column_index("j");
  const std::size_t vcol = table.column_index("value");

  MapKind kind = MapKind::kVcreg;
  std::size_t d = 0;
  for (const auto& row : table.rows) {
    if (row[fcol] == "kind") kind = row[vcol] == "1" ? MapKind::kRadialVcreg
                                                     : MapKind::kVcreg;
    if (row[fcol] == "dim") d = std::stoul(row[vcol]);
  }
  if (d == 0) throw IoError("map csv: missing dim row in " + path);
  std::vector<double> mean(d, 0.0), whitener(d * d, 0.0);
  std::vector<std::pair<std::size_t, double>> knots;
  for (const auto& row : table.rows) {
    const std::size_t i = std::stoul(row[icol]);
    if (row[fcol] == "mean") {
      mean.at(i) = std::stod(row[vcol]);
    } else if (row[fcol] == "whitener") {
      whitener.at(i * d + std::stoul(row[jcol])) = std::stod(row[vcol]);
    } else if (row[fcol] == "cdf_knot") {
      knots.emplace_back(i, std::stod(row[vcol]));
    }
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> cdf;
  cdf.reserve(knots.size());
  for (const auto& [i, v] : knots) cdf.push_back(v);
  return PushforwardMap(kind, std::move(mean), std::move(whitener),
                        std::move(cdf));
}

ContainmentReport containment_demo(std::uint64_t seed, std::size_t n) {
  if (n < 10000) {
    throw std::invalid_argument("containment_demo: need n >= 1e4");
  }
  ContainmentReport rep;

  const SampleSet t = sample_student_t_isotropic(n, 2, 5.0, seed);
  {
    const SampleSet pushed = apply_map(fit_map(t, MapKind::kVcreg), t);
    rep.student_t_vcreg = {"student_t->vcreg", ks_radii_chi(pushed),
                           ks_uniform_angles(pushed)};
  }
  {
    const SampleSet pushed = apply_map(fit_map(t, MapKind::kRadialVcreg), t);
    rep.student_t_radial = {"student_t->radial", ks_radii_chi(pushed),
                            ks_uniform_angles(pushed)};
  }
  {
    const SampleSet x = sample_x_distribution(n, mix_seed(seed, 7));
    const SampleSet pushed = apply_map(fit_map(x, MapKind::kRadialVcreg), x);
    rep.x_radial = {"x->radial", ks_radii_chi(pushed),
                    ks_uniform_angles(pushed)};
  }
  return rep;
}

}  // namespace radial
