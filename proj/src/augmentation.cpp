#include "ale/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ale/classifier.hpp"
#include "ale/features.hpp"
#include "ale/probes.hpp"
#include "ale/seeding.hpp"

namespace ale {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sample_clamped(const Image& img, double sy, double sx, int c) {
  int y0 = static_cast<int>(std::floor(sy));
  int x0 = static_cast<int>(std::floor(sx));
  double fy = sy - y0;
  double fx = sx - x0;
  int y0c = std::clamp(y0, 0, img.height - 1);
  int y1c = std::clamp(y0 + 1, 0, img.height - 1);
  int x0c = std::clamp(x0, 0, img.width - 1);
  int x1c = std::clamp(x0 + 1, 0, img.width - 1);
  double top = (1.0 - fx) * img.at(y0c, x0c, c) + fx * img.at(y0c, x1c, c);
  double bot = (1.0 - fx) * img.at(y1c, x0c, c) + fx * img.at(y1c, x1c, c);
  return (1.0 - fy) * top + fy * bot;
}

}  // namespace

Image stitch_2x2(const Image& tl, const Image& tr, const Image& bl,
                 const Image& br) {
  probes::counters().stitch.fetch_add(1, std::memory_order_relaxed);
  if (tl.empty()) throw std::invalid_argument("heterogeneous tile shapes");
  if (!tl.same_shape(tr) || !tl.same_shape(bl) || !tl.same_shape(br))
    throw std::invalid_argument("heterogeneous tile shapes");

  int h = tl.height, w = tl.width, c = tl.channels;
  Image grid(2 * h, 2 * w, c);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        grid.at(y, x, ch) = tl.at(y, x, ch);
        grid.at(y, x + w, ch) = tr.at(y, x, ch);
        grid.at(y + h, x, ch) = bl.at(y, x, ch);
        grid.at(y + h, x + w, ch) = br.at(y, x, ch);
      }
  return resize_bilinear(grid, h, w);
}

Image replicate_4(const Image& img) { return stitch_2x2(img, img, img, img); }

AugmentedSample mixup(const Image& a, int label_a, const Image& b, int label_b,
                      double lambda, int num_classes) {
  probes::counters().mixup.fetch_add(1, std::memory_order_relaxed);
  if (!a.same_shape(b)) throw std::invalid_argument("heterogeneous tile shapes");
  if (!(lambda >= 0.0) || !(lambda <= 1.0))
    throw std::invalid_argument("invalid fraction");
  if (label_a < 0 || label_a >= num_classes || label_b < 0 || label_b >= num_classes)
    throw std::invalid_argument("label out of range");

  AugmentedSample out;
  out.image = Image(a.height, a.width, a.channels);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    out.image.data[i] = lambda * a.data[i] + (1.0 - lambda) * b.data[i];
  out.target.assign(num_classes, 0.0);
  out.target[label_a] += lambda;
  out.target[label_b] += 1.0 - lambda;
  return out;
}

GeometricParams draw_geometric_params(std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, streams::augmentation));
  GeometricParams p;
  p.rotation_deg = std::uniform_real_distribution<double>(-90.0, 90.0)(rng);
  p.shear_deg = std::uniform_real_distribution<double>(-20.0, 20.0)(rng);
  p.scale = std::uniform_real_distribution<double>(0.8, 1.2)(rng);
  p.flip_horizontal = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5;
  p.flip_vertical = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5;
  return p;
}

Image geometric_augment(const Image& img, const GeometricParams& params) {
  probes::counters().geometric.fetch_add(1, std::memory_order_relaxed);
  if (img.empty()) throw std::invalid_argument("empty image");
  if (!(params.scale > 0.0)) throw std::invalid_argument("invalid fraction");

  // Forward map about the center: v' = scale * Shear * Rot * v. Resampling
  // walks output pixels through the inverse.
  double th = params.rotation_deg * kPi / 180.0;
  double sh = std::tan(params.shear_deg * kPi / 180.0);
  double ct = std::cos(th), st = std::sin(th);
  // rows are (x, y); shear displaces x by sh * y
  double m00 = params.scale * (ct + sh * st);   // x' <- x
  double m01 = params.scale * (-st + sh * ct);  // x' <- y
  double m10 = params.scale * st;               // y' <- x
  double m11 = params.scale * ct;               // y' <- y
  double det = m00 * m11 - m01 * m10;
  if (std::fabs(det) < 1e-12) throw std::runtime_error("singular transform");
  double i00 = m11 / det, i01 = -m01 / det, i10 = -m10 / det, i11 = m00 / det;

  double cx = (img.width - 1) / 2.0;
  double cy = (img.height - 1) / 2.0;
  Image warped(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double dx = x - cx, dy = y - cy;
      double sx = i00 * dx + i01 * dy + cx;
      double sy = i10 * dx + i11 * dy + cy;
      for (int c = 0; c < img.channels; ++c)
        warped.at(y, x, c) = sample_clamped(img, sy, sx, c);
    }

  if (!params.flip_horizontal && !params.flip_vertical) return warped;
  Image flipped(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    int yy = params.flip_vertical ? img.height - 1 - y : y;
    for (int x = 0; x < img.width; ++x) {
      int xx = params.flip_horizontal ? img.width - 1 - x : x;
      for (int c = 0; c < img.channels; ++c)
        flipped.at(y, x, c) = warped.at(yy, xx, c);
    }
  }
  return flipped;
}

Image geometric_augment(const Image& img, std::uint64_t seed) {
  return geometric_augment(img, draw_geometric_params(seed));
}

std::vector<AugmentedSample> build_aggregated_set(
    const SamplePool& pool, const std::unordered_map<SampleId, Image>& images,
    std::uint64_t seed) {
  const auto& labeled = pool.labeled();
  if (labeled.empty()) throw std::invalid_argument("empty pool");

  // Same-class companion candidates, in annotation order per class.
  std::vector<std::vector<SampleId>> by_class(pool.num_classes());
  for (const auto& [id, label] : labeled) by_class[label].push_back(id);

  std::mt19937_64 rng(derive_seed(seed, streams::augmentation));
  std::vector<AugmentedSample> out;
  out.reserve(labeled.size());
  for (const auto& [anchor, label] : labeled) {
    const auto& members = by_class[label];
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    SampleId c1 = members[pick(rng)];
    SampleId c2 = members[pick(rng)];
    SampleId c3 = members[pick(rng)];
    AugmentedSample s;
    s.image = stitch_2x2(images.at(anchor), images.at(c1), images.at(c2),
                         images.at(c3));
    s.target = one_hot(label, pool.num_classes());
    s.anchor = anchor;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AugmentedSample> build_mixup_set(
    const SamplePool& pool, const std::unordered_map<SampleId, Image>& images,
    double alpha, std::uint64_t seed) {
  const auto& labeled = pool.labeled();
  if (labeled.empty()) throw std::invalid_argument("empty pool");
  if (!(alpha > 0.0)) throw std::invalid_argument("invalid fraction");

  std::mt19937_64 rng(derive_seed(seed, streams::augmentation));
  std::gamma_distribution<double> gamma_dist(alpha, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, labeled.size() - 1);

  std::vector<AugmentedSample> out;
  out.reserve(labeled.size());
  for (const auto& [anchor, label] : labeled) {
    const auto& [partner, partner_label] = labeled[pick(rng)];
    double g1 = gamma_dist(rng);
    double g2 = gamma_dist(rng);
    double lambda = (g1 + g2 > 0.0) ? g1 / (g1 + g2) : 0.5;
    AugmentedSample s = mixup(images.at(anchor), label, images.at(partner),
                              partner_label, lambda, pool.num_classes());
    s.anchor = anchor;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ale
