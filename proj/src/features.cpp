#include "ale/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ale/probes.hpp"

namespace ale {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

void scale(std::vector<double>& v, double s) {
  for (double& x : v) x *= s;
}

// w -= (w . u) u for each prior unit vector u
void orthogonalize(std::vector<double>& w,
                   const std::vector<std::vector<double>>& basis) {
  for (const auto& u : basis) {
    double c = dot(w, u);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
  }
}

// Covariance matvec without forming the matrix: (1/(n-1)) X^T (X v),
// where rows of X are the centered inputs.
std::vector<double> cov_matvec(const std::vector<std::vector<double>>& centered,
                               const std::vector<double>& v) {
  std::size_t d = v.size();
  std::vector<double> out(d, 0.0);
  for (const auto& row : centered) {
    double c = dot(row, v);
    for (std::size_t i = 0; i < d; ++i) out[i] += c * row[i];
  }
  double inv = 1.0 / static_cast<double>(centered.size() - 1);
  for (double& x : out) x *= inv;
  return out;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = std::fabs(v[i]);
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  if (v[arg] < 0.0) scale(v, -1.0);
}

}  // namespace

Image gray_world_normalize(const Image& img) {
  if (img.channels != 3) throw std::invalid_argument("degenerate channel");
  if (img.empty()) throw std::invalid_argument("degenerate channel");
  double sums[3] = {0.0, 0.0, 0.0};
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) sums[c] += img.at(y, x, c);

  double n = static_cast<double>(img.pixel_count());
  double means[3];
  for (int c = 0; c < 3; ++c) {
    means[c] = sums[c] / n;
    if (means[c] <= 1e-12) throw std::invalid_argument("degenerate channel");
  }
  double global = (means[0] + means[1] + means[2]) / 3.0;

  Image out(img.height, img.width, 3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = clamp01(img.at(y, x, c) * (global / means[c]));
  return out;
}

Image resize_bilinear(const Image& img, int out_height, int out_width) {
  if (img.empty()) throw std::invalid_argument("empty image");
  if (out_height <= 0 || out_width <= 0)
    throw std::invalid_argument("bad image shape");

  Image out(out_height, out_width, img.channels);
  double sy_scale = static_cast<double>(img.height) / out_height;
  double sx_scale = static_cast<double>(img.width) / out_width;

  for (int oy = 0; oy < out_height; ++oy) {
    double sy = (oy + 0.5) * sy_scale - 0.5;
    int y0 = static_cast<int>(std::floor(sy));
    double fy = sy - y0;
    int y0c = std::clamp(y0, 0, img.height - 1);
    int y1c = std::clamp(y0 + 1, 0, img.height - 1);
    for (int ox = 0; ox < out_width; ++ox) {
      double sx = (ox + 0.5) * sx_scale - 0.5;
      int x0 = static_cast<int>(std::floor(sx));
      double fx = sx - x0;
      int x0c = std::clamp(x0, 0, img.width - 1);
      int x1c = std::clamp(x0 + 1, 0, img.width - 1);
      for (int c = 0; c < img.channels; ++c) {
        double top = (1.0 - fx) * img.at(y0c, x0c, c) + fx * img.at(y0c, x1c, c);
        double bot = (1.0 - fx) * img.at(y1c, x0c, c) + fx * img.at(y1c, x1c, c);
        out.at(oy, ox, c) = (1.0 - fy) * top + fy * bot;
      }
    }
  }
  return out;
}

std::vector<double> to_feature_vector(const Image& img, int side) {
  if (side <= 0) throw std::invalid_argument("bad image shape");
  Image gray(img.height, img.width, 1);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double s = 0.0;
      for (int c = 0; c < img.channels; ++c) s += img.at(y, x, c);
      gray.at(y, x, 0) = s / img.channels;
    }
  Image small = resize_bilinear(gray, side, side);
  return small.data;
}

PCABasis fit_pca(const std::vector<std::vector<double>>& vectors, int d_out,
                 const PCAOptions& options) {
  probes::counters().fit_pca.fetch_add(1, std::memory_order_relaxed);

  std::size_t n = vectors.size();
  if (n < 2) throw std::invalid_argument("need at least two vectors");
  std::size_t d = vectors[0].size();
  if (d == 0) throw std::invalid_argument("empty feature vector");
  for (const auto& v : vectors)
    if (v.size() != d) throw std::invalid_argument("inconsistent feature length");
  if (d_out < 1 || static_cast<std::size_t>(d_out) > d)
    throw std::invalid_argument("bad component count");

  PCABasis basis;
  basis.mean.assign(d, 0.0);
  for (const auto& v : vectors)
    for (std::size_t i = 0; i < d; ++i) basis.mean[i] += v[i];
  for (double& m : basis.mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> centered(n, std::vector<double>(d));
  double total_sq = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i)
      centered[r][i] = vectors[r][i] - basis.mean[i];
    total_sq += dot(centered[r], centered[r]);
  }
  if (total_sq <= 1e-24) throw std::invalid_argument("zero variance");

  for (int k = 0; k < d_out; ++k) {
    // Start from the centered row with the largest residual after removing
    // already-found directions; deterministic and never orthogonal to the
    // dominant remaining eigenvector unless that row is itself degenerate.
    std::vector<double> v;
    {
      double best = -1.0;
      std::vector<double> cand(d);
      for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> w = centered[r];
        orthogonalize(w, basis.components);
        double nn = norm(w);
        if (nn > best) {
          best = nn;
          cand = std::move(w);
        }
      }
      if (best <= 1e-15) {
        // Remaining space carries no variance; complete the basis with a
        // canonical direction orthogonal to everything found so far.
        for (std::size_t i = 0; i < d; ++i) {
          std::vector<double> e(d, 0.0);
          e[i] = 1.0;
          orthogonalize(e, basis.components);
          double nn = norm(e);
          if (nn > 1e-9) {
            scale(e, 1.0 / nn);
            cand = std::move(e);
            best = 1.0;
            break;
          }
        }
        if (best <= 1e-15) throw std::runtime_error("basis completion failed");
        fix_sign(cand);
        basis.components.push_back(std::move(cand));
        basis.explained_variance.push_back(0.0);
        continue;
      }
      scale(cand, 1.0 / best);
      v = std::move(cand);
    }

    double lambda = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
      std::vector<double> w = cov_matvec(centered, v);
      orthogonalize(w, basis.components);
      double wn = norm(w);
      if (wn <= 1e-18) {
        lambda = 0.0;
        break;
      }
      scale(w, 1.0 / wn);
      if (dot(w, v) < 0.0) scale(w, -1.0);
      double delta = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        delta = std::max(delta, std::fabs(w[i] - v[i]));
      v = std::move(w);
      lambda = wn;
      if (delta < options.tolerance) break;
    }

    // Rayleigh quotient on the final direction gives the variance estimate.
    {
      std::vector<double> cv = cov_matvec(centered, v);
      lambda = dot(v, cv);
    }
    orthogonalize(v, basis.components);
    double vn = norm(v);
    if (vn <= 1e-12) throw std::runtime_error("power iteration collapsed");
    scale(v, 1.0 / vn);
    fix_sign(v);
    basis.components.push_back(std::move(v));
    basis.explained_variance.push_back(std::max(0.0, lambda));
  }

  // Power iteration yields variances in descending order up to numerical
  // noise; enforce the ordering contract exactly.
  for (std::size_t i = 1; i < basis.explained_variance.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      if (basis.explained_variance[j] >
          basis.explained_variance[j - 1] + 1e-15) {
        std::swap(basis.explained_variance[j], basis.explained_variance[j - 1]);
        std::swap(basis.components[j], basis.components[j - 1]);
      } else {
        break;
      }
    }
  }
  return basis;
}

std::vector<double> project(const PCABasis& basis, const std::vector<double>& v) {
  probes::counters().pca_project.fetch_add(1, std::memory_order_relaxed);
  if (v.size() != basis.mean.size())
    throw std::invalid_argument("inconsistent feature length");
  std::vector<double> centered(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) centered[i] = v[i] - basis.mean[i];
  std::vector<double> out(basis.components.size());
  for (std::size_t k = 0; k < basis.components.size(); ++k)
    out[k] = dot(basis.components[k], centered);
  return out;
}

}  // namespace ale
