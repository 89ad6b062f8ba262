#include "ale/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ale/png_io.hpp"
#include "ale/seeding.hpp"

namespace ale {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

struct Mode {
  Image texture;          // zero-mean, unit-RMS, single channel
  double gains[3];        // per-channel texture gain
  double brightness = 0;  // mode-specific luminance offset
};

Image make_texture(int side, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> freq(0.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi / 2.0);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  constexpr int kWaves = 5;
  double u[kWaves], v[kWaves], a[kWaves], ph[kWaves];
  for (int k = 0; k < kWaves; ++k) {
    double f = freq(rng);
    double t = angle(rng);
    u[k] = f * std::cos(t);
    v[k] = f * std::sin(t);
    a[k] = amp(rng);
    ph[k] = phase(rng);
  }

  Image tex(side, side, 1);
  double sum = 0.0, sum_sq = 0.0;
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      double val = 0.0;
      for (int k = 0; k < kWaves; ++k)
        val += a[k] * std::sin(kTwoPi * (u[k] * x + v[k] * y) / side + ph[k]);
      tex.at(y, x, 0) = val;
      sum += val;
      sum_sq += val * val;
    }
  double n = static_cast<double>(side) * side;
  double mean = sum / n;
  double rms = std::sqrt(std::max(1e-12, sum_sq / n - mean * mean));
  for (double& p : tex.data) p = (p - mean) / rms;
  return tex;
}

}  // namespace

const Image& DatasetBundle::image_of(SampleId id) const {
  return samples[index_of.at(id)].image;
}

int DatasetBundle::label_of(SampleId id) const { return truth.at(id); }

Oracle DatasetBundle::make_oracle() const {
  Oracle o;
  for (SampleId id : pool_ids) o.set(id, truth.at(id));
  return o;
}

SamplePool DatasetBundle::make_pool() const {
  return SamplePool(pool_ids, num_classes);
}

DatasetBundle generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_samples < 10) throw std::invalid_argument("empty pool");
  if (spec.image_side < 4) throw std::invalid_argument("bad image shape");
  if (spec.modes < 1) throw std::invalid_argument("bad mode count");
  if (!(spec.class_separation >= 0.0) || !(spec.noise_sigma >= 0.0) ||
      !(spec.mode_falloff >= 1.0) || !(spec.mode_offset >= 0.0))
    throw std::invalid_argument("invalid fraction");

  std::mt19937_64 rng(derive_seed(spec.seed, 0x647367656eULL));  // "dsgen"
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni01(0.0, 1.0);

  std::vector<Mode> modes(spec.modes);
  for (int i = 0; i < spec.modes; ++i) {
    Mode& m = modes[i];
    m.texture = make_texture(spec.image_side, rng);
    for (double& g : m.gains)
      g = std::uniform_real_distribution<double>(0.85, 1.15)(rng);
    // Offsets are spread evenly so every outer mode genuinely needs
    // calibration; a random draw could leave them all near zero.
    m.brightness = spec.modes > 1
        ? spec.mode_offset * (2.0 * i / (spec.modes - 1.0) - 1.0)
        : 0.0;
  }

  // Mode frequencies fall off geometrically so one mode is common and the
  // last is rare; diversity-aware sampling has something to find.
  std::vector<double> cum(spec.modes);
  {
    double total = 0.0;
    for (int m = 0; m < spec.modes; ++m) total += std::pow(spec.mode_falloff, -m);
    double acc = 0.0;
    for (int m = 0; m < spec.modes; ++m) {
      acc += std::pow(spec.mode_falloff, -m) / total;
      cum[m] = acc;
    }
    cum.back() = 1.0;
  }

  long long n = spec.n_samples;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) labels[i] = (i < n / 2) ? 0 : 1;
  std::shuffle(labels.begin(), labels.end(), rng);

  double delta = spec.class_separation * 0.2;  // per-class luminance shift

  DatasetBundle bundle;
  bundle.samples.reserve(static_cast<std::size_t>(n));
  int side = spec.image_side;
  for (long long i = 0; i < n; ++i) {
    int label = labels[static_cast<std::size_t>(i)];
    double pick = uni01(rng);
    int m = 0;
    while (m + 1 < spec.modes && pick > cum[m]) ++m;
    const Mode& mode = modes[m];

    double amplitude = std::uniform_real_distribution<double>(0.85, 1.15)(rng);
    // Each class fills a one-sided luminance band with a thin margin at the
    // boundary: samples deep in the band are redundant, samples near the
    // margin pin down the per-mode decision threshold.
    double band = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    double cast[3];
    for (double& c : cast) c = std::max(0.5, 1.0 + 0.01 * gauss(rng));
    double shift = (label == 1 ? delta : -delta) * band;

    Sample s;
    s.id = static_cast<SampleId>(i);
    s.image = Image(side, side, 3);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        double tex = mode.texture.at(y, x, 0);
        for (int c = 0; c < 3; ++c) {
          double val = 0.5 + mode.brightness + shift +
                       0.15 * amplitude * mode.gains[c] * tex +
                       spec.noise_sigma * gauss(rng);
          s.image.at(y, x, c) = clamp01(val * cast[c]);
        }
      }
    bundle.index_of[s.id] = bundle.samples.size();
    bundle.truth[s.id] = label;
    bundle.samples.push_back(std::move(s));
  }

  // Stratified 70/10/20 split, deterministic given the spec seed.
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<SampleId> ids;
    for (long long i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == cls)
        ids.push_back(static_cast<SampleId>(i));
    std::shuffle(ids.begin(), ids.end(), rng);
    auto n_cls = static_cast<double>(ids.size());
    auto n_val = static_cast<std::size_t>(round_half_up(0.1 * n_cls));
    auto n_test = static_cast<std::size_t>(round_half_up(0.2 * n_cls));
    std::size_t k = 0;
    for (; k < ids.size() - n_val - n_test; ++k) bundle.pool_ids.push_back(ids[k]);
    for (std::size_t e = 0; e < n_val; ++e, ++k) bundle.val.emplace_back(ids[k], cls);
    for (std::size_t e = 0; e < n_test; ++e, ++k) bundle.test.emplace_back(ids[k], cls);
  }
  std::sort(bundle.pool_ids.begin(), bundle.pool_ids.end());
  std::sort(bundle.val.begin(), bundle.val.end());
  std::sort(bundle.test.begin(), bundle.test.end());
  return bundle;
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty manifest: " + path);
  // tolerate an optional UTF-8 BOM before the header
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != "id,path,label")
    throw std::runtime_error("bad manifest header: " + path);

  std::vector<ManifestEntry> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1)
      throw std::runtime_error("bad manifest row: " + line);
    ManifestEntry e;
    e.id = std::stoll(line.substr(0, c1));
    e.path = line.substr(c1 + 1, c2 - c1 - 1);
    e.label = std::stoi(line.substr(c2 + 1));
    rows.push_back(std::move(e));
  }
  return rows;
}

DatasetBundle load_manifest_dataset(const std::string& pool_manifest,
                                    const std::string& val_manifest,
                                    const std::string& test_manifest) {
  DatasetBundle bundle;
  auto add = [&](const std::string& manifest, int which) {
    auto base = std::filesystem::path(manifest).parent_path();
    for (const auto& row : read_manifest(manifest)) {
      if (row.label < 0 || row.label > 1)
        throw std::runtime_error("bad manifest label");
      if (bundle.index_of.count(row.id))
        throw std::runtime_error("duplicate sample id");
      Sample s;
      s.id = row.id;
      s.image = read_png((base / row.path).string());
      bundle.index_of[s.id] = bundle.samples.size();
      bundle.truth[s.id] = row.label;
      bundle.samples.push_back(std::move(s));
      if (which == 0) bundle.pool_ids.push_back(row.id);
      if (which == 1) bundle.val.emplace_back(row.id, row.label);
      if (which == 2) bundle.test.emplace_back(row.id, row.label);
    }
  };
  add(pool_manifest, 0);
  add(val_manifest, 1);
  add(test_manifest, 2);
  if (bundle.pool_ids.empty()) throw std::runtime_error("empty pool");
  return bundle;
}

void write_dataset(const DatasetBundle& bundle, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "images");

  auto image_name = [](SampleId id) {
    std::ostringstream name;
    name << "images/img_" << std::setfill('0') << std::setw(6) << id << ".png";
    return name.str();
  };

  for (const auto& s : bundle.samples)
    write_png((fs::path(out_dir) / image_name(s.id)).string(), s.image);

  auto write_manifest = [&](const std::string& name,
                            const std::vector<std::pair<SampleId, int>>& rows) {
    std::ofstream out(fs::path(out_dir) / name);
    if (!out) throw std::runtime_error("cannot write manifest: " + name);
    out << "id,path,label\n";
    for (const auto& [id, label] : rows)
      out << id << "," << image_name(id) << "," << label << "\n";
  };

  std::vector<std::pair<SampleId, int>> pool_rows;
  for (SampleId id : bundle.pool_ids)
    pool_rows.emplace_back(id, bundle.truth.at(id));
  write_manifest("pool.csv", pool_rows);
  write_manifest("val.csv", bundle.val);
  write_manifest("test.csv", bundle.test);
}

}  // namespace ale
