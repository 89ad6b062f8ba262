#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ale/augmentation.hpp"
#include "ale/classifier.hpp"
#include "ale/features.hpp"
#include "ale/pool.hpp"
#include "ale/probes.hpp"

using namespace ale;

namespace {

Image random_image(int h, int w, int c, std::mt19937_64& rng) {
  Image img(h, w, c);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (double& p : img.data) p = uni(rng);
  return img;
}

Image constant_image(int h, int w, int c, double v) {
  Image img(h, w, c);
  for (double& p : img.data) p = v;
  return img;
}

}  // namespace

TEST_CASE("stitch places each tile in its quadrant before the resize") {
  // Feeding four constant tiles makes the quadrants recoverable even after
  // the downscale: each output quadrant must be its tile's constant.
  Image tl = constant_image(8, 8, 1, 0.1);
  Image tr = constant_image(8, 8, 1, 0.4);
  Image bl = constant_image(8, 8, 1, 0.7);
  Image br = constant_image(8, 8, 1, 1.0);

  Image out = stitch_2x2(tl, tr, bl, br);
  REQUIRE(out.height == 8);
  REQUIRE(out.width == 8);

  // Interior pixels of each quadrant avoid the cross-boundary blend.
  CHECK(out.at(1, 1, 0) == doctest::Approx(0.1));
  CHECK(out.at(1, 6, 0) == doctest::Approx(0.4));
  CHECK(out.at(6, 1, 0) == doctest::Approx(0.7));
  CHECK(out.at(6, 6, 0) == doctest::Approx(1.0));
}

TEST_CASE("stitch equals manual tile-then-resize bit for bit") {
  std::mt19937_64 rng(21);
  Image a = random_image(6, 5, 3, rng);
  Image b = random_image(6, 5, 3, rng);
  Image c = random_image(6, 5, 3, rng);
  Image d = random_image(6, 5, 3, rng);

  // Pre-resize composite built by hand: quadrants must be bit-exact copies.
  Image big(12, 10, 3);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 5; ++x)
      for (int ch = 0; ch < 3; ++ch) {
        big.at(y, x, ch) = a.at(y, x, ch);
        big.at(y, x + 5, ch) = b.at(y, x, ch);
        big.at(y + 6, x, ch) = c.at(y, x, ch);
        big.at(y + 6, x + 5, ch) = d.at(y, x, ch);
      }
  Image expect = resize_bilinear(big, 6, 5);

  Image got = stitch_2x2(a, b, c, d);
  REQUIRE(got.same_shape(expect));
  for (std::size_t i = 0; i < got.data.size(); ++i)
    CHECK(got.data[i] == expect.data[i]);
}

TEST_CASE("stitch rejects heterogeneous tile shapes") {
  Image ok = constant_image(4, 4, 1, 0.5);
  Image tall = constant_image(5, 4, 1, 0.5);
  Image wide = constant_image(4, 5, 1, 0.5);
  Image rgb = constant_image(4, 4, 3, 0.5);
  CHECK_THROWS_WITH_AS(stitch_2x2(ok, tall, ok, ok),
                       "heterogeneous tile shapes", std::invalid_argument);
  CHECK_THROWS_AS(stitch_2x2(ok, ok, wide, ok), std::invalid_argument);
  CHECK_THROWS_AS(stitch_2x2(ok, ok, ok, rgb), std::invalid_argument);
}

TEST_CASE("replicate_4 is the stitch of four copies") {
  std::mt19937_64 rng(22);
  Image img = random_image(7, 7, 3, rng);
  Image a = replicate_4(img);
  Image b = stitch_2x2(img, img, img, img);
  REQUIRE(a.same_shape(b));
  for (std::size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
}

TEST_CASE("mixup blends pixels and targets with the same lambda") {
  Image a = constant_image(3, 3, 1, 1.0);
  Image b = constant_image(3, 3, 1, 0.0);
  AugmentedSample s = mixup(a, 0, b, 1, 0.3, 2);
  for (double p : s.image.data) CHECK(p == doctest::Approx(0.3));
  REQUIRE(s.target.size() == 2);
  CHECK(s.target[0] == doctest::Approx(0.3));
  CHECK(s.target[1] == doctest::Approx(0.7));

  CHECK_THROWS_AS(mixup(a, 0, b, 1, -0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(mixup(a, 0, b, 1, 1.1, 2), std::invalid_argument);
  Image odd = constant_image(2, 3, 1, 0.5);
  CHECK_THROWS_AS(mixup(a, 0, odd, 1, 0.5, 2), std::invalid_argument);
}

TEST_CASE("identity geometric params reproduce the input exactly") {
  std::mt19937_64 rng(23);
  Image img = random_image(9, 9, 3, rng);
  GeometricParams id;  // rotation 0, shear 0, scale 1, no flips
  Image out = geometric_augment(img, id);
  REQUIRE(out.same_shape(img));
  for (std::size_t i = 0; i < img.data.size(); ++i)
    CHECK(out.data[i] == doctest::Approx(img.data[i]));
}

TEST_CASE("flips are exact pixel permutations") {
  std::mt19937_64 rng(24);
  Image img = random_image(5, 6, 2, rng);

  GeometricParams h;
  h.flip_horizontal = true;
  Image fh = geometric_augment(img, h);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x)
      for (int c = 0; c < 2; ++c)
        CHECK(fh.at(y, x, c) == img.at(y, 5 - x, c));

  GeometricParams v;
  v.flip_vertical = true;
  Image fv = geometric_augment(img, v);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x)
      for (int c = 0; c < 2; ++c)
        CHECK(fv.at(y, x, c) == img.at(4 - y, x, c));
}

TEST_CASE("a 90-degree rotation of a centered cross maps onto itself") {
  // The cross is symmetric under quarter turns; comparing against itself
  // checks the affine path without trusting any particular convention.
  Image img(9, 9, 1);
  for (int i = 0; i < 9; ++i) {
    img.at(4, i, 0) = 1.0;
    img.at(i, 4, 0) = 1.0;
  }
  GeometricParams p;
  p.rotation_deg = 90.0;
  Image out = geometric_augment(img, p);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x)
      CHECK(out.at(y, x, 0) == doctest::Approx(img.at(y, x, 0)).epsilon(1e-9));
}

TEST_CASE("draw_geometric_params is seeded and in range") {
  GeometricParams a = draw_geometric_params(5);
  GeometricParams b = draw_geometric_params(5);
  CHECK(a.rotation_deg == b.rotation_deg);
  CHECK(a.shear_deg == b.shear_deg);
  CHECK(a.scale == b.scale);
  CHECK(a.flip_horizontal == b.flip_horizontal);
  CHECK(a.flip_vertical == b.flip_vertical);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GeometricParams p = draw_geometric_params(seed);
    CHECK(p.rotation_deg >= -90.0);
    CHECK(p.rotation_deg <= 90.0);
    CHECK(p.shear_deg >= -20.0);
    CHECK(p.shear_deg <= 20.0);
    CHECK(p.scale >= 0.8);
    CHECK(p.scale <= 1.2);
  }
}

TEST_CASE("aggregated set: one per anchor, same-class companions, hard label") {
  std::mt19937_64 rng(25);
  std::vector<SampleId> ids;
  Oracle oracle;
  std::unordered_map<SampleId, Image> images;
  for (SampleId id = 0; id < 20; ++id) {
    ids.push_back(id);
    oracle.set(id, id % 2);
    // Encode the class in the image so provenance is checkable: class 0
    // images are dark, class 1 images bright.
    images[id] = constant_image(6, 6, 1, id % 2 ? 0.9 : 0.1);
  }
  SamplePool pool(ids, 2);
  pool.annotate({3, 8, 1, 14}, oracle);  // labels 1, 0, 1, 0

  probes::reset();
  auto aug = build_aggregated_set(pool, images, 77);
  REQUIRE(aug.size() == 4);
  CHECK(probes::counters().stitch.load() == 4);

  // Anchors follow annotation order.
  CHECK(aug[0].anchor == 3);
  CHECK(aug[1].anchor == 8);
  CHECK(aug[2].anchor == 1);
  CHECK(aug[3].anchor == 14);

  for (const auto& s : aug) {
    int label = pool.label_of(s.anchor);
    CHECK(s.target == one_hot(label, 2));
    // All four tiles share the anchor's class, so every pixel keeps the
    // class's constant value.
    double expect = label ? 0.9 : 0.1;
    for (double p : s.image.data) CHECK(p == doctest::Approx(expect));
  }
}

TEST_CASE("aggregated set draws companions only from labeled ids") {
  // One labeled sample per class: companions must be the anchor itself.
  std::vector<SampleId> ids{0, 1, 2, 3};
  Oracle oracle;
  std::unordered_map<SampleId, Image> images;
  for (SampleId id : ids) {
    oracle.set(id, id < 2 ? 0 : 1);
    images[id] = constant_image(4, 4, 1, 0.25 * static_cast<double>(id));
  }
  SamplePool pool(ids, 2);
  pool.annotate({0, 2}, oracle);

  auto aug = build_aggregated_set(pool, images, 5);
  REQUIRE(aug.size() == 2);
  // With a single labeled id per class, stitching four anchor copies keeps
  // the anchor's constant everywhere.
  for (const auto& s : aug) {
    double expect = s.anchor == 0 ? 0.0 : 0.5;
    for (double p : s.image.data) CHECK(p == doctest::Approx(expect));
  }
}

TEST_CASE("aggregation preserves size and class proportions on random draws") {
  std::mt19937_64 rng(26);
  std::vector<SampleId> ids;
  Oracle oracle;
  std::unordered_map<SampleId, Image> images;
  for (SampleId id = 0; id < 60; ++id) {
    ids.push_back(id);
    oracle.set(id, id % 3 == 0 ? 1 : 0);  // 1:2 imbalance
    images[id] = random_image(4, 4, 1, rng);
  }
  SamplePool pool(ids, 2);
  pool.annotate(ids, oracle);

  auto aug = build_aggregated_set(pool, images, 9);
  REQUIRE(aug.size() == 60);  // |D_aug| = |D_labeled|
  std::map<int, int> label_counts;
  for (const auto& s : aug) {
    int label = s.target[1] > 0.5 ? 1 : 0;
    ++label_counts[label];
    CHECK(label == pool.label_of(s.anchor));
  }
  CHECK(label_counts[1] == 20);
  CHECK(label_counts[0] == 40);
}

TEST_CASE("mixup set: soft targets consistent with the two parents") {
  std::vector<SampleId> ids{0, 1, 2, 3};
  Oracle oracle;
  std::unordered_map<SampleId, Image> images;
  for (SampleId id : ids) {
    oracle.set(id, id % 2);
    images[id] = constant_image(4, 4, 1, id % 2 ? 1.0 : 0.0);
  }
  SamplePool pool(ids, 2);
  pool.annotate(ids, oracle);

  probes::reset();
  auto aug = build_mixup_set(pool, images, 0.4, 11);
  REQUIRE(aug.size() == 4);
  CHECK(probes::counters().mixup.load() == 4);

  for (const auto& s : aug) {
    REQUIRE(s.target.size() == 2);
    CHECK(s.target[0] + s.target[1] == doctest::Approx(1.0));
    // Constant parents: mean pixel equals the class-1 target mass.
    double mean = 0.0;
    for (double p : s.image.data) mean += p;
    mean /= static_cast<double>(s.image.data.size());
    CHECK(mean == doctest::Approx(s.target[1]));
  }

  // Deterministic in the seed.
  auto again = build_mixup_set(pool, images, 0.4, 11);
  REQUIRE(again.size() == aug.size());
  for (std::size_t i = 0; i < aug.size(); ++i) {
    CHECK(again[i].anchor == aug[i].anchor);
    CHECK(again[i].target == aug[i].target);
    CHECK(again[i].image.data == aug[i].image.data);
  }
}

TEST_CASE("augmentation builders reject missing images and empty pools") {
  std::vector<SampleId> ids{0, 1};
  Oracle oracle;
  oracle.set(0, 0);
  oracle.set(1, 1);
  SamplePool pool(ids, 2);
  pool.annotate({0, 1}, oracle);

  std::unordered_map<SampleId, Image> missing;
  missing[0] = constant_image(4, 4, 1, 0.5);
  CHECK_THROWS_AS(build_aggregated_set(pool, missing, 1), std::out_of_range);

  SamplePool unlabeled(ids, 2);  // valid pool, nothing annotated yet
  CHECK_THROWS_WITH_AS(build_aggregated_set(unlabeled, missing, 1),
                       "empty pool", std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_mixup_set(unlabeled, missing, 0.2, 1),
                       "empty pool", std::invalid_argument);
}
