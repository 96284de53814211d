#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "gzsl/datakit/dataset.hpp"
#include "gzsl/datakit/latent_set.hpp"
#include "gzsl/datakit/sampling.hpp"
#include "gzsl/datakit/synthetic.hpp"
#include "gzsl/errors.hpp"

using namespace gzsl;
using namespace gzsl::datakit;
using numkit::Rng;
namespace fs = std::filesystem;

namespace {

void write_floats(const fs::path& p, std::initializer_list<float> values) {
  std::ofstream os(p, std::ios::binary);
  for (float v : values) {
    unsigned char b[4];
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
  }
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

ZslDataset random_dataset(Rng& rng) {
  const int classes = static_cast<int>(testing::random_size(2, 5, rng));
  const int seen = static_cast<int>(testing::random_size(1, static_cast<std::size_t>(classes) - 1, rng));
  auto ds = testing::toy_dataset(classes, seen, testing::random_size(2, 6, rng),
                                 testing::random_size(1, 4, rng), testing::random_size(1, 3, rng));
  ds.visual = testing::random_matrix(ds.visual.rows(), ds.visual.cols(), rng, -10, 10);
  ds.attributes = testing::random_matrix(ds.attributes.rows(), ds.attributes.cols(), rng);
  return ds;
}

double min_seen_unseen_distance(const SyntheticSpec& spec) {
  const Matrix c = synthetic_centroids(spec);
  double best = INFINITY;
  for (std::size_t u = spec.seen_count; u < c.rows(); ++u)
    for (std::size_t s = 0; s < spec.seen_count; ++s) {
      double d = 0;
      for (std::size_t j = 0; j < c.cols(); ++j) d += (double(c(u, j)) - c(s, j)) * (double(c(u, j)) - c(s, j));
      best = std::min(best, std::sqrt(d));
    }
  return best;
}

}  // namespace

TEST_SUITE("dataset files") {
  TEST_CASE("save then load is the identity") {
    const auto dir = testing::scratch_dir("datakit_roundtrip");
    const auto ds = testing::toy_dataset(4, 3, 5);
    save_dataset(ds, dir);
    CHECK(load_dataset(dir) == ds);
  }

  TEST_CASE("round trip over random small datasets") {
    Rng rng(1);
    const auto dir = testing::scratch_dir("datakit_property");
    for (int t = 0; t < 25; ++t) {
      const auto ds = random_dataset(rng);
      save_dataset(ds, dir);
      CHECK(load_dataset(dir) == ds);
    }
  }

  TEST_CASE("hand-written micro dataset loads field by field") {
    const auto dir = testing::scratch_dir("datakit_micro");
    write_text(dir / "manifest.json", R"({
      "format": "gzsl-dataset", "version": 1,
      "num_samples": 3, "visual_dim": 2, "num_classes": 2, "attribute_dim": 1,
      "seen_classes": [0], "unseen_classes": [1],
      "train_index": [0], "test_index": [1, 2],
      "labels": [0, 0, 1],
      "files": {"visual": "v.bin", "attributes": "a.bin"}
    })");
    write_floats(dir / "v.bin", {1.0f, 2.0f, 3.0f, 4.0f, -0.5f, 0.25f});
    write_floats(dir / "a.bin", {7.0f, -7.0f});
    const auto ds = load_dataset(dir);
    CHECK(ds.visual == Matrix::from_rows({{1, 2}, {3, 4}, {-0.5f, 0.25f}}));
    CHECK(ds.attributes == Matrix::from_rows({{7}, {-7}}));
    CHECK(ds.labels == std::vector<int>{0, 0, 1});
    CHECK(ds.seen_classes == std::vector<int>{0});
    CHECK(ds.unseen_classes == std::vector<int>{1});
    CHECK(ds.train_index == std::vector<std::size_t>{0});
    CHECK(ds.test_index == std::vector<std::size_t>{1, 2});
  }

  TEST_CASE("written matrix files are raw little-endian float32") {
    const auto dir = testing::scratch_dir("datakit_bytes");
    auto ds = testing::toy_dataset(2, 1, 2, 1, 1);
    ds.visual = Matrix::from_rows({{1.0f}, {-2.0f}, {0.5f}, {3.0f}});
    save_dataset(ds, dir);
    std::ifstream is(dir / "visual.f32", std::ios::binary);
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), {});
    REQUIRE(bytes.size() == 16);
    // 1.0f = 0x3F800000, -2.0f = 0xC0000000
    CHECK(bytes[0] == 0x00);
    CHECK(bytes[3] == 0x3F);
    CHECK(bytes[2] == 0x80);
    CHECK(bytes[7] == 0xC0);
  }

  TEST_CASE("manifest declaring more rows than the file holds") {
    const auto dir = testing::scratch_dir("datakit_short");
    save_dataset(testing::toy_dataset(2, 1, 1, 2, 1), dir);  // 2 rows
    std::ifstream is(dir / "manifest.json");
    std::string text((std::istreambuf_iterator<char>(is)), {});
    is.close();
    const auto at = text.find("\"num_samples\": 2");
    REQUIRE(at != std::string::npos);
    text.replace(at, 16, "\"num_samples\": 3");
    write_text(dir / "manifest.json", text);
    CHECK_THROWS_AS(load_dataset(dir), ValidationError);
  }

  TEST_CASE("missing files are io errors") {
    const auto dir = testing::scratch_dir("datakit_missing");
    CHECK_THROWS_AS(load_dataset(dir), IoError);
    save_dataset(testing::toy_dataset(2, 1, 2), dir);
    fs::remove(dir / "attributes.f32");
    CHECK_THROWS_AS(load_dataset(dir), IoError);
  }

  TEST_CASE("broken invariants are validation errors") {
    auto overlap = testing::toy_dataset(3, 2, 2);
    overlap.unseen_classes.push_back(0);
    CHECK_THROWS_AS(overlap.validate(), ValidationError);
    auto label = testing::toy_dataset(3, 2, 2);
    label.labels[0] = 9;
    CHECK_THROWS_AS(label.validate(), ValidationError);
    auto train_unseen = testing::toy_dataset(3, 2, 2);
    train_unseen.train_index.push_back(train_unseen.test_index.back());
    train_unseen.test_index.pop_back();
    CHECK_THROWS_AS(train_unseen.validate(), ValidationError);
    // Saving refuses to write an invalid dataset.
    CHECK_THROWS_AS(save_dataset(overlap, testing::scratch_dir("datakit_invalid")), ValidationError);
  }

  TEST_CASE("csv import") {
    const auto dir = testing::scratch_dir("datakit_csv");
    write_text(dir / "samples.csv", "f0,f1,label\n1,2,0\n3,4,0\n5,6,1\n7,8,2\n");
    write_text(dir / "attrs.csv", "a0\n0.5\n1.5\n2.5\n");
    const auto ds = import_csv(dir / "samples.csv", dir / "attrs.csv", {0, 1});
    CHECK(ds.visual == Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}, {7, 8}}));
    CHECK(ds.attributes == Matrix::from_rows({{0.5f}, {1.5f}, {2.5f}}));
    CHECK(ds.unseen_classes == std::vector<int>{2});
    CHECK(ds.train_index == std::vector<std::size_t>{0, 1, 2});
    CHECK(ds.test_index == std::vector<std::size_t>{3});

    write_text(dir / "split.csv", "label,split,x\n0,train,1\n0,test,2\n1,train,3\n2,test,4\n");
    const auto sp = import_csv(dir / "split.csv", dir / "attrs.csv", {0, 1});
    CHECK(sp.train_index == std::vector<std::size_t>{0, 2});
    CHECK(sp.test_index == std::vector<std::size_t>{1, 3});

    write_text(dir / "bad.csv", "x,label\nfoo,0\n");
    CHECK_THROWS_AS(import_csv(dir / "bad.csv", dir / "attrs.csv", {0, 1}), ValidationError);
    write_text(dir / "nolabel.csv", "x,y\n1,2\n");
    CHECK_THROWS_AS(import_csv(dir / "nolabel.csv", dir / "attrs.csv", {0, 1}), ValidationError);
  }
}

TEST_SUITE("synthetic") {
  TEST_CASE("overlap 0 keeps unseen centroids far from seen ones") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SyntheticSpec spec;
      spec.seed = seed;
      spec.cluster_spread = 0.5f + 0.25f * static_cast<float>(seed % 3);
      CHECK(min_seen_unseen_distance(spec) > 4.0 * spec.cluster_spread);
    }
  }

  TEST_CASE("overlap 1 puts each unseen centroid on a seen centroid") {
    SyntheticSpec spec;
    spec.overlap = 1.0f;
    spec.seed = 3;
    CHECK(min_seen_unseen_distance(spec) == 0.0);
    const Matrix c = synthetic_centroids(spec);
    for (std::size_t u = spec.seen_count; u < c.rows(); ++u) {
      bool hit = false;
      for (std::size_t s = 0; s < spec.seen_count; ++s) {
        bool same = true;
        for (std::size_t j = 0; j < c.cols(); ++j) same = same && c(u, j) == c(s, j);
        hit = hit || same;
      }
      CHECK(hit);
    }
  }

  TEST_CASE("larger overlap never increases the seen-unseen gap") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      double previous = INFINITY;
      for (int k = 0; k <= 10; ++k) {
        SyntheticSpec spec;
        spec.seed = seed;
        spec.overlap = 0.1f * static_cast<float>(k);
        const double gap = min_seen_unseen_distance(spec);
        CHECK(gap <= previous + 1e-5);
        previous = gap;
      }
    }
  }

  TEST_CASE("deterministic, valid and shaped by the spec") {
    SyntheticSpec spec;
    spec.seen_count = 3;
    spec.unseen_count = 2;
    spec.visual_dim = 6;
    spec.attribute_dim = 4;
    spec.samples_per_class = 10;
    spec.seed = 11;
    const auto a = make_synthetic(spec), b = make_synthetic(spec);
    CHECK(a == b);
    CHECK(a.num_samples() == 50);
    CHECK(a.num_classes() == 5);
    CHECK(a.attribute_dim() == 4);
    CHECK(a.seen_classes == std::vector<int>{0, 1, 2});
    CHECK(a.unseen_classes == std::vector<int>{3, 4});
    CHECK(a.train_index.size() == 3 * 8);
    CHECK(a.test_index.size() == 3 * 2 + 2 * 10);
    spec.seed = 12;
    CHECK_FALSE(make_synthetic(spec) == a);
  }

  TEST_CASE("invalid specs are usage errors") {
    SyntheticSpec spec;
    spec.seen_count = 1;
    CHECK_THROWS_AS(make_synthetic(spec), UsageError);
    spec = {};
    spec.overlap = 1.5f;
    CHECK_THROWS_AS(make_synthetic(spec), UsageError);
    spec = {};
    spec.samples_per_class = 0;
    CHECK_THROWS_AS(make_synthetic(spec), UsageError);
  }
}

TEST_SUITE("triplet sampling") {
  TEST_CASE("two classes force the negative") {
    const auto ds = testing::toy_dataset(2, 2, 6);
    Rng rng(1);
    const auto batch = sample_triplet_batch(ds, 200, rng);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      CHECK(batch.negative.labels[i] == 1 - batch.anchor.labels[i]);
      CHECK(batch.positive.labels[i] == batch.anchor.labels[i]);
    }
  }

  TEST_CASE("anchor class frequencies are uniform on balanced classes") {
    const auto ds = testing::toy_dataset(4, 4, 11);
    Rng rng(2);
    const auto batch = sample_triplet_batch(ds, 10000, rng);
    std::map<int, int> counts;
    for (int l : batch.anchor.labels) ++counts[l];
    REQUIRE(counts.size() == 4);
    for (const auto& [cls, n] : counts) CHECK(std::abs(n / 10000.0 - 0.25) < 0.05 * 0.25);
  }

  TEST_CASE("members carry their class rows") {
    const auto ds = testing::toy_dataset(5, 4, 4);
    Rng rng(3);
    const auto batch = sample_triplet_batch(ds, 300, rng);
    batch.validate();
    for (const auto* part : {&batch.anchor, &batch.positive, &batch.negative}) {
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const int cls = part->labels[i];
        CHECK(ds.is_seen(cls));
        // toy visuals sit at class + small offset
        CHECK(std::floor(part->visual(i, 0) + 1e-4f) == static_cast<float>(cls));
        for (std::size_t j = 0; j < ds.attribute_dim(); ++j)
          CHECK(part->semantic(i, j) == ds.attributes(static_cast<std::size_t>(cls), j));
      }
    }
  }

  TEST_CASE("never pairs an anchor with a same-label negative") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
      const int classes = static_cast<int>(testing::random_size(2, 6, rng));
      const auto ds = testing::toy_dataset(classes + 1, classes, testing::random_size(2, 5, rng));
      const auto batch = sample_triplet_batch(ds, testing::random_size(1, 40, rng), rng);
      for (std::size_t i = 0; i < batch.size(); ++i) CHECK(batch.anchor.labels[i] != batch.negative.labels[i]);
    }
  }

  TEST_CASE("positive differs from the anchor when the class has another row") {
    const auto ds = testing::toy_dataset(3, 3, 4);
    Rng rng(5);
    const auto batch = sample_triplet_batch(ds, 200, rng);
    for (std::size_t i = 0; i < batch.size(); ++i) CHECK_FALSE(batch.anchor.visual.row(i)[0] == batch.positive.visual.row(i)[0]);
  }

  TEST_CASE("empty batch") {
    const auto ds = testing::toy_dataset(3, 2, 3);
    Rng rng(6);
    const auto batch = sample_triplet_batch(ds, 0, rng);
    CHECK(batch.size() == 0);
    CHECK(batch.anchor.visual.rows() == 0);
  }

  TEST_CASE("errors") {
    Rng rng(7);
    CHECK_THROWS_AS(sample_triplet_batch(testing::toy_dataset(3, 1, 3), 4, rng), UsageError);
    auto ds = testing::toy_dataset(3, 3, 3);
    // strip class 1 of its training rows
    std::vector<std::size_t> keep;
    for (std::size_t r : ds.train_index) (ds.labels[r] == 1 ? ds.test_index : keep).push_back(r);
    ds.train_index = keep;
    CHECK_THROWS_AS(sample_triplet_batch(ds, 4, rng), SamplingError);
  }
}

TEST_SUITE("latent train set") {
  gml::DualVae model_for(const ZslDataset& ds, Rng& rng) {
    return testing::tiny_vae(rng, ds.visual_dim(), ds.attribute_dim(), 4, 3);
  }

  TEST_CASE("50 samples with n_seen 200 in mean mode gives four duplicates of each") {
    const auto ds = testing::toy_dataset(2, 1, 51);  // 50 training rows in class 0
    Rng rng(1);
    const auto vae = model_for(ds, rng);
    const auto set = build_latent_train_set(vae, ds, 200, 5, LatentMode::Mean, rng);
    std::map<std::vector<float>, int> counts;
    for (std::size_t r = 0; r < 200; ++r) ++counts[{set.latents.row(r).begin(), set.latents.row(r).end()}];
    CHECK(counts.size() == 50);
    for (const auto& [row, n] : counts) CHECK(n == 4);
  }

  TEST_CASE("60 rows fill 200 as three cycles plus the first 20") {
    const auto ds = testing::toy_dataset(2, 1, 61);
    Rng rng(2);
    const auto vae = model_for(ds, rng);
    const auto set = build_latent_train_set(vae, ds, 200, 1, LatentMode::Mean, rng);
    const auto rows = ds.train_rows_of(0);
    const Matrix direct = gml::encode(vae.q_v, numkit::gather_rows(ds.visual, rows)).mean;
    for (std::size_t k = 0; k < 200; ++k)
      for (std::size_t c = 0; c < 3; ++c) CHECK(set.latents(k, c) == direct(k % 60, c));
  }

  TEST_CASE("unseen rows are identical in mean mode and distinct when sampled") {
    const auto ds = testing::toy_dataset(3, 2, 4);
    Rng rng(3);
    const auto vae = model_for(ds, rng);
    const auto mean = build_latent_train_set(vae, ds, 2, 7, LatentMode::Mean, rng);
    for (std::size_t r = 5; r < 11; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(mean.latents(r, c) == mean.latents(4, c));
    const auto sampled = build_latent_train_set(vae, ds, 2, 7, LatentMode::Sampled, rng);
    CHECK_FALSE(sampled.latents(5, 0) == sampled.latents(4, 0));
    // duplicated seen sources get independent noise
    const auto dup = build_latent_train_set(vae, ds, 6, 1, LatentMode::Sampled, rng);
    CHECK_FALSE(dup.latents(0, 0) == dup.latents(3, 0));
  }

  TEST_CASE("counts, label order and provenance") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
      const int classes = static_cast<int>(testing::random_size(2, 6, rng));
      const int seen = static_cast<int>(testing::random_size(1, static_cast<std::size_t>(classes) - 1, rng));
      const auto ds = testing::toy_dataset(classes, seen, testing::random_size(2, 5, rng));
      const auto vae = model_for(ds, rng);
      const std::size_t ns = testing::random_size(1, 9, rng), nu = testing::random_size(1, 9, rng);
      const auto set = build_latent_train_set(vae, ds, ns, nu, LatentMode::Sampled, rng);
      const std::size_t total = static_cast<std::size_t>(seen) * ns + static_cast<std::size_t>(classes - seen) * nu;
      CHECK(set.latents.rows() == total);
      CHECK(set.labels.size() == total);
      REQUIRE(set.provenance.size() == total);
      for (std::size_t r = 0; r < total; ++r) {
        const bool is_seen = ds.is_seen(set.labels[r]);
        CHECK(set.provenance[r] == (is_seen ? gml::Modality::Visual : gml::Modality::Semantic));
      }
    }
  }

  TEST_CASE("mismatched model is a usage error") {
    const auto ds = testing::toy_dataset(3, 2, 4);
    Rng rng(5);
    const auto vae = testing::tiny_vae(rng, 7, 2, 2, 1);
    CHECK_THROWS_AS(build_latent_train_set(vae, ds, 2, 2, LatentMode::Mean, rng), UsageError);
  }

  TEST_CASE("latent mode names") {
    CHECK(latent_mode_from_string(to_string(LatentMode::Mean)) == LatentMode::Mean);
    CHECK(latent_mode_from_string("sampled") == LatentMode::Sampled);
    CHECK_THROWS_AS(latent_mode_from_string("median"), UsageError);
  }
}
