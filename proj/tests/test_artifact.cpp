#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "windcast/artifact.hpp"
#include "windcast/rng.hpp"
#include "windcast/tensor.hpp"

using namespace windcast;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name)
      : path("/tmp/windcast_artifact_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

ModelArtifact sample_artifact() {
  ModelArtifact artifact;
  artifact.meta["model"] = "cnn_lstm";
  artifact.meta["step"] = 12;
  artifact.meta["nested"] = {{"seed", 42}, {"note", "fixture"}};
  Rng rng(5);
  Tensor weights({3, 4});
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights.data()[i] = rng.normal();
  }
  Tensor bias({4});
  for (std::size_t i = 0; i < bias.size(); ++i) {
    bias.data()[i] = rng.uniform(-1.0, 1.0);
  }
  artifact.tensors.push_back({"weights", weights});
  artifact.tensors.push_back({"bias", bias});
  return artifact;
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<char>((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
}

void dump(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("fnv1a64 matches published reference digests") {
  CHECK(fnv1a64(nullptr, 0) == 14695981039346656037ull);
  const unsigned char a[] = {'a'};
  CHECK(fnv1a64(a, 1) == 0xaf63dc4c8601ec8cull);
  const unsigned char foobar[] = {'f', 'o', 'o', 'b', 'a', 'r'};
  CHECK(fnv1a64(foobar, 6) == 0x85944171f73967e8ull);
}

TEST_CASE("artifacts round-trip bit for bit") {
  const ModelArtifact original = sample_artifact();
  TempPath tmp("roundtrip.wca");
  save_artifact(original, tmp.path);
  const ModelArtifact loaded = load_artifact(tmp.path);

  CHECK(loaded.meta == original.meta);
  REQUIRE(loaded.tensors.size() == 2);
  CHECK(loaded.tensors[0].name == "weights");
  CHECK(loaded.tensors[1].name == "bias");
  for (std::size_t t = 0; t < 2; ++t) {
    const Tensor& a = original.tensors[t].values;
    const Tensor& b = loaded.tensors[t].values;
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.data()[i] == b.data()[i]);  // exact, not approximate
    }
  }
  CHECK(loaded.has_tensor("weights"));
  CHECK_FALSE(loaded.has_tensor("missing"));
  CHECK(loaded.tensor("bias").values.size() == 4);
  CHECK_THROWS_AS(loaded.tensor("missing"), std::out_of_range);

  // Saving the loaded copy reproduces the file exactly.
  TempPath second("roundtrip2.wca");
  save_artifact(loaded, second.path);
  CHECK(slurp(tmp.path) == slurp(second.path));
}

TEST_CASE("the header line carries magic and version") {
  TempPath tmp("header.wca");
  save_artifact(sample_artifact(), tmp.path);
  const std::vector<char> bytes = slurp(tmp.path);
  const std::string head(bytes.begin(), bytes.begin() + 20);
  CHECK(head.substr(0, 19) == "WINDCAST-ARTIFACT 1");
  CHECK(head[19] == '\n');
}

TEST_CASE("a truncated payload is reported as a checksum failure") {
  TempPath tmp("truncated.wca");
  save_artifact(sample_artifact(), tmp.path);
  std::vector<char> bytes = slurp(tmp.path);
  bytes.resize(bytes.size() - 30);
  dump(tmp.path, bytes);
  CHECK_THROWS_WITH_AS(load_artifact(tmp.path), doctest::Contains("truncated"),
                       ArtifactChecksumError);
}

TEST_CASE("a corrupted payload byte is caught by the checksum") {
  TempPath tmp("corrupt.wca");
  save_artifact(sample_artifact(), tmp.path);
  std::vector<char> bytes = slurp(tmp.path);
  // Flip one bit in the middle of the tensor payload.
  bytes[bytes.size() - 40] = static_cast<char>(bytes[bytes.size() - 40] ^ 0x10);
  dump(tmp.path, bytes);
  CHECK_THROWS_WITH_AS(load_artifact(tmp.path),
                       doctest::Contains("checksum mismatch"),
                       ArtifactChecksumError);
}

TEST_CASE("an unsupported version is its own error type") {
  TempPath tmp("version.wca");
  save_artifact(sample_artifact(), tmp.path);
  std::vector<char> bytes = slurp(tmp.path);
  bytes[18] = '2';  // "WINDCAST-ARTIFACT 2"
  dump(tmp.path, bytes);
  CHECK_THROWS_WITH_AS(load_artifact(tmp.path), doctest::Contains("version"),
                       ArtifactVersionError);
}

TEST_CASE("a foreign file is rejected before any checksum work") {
  TempPath tmp("foreign.wca");
  {
    std::ofstream out(tmp.path, std::ios::binary);
    out << "timestamp,wind_speed\n2019-01-01T00:00:00,5.0\n";
  }
  CHECK_THROWS_AS(load_artifact(tmp.path), ArtifactVersionError);
  CHECK_THROWS_AS(load_artifact("/tmp/windcast_artifact_nonexistent.wca"),
                  std::runtime_error);
}

TEST_CASE("a mangled manifest is a checksum failure, not a crash") {
  TempPath tmp("manifest.wca");
  save_artifact(sample_artifact(), tmp.path);
  std::vector<char> bytes = slurp(tmp.path);
  bytes[22] = '!';  // inside the JSON manifest line
  dump(tmp.path, bytes);
  CHECK_THROWS_AS(load_artifact(tmp.path), ArtifactChecksumError);
}

TEST_CASE("metadata-only artifacts are allowed") {
  ModelArtifact artifact;
  artifact.meta["status"] = "insufficient_samples";
  TempPath tmp("meta_only.wca");
  save_artifact(artifact, tmp.path);
  const ModelArtifact loaded = load_artifact(tmp.path);
  CHECK(loaded.tensors.empty());
  CHECK(loaded.meta["status"] == "insufficient_samples");
}
