#ifndef WINDCAST_ARTIFACT_HPP
#define WINDCAST_ARTIFACT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "windcast/tensor.hpp"

namespace windcast {

/// First line of every model file; the trailing integer is the format
/// version.
inline constexpr char kArtifactMagic[] = "WINDCAST-ARTIFACT";
inline constexpr int kArtifactVersion = 1;

struct ArtifactVersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArtifactChecksumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArtifactTensor {
  std::string name;
  Tensor values;
};

/**
 * On-disk model file: a version header line, a one-line JSON manifest
 * (free-form metadata plus the tensor name/shape list), the tensor
 * payload as raw little-endian 64-bit reals in manifest order, and an
 * FNV-1a 64 checksum trailer covering everything before it.
 *
 * Round-trips are bit-exact. Version and checksum failures raise the
 * distinct error types above.
 */
struct ModelArtifact {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<ArtifactTensor> tensors;

  const ArtifactTensor& tensor(const std::string& name) const;
  bool has_tensor(const std::string& name) const;
};

void save_artifact(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_artifact(const std::string& path);

/// FNV-1a, 64-bit variant; exposed for test-side verification.
std::uint64_t fnv1a64(const unsigned char* data, std::size_t size);

}  // namespace windcast

#endif  // WINDCAST_ARTIFACT_HPP
