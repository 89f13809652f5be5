#include "windcast/artifact.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "artifact payload assumes a little-endian host");

namespace windcast {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::string checksum_trailer(std::uint64_t checksum) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "\nfnv1a64 %016llx\n",
                static_cast<unsigned long long>(checksum));
  return buf;
}

constexpr std::size_t kTrailerSize = 26;  // "\nfnv1a64 " + 16 hex + "\n"

[[noreturn]] void checksum_failure(const std::string& path,
                                   const std::string& detail) {
  throw ArtifactChecksumError("artifact checksum mismatch (" + detail +
                              "): " + path);
}

}  // namespace

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
  std::uint64_t hash = kFnvOffset;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= kFnvPrime;
  }
  return hash;
}

const ArtifactTensor& ModelArtifact::tensor(const std::string& name) const {
  for (const ArtifactTensor& t : tensors) {
    if (t.name == name) {
      return t;
    }
  }
  throw std::out_of_range("artifact has no tensor named " + name);
}

bool ModelArtifact::has_tensor(const std::string& name) const {
  for (const ArtifactTensor& t : tensors) {
    if (t.name == name) {
      return true;
    }
  }
  return false;
}

void save_artifact(const ModelArtifact& artifact, const std::string& path) {
  nlohmann::json manifest = artifact.meta;
  nlohmann::json tensor_list = nlohmann::json::array();
  for (const ArtifactTensor& t : artifact.tensors) {
    tensor_list.push_back({{"name", t.name}, {"shape", t.values.shape()}});
  }
  manifest["tensors"] = std::move(tensor_list);

  std::string bytes;
  bytes += kArtifactMagic;
  bytes += ' ';
  bytes += std::to_string(kArtifactVersion);
  bytes += '\n';
  bytes += manifest.dump();
  bytes += '\n';
  for (const ArtifactTensor& t : artifact.tensors) {
    const std::size_t offset = bytes.size();
    bytes.resize(offset + t.values.size() * sizeof(double));
    std::memcpy(bytes.data() + offset, t.values.data(),
                t.values.size() * sizeof(double));
  }
  const std::uint64_t checksum = fnv1a64(
      reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  bytes += checksum_trailer(checksum);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

ModelArtifact load_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();

  const std::size_t header_end = bytes.find('\n');
  if (header_end == std::string::npos) {
    throw ArtifactVersionError("not a model artifact: " + path);
  }
  const std::string header = bytes.substr(0, header_end);
  const std::string expected_prefix = std::string(kArtifactMagic) + ' ';
  if (header.rfind(expected_prefix, 0) != 0) {
    throw ArtifactVersionError("not a model artifact: " + path);
  }
  const std::string version_text = header.substr(expected_prefix.size());
  if (version_text != std::to_string(kArtifactVersion)) {
    throw ArtifactVersionError("unsupported artifact version " + version_text +
                               ": " + path);
  }

  const std::size_t manifest_end = bytes.find('\n', header_end + 1);
  if (manifest_end == std::string::npos) {
    checksum_failure(path, "truncated manifest");
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(
        bytes.begin() + static_cast<std::ptrdiff_t>(header_end) + 1,
        bytes.begin() + static_cast<std::ptrdiff_t>(manifest_end));
  } catch (const nlohmann::json::exception&) {
    checksum_failure(path, "unreadable manifest");
  }
  if (!manifest.is_object() || !manifest.contains("tensors") ||
      !manifest["tensors"].is_array()) {
    checksum_failure(path, "unreadable manifest");
  }

  std::size_t payload_doubles = 0;
  for (const auto& entry : manifest["tensors"]) {
    std::size_t count = 1;
    for (const auto& extent : entry.at("shape")) {
      count *= extent.get<std::size_t>();
    }
    payload_doubles += count;
  }
  const std::size_t payload_begin = manifest_end + 1;
  const std::size_t payload_end =
      payload_begin + payload_doubles * sizeof(double);
  if (bytes.size() != payload_end + kTrailerSize) {
    checksum_failure(path, "truncated payload");
  }

  const std::string trailer = bytes.substr(payload_end);
  if (trailer.rfind("\nfnv1a64 ", 0) != 0 || trailer.back() != '\n') {
    checksum_failure(path, "missing trailer");
  }
  const std::string digest = trailer.substr(9, 16);
  if (digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
    checksum_failure(path, "missing trailer");
  }
  const std::uint64_t recorded = std::stoull(digest, nullptr, 16);
  const std::uint64_t computed = fnv1a64(
      reinterpret_cast<const unsigned char*>(bytes.data()), payload_end);
  if (recorded != computed) {
    checksum_failure(path, "content changed");
  }

  ModelArtifact artifact;
  const char* payload = bytes.data() + payload_begin;
  for (const auto& entry : manifest["tensors"]) {
    ArtifactTensor t;
    t.name = entry.at("name").get<std::string>();
    std::vector<std::size_t> shape =
        entry.at("shape").get<std::vector<std::size_t>>();
    Tensor values(shape);
    std::memcpy(values.data(), payload, values.size() * sizeof(double));
    payload += values.size() * sizeof(double);
    t.values = std::move(values);
    artifact.tensors.push_back(std::move(t));
  }
  manifest.erase("tensors");
  artifact.meta = std::move(manifest);
  return artifact;
}

}  // namespace windcast
