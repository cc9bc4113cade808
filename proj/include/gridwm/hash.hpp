#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace gridwm {

// Content hashing for vocab identity, artifact manifests, and dataset
// fingerprints. FNV-1a/64: stable, dependency-free, good enough to detect
// accidental changes (not adversarial ones).
class Hasher {
 public:
  void update(const void* data, size_t n) {
    const auto* p = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void update(std::string_view s) { update(s.data(), s.size()); }
  template <typename T>
  void update_value(const T& v) {
    update(&v, sizeof(T));
  }
  uint64_t digest() const { return h_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h_));
    return std::string(buf);
  }

 private:
  uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::string hash_bytes_hex(std::string_view bytes) {
  Hasher h;
  h.update(bytes);
  return h.hex();
}

std::string hash_file_hex(const std::string& path);

}  // namespace gridwm
