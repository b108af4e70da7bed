#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

namespace support {

namespace fs = std::filesystem;

inline fs::path fixtures() { return fs::path(TEMPUS_FIXTURE_DIR); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("tempus-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Copies the fixture corpus (metadata + raw pages) into `dir`.
inline void stage_corpus(const fs::path& dir) {
  fs::copy(fixtures() / "corpus" / "metadata.json", dir / "metadata.json");
  fs::copy(fixtures() / "corpus" / "raw", dir / "raw", fs::copy_options::recursive);
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace support
