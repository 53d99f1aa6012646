#pragma once

// RTEN tensor files.
//
//   "RTEN"              4 bytes magic
//   version             u32 LE (= 1)
//   dtype               u8 (0 = f32, 1 = f64)
//   rank                u8
//   dims                rank x u64 LE
//   payload             row-major values, LE
//
// Values are held as f64 in memory; f32 files round-trip bit-exactly.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace cliffrope::io {

enum class DType : std::uint8_t { F32 = 0, F64 = 1 };

inline constexpr std::uint32_t kTensorVersion = 1;

struct Tensor {
  DType dtype = DType::F64;
  std::vector<std::uint64_t> dims;
  std::vector<double> values;

  std::uint64_t element_count() const;
};

class TensorFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_tensor(std::ostream& out, const Tensor& tensor);
Tensor read_tensor(std::istream& in);

// Throw TensorFormatError for unreadable/unwritable files as well as malformed contents.
void write_tensor_file(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor_file(const std::filesystem::path& path);

}  // namespace cliffrope::io
