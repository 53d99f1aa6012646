#include "cliffrope/tensor_file.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace cliffrope::io {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'T', 'E', 'N'};

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> bytes;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(UInt)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw TensorFormatError(std::string("tensor file truncated while reading ") + what);
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= static_cast<UInt>(bytes[i]) << (8 * i);
  return value;
}

std::size_t dtype_size(DType dtype) { return dtype == DType::F32 ? 4 : 8; }

}  // namespace

std::uint64_t Tensor::element_count() const {
  std::uint64_t n = 1;
  for (auto d : dims) {
    if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / d) {
      throw TensorFormatError("tensor dims overflow");
    }
    n *= d;
  }
  return n;
}

void write_tensor(std::ostream& out, const Tensor& tensor) {
  if (tensor.dims.size() > 255) throw TensorFormatError("tensor rank exceeds 255");
  if (tensor.element_count() != tensor.values.size()) {
    throw TensorFormatError("tensor values do not match dims");
  }
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kTensorVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(tensor.dtype));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put_le<std::uint64_t>(out, d);
  for (double v : tensor.values) {
    if (tensor.dtype == DType::F32) {
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    } else {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
  if (!out) throw TensorFormatError("failed writing tensor");
}

Tensor read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw TensorFormatError("not an RTEN tensor file (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kTensorVersion) {
    throw TensorFormatError("unsupported tensor file version " + std::to_string(version));
  }
  Tensor t;
  const auto dtype = get_le<std::uint8_t>(in, "dtype");
  if (dtype > 1) throw TensorFormatError("unknown tensor dtype " + std::to_string(dtype));
  t.dtype = static_cast<DType>(dtype);
  const auto rank = get_le<std::uint8_t>(in, "rank");
  for (unsigned i = 0; i < rank; ++i) t.dims.push_back(get_le<std::uint64_t>(in, "dims"));

  const std::uint64_t count = t.element_count();
  // Refuse sizes that cannot possibly be backed by the stream before allocating.
  const auto here = in.tellg();
  if (here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (static_cast<std::uint64_t>(end - here) != count * dtype_size(t.dtype)) {
      throw TensorFormatError("tensor payload length does not match dims");
    }
  }
  t.values.resize(count);
  for (auto& v : t.values) {
    if (t.dtype == DType::F32) {
      v = std::bit_cast<float>(get_le<std::uint32_t>(in, "payload"));
    } else {
      v = std::bit_cast<double>(get_le<std::uint64_t>(in, "payload"));
    }
  }
  return t;
}

void write_tensor_file(const std::filesystem::path& path, const Tensor& tensor) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TensorFormatError("cannot open " + path.string() + " for writing");
  write_tensor(out, tensor);
}

Tensor read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TensorFormatError("cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace cliffrope::io
