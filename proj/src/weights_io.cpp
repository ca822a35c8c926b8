#include "graspkit/weights_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

static_assert(std::endian::native == std::endian::little, "container IO assumes a little-endian host");

constexpr char kMagic[4] = {'F', 'V', 'T', 'W'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    T v;
    std::memcpy(&v, take(sizeof(T), what), sizeof(T));
    return v;
  }

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (n > bytes_.size() - pos_) {
      throw Error(ErrorCode::kTruncated, std::string("container ends inside ") + what);
    }
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_tensors(std::span<const NamedTensor> tensors) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kWeightsVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (t.name.size() > 0xffff) throw Error(ErrorCode::kInvalidArgument, "tensor name too long");
    if (t.tensor.rank() > 0xff) throw Error(ErrorCode::kInvalidArgument, "tensor rank too large");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out.insert(out.end(), t.name.begin(), t.name.end());
    put<std::uint8_t>(out, static_cast<std::uint8_t>(t.tensor.rank()));
    for (std::size_t d : t.tensor.shape()) {
      if (d > 0xffffffffULL) throw Error(ErrorCode::kInvalidArgument, "tensor extent too large");
      put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    }
    const auto* p = reinterpret_cast<const std::uint8_t*>(t.tensor.ptr());
    out.insert(out.end(), p, p + t.tensor.size() * sizeof(float));
  }
  return out;
}

std::vector<NamedTensor> decode_tensors(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a weight container");
  }
  Reader r(bytes.subspan(4));
  const auto version = r.get<std::uint32_t>("header");
  if (version != kWeightsVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "version " + std::to_string(version));
  }
  const auto count = r.get<std::uint32_t>("header");
  std::vector<NamedTensor> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint16_t>("tensor name");
    const auto* name = r.take(len, "tensor name");
    NamedTensor t;
    t.name.assign(reinterpret_cast<const char*>(name), len);
    const auto ndim = r.get<std::uint8_t>("tensor dims");
    std::vector<std::size_t> shape(ndim);
    std::size_t n = 1;
    for (auto& d : shape) {
      d = r.get<std::uint32_t>("tensor dims");
      // Guard the multiplication; a bogus extent must fail as truncation.
      if (d != 0 && n > r.remaining() / d) {
        throw Error(ErrorCode::kTruncated, "payload of " + t.name + " exceeds the container");
      }
      n *= d;
    }
    if (n > r.remaining() / sizeof(float)) {
      throw Error(ErrorCode::kTruncated, "payload of " + t.name + " exceeds the container");
    }
    std::vector<float> data(n);
    std::memcpy(data.data(), r.take(n * sizeof(float), "payload"), n * sizeof(float));
    t.tensor = TensorF(std::move(shape), std::move(data));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::uint8_t> encode_weights(const HeadWeights& w) {
  std::vector<NamedTensor> tensors;
  for (const std::string& name : weight_names()) tensors.push_back({name, weight_by_name(w, name)});
  return encode_tensors(tensors);
}

HeadWeights decode_weights(std::span<const std::uint8_t> bytes) {
  auto tensors = decode_tensors(bytes);
  HeadWeights w;
  for (const std::string& name : weight_names()) {
    auto it = std::find_if(tensors.begin(), tensors.end(), [&](const NamedTensor& t) { return t.name == name; });
    if (it == tensors.end()) throw Error(ErrorCode::kMissingTensor, name);
    weight_by_name(w, name) = std::move(it->tensor);
  }
  return w;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

void save_weights(const std::filesystem::path& path, const HeadWeights& w) {
  write_file_bytes(path, encode_weights(w));
}

HeadWeights load_weights_unchecked(const std::filesystem::path& path) {
  return decode_weights(read_file_bytes(path));
}

HeadWeights load_weights(const std::filesystem::path& path, const HiLoConfig& cfg) {
  HeadWeights w = load_weights_unchecked(path);
  validate_attention_shapes(w, cfg);
  validate_regression_shapes(w);
  return w;
}

}  // namespace graspkit
