#include "trimmer/numerics/model_io.hpp"

#include "trimmer/detail/binary.hpp"
#include "trimmer/errors.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace trimmer::numerics {

namespace {

constexpr std::string_view kMagic = "TRMW";

void write_tensor(detail::ByteWriter& w, std::string_view name, const std::vector<std::uint64_t>& dims,
                  const double* data, std::size_t count) {
  w.uint(static_cast<std::uint32_t>(name.size()));
  w.bytes(name);
  w.uint(static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) w.uint(d);
  for (std::size_t i = 0; i < count; ++i) w.f64(data[i]);
}

struct RawTensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> values;
};

RawTensor read_tensor(detail::ByteReader& r) {
  RawTensor t;
  const auto name_len = r.uint<std::uint32_t>("tensor name length");
  t.name = std::string(r.bytes(name_len, "tensor name"));
  const auto rank = r.uint<std::uint32_t>("tensor rank of " + t.name);
  if (rank == 0 || rank > 3) throw ParseError("tensor " + t.name + " has unsupported rank " + std::to_string(rank), r.offset());
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    t.dims.push_back(r.uint<std::uint64_t>("dims of " + t.name));
    count *= t.dims.back();
  }
  r.require(count * 8, "payload of " + t.name);
  t.values.resize(count);
  for (auto& v : t.values) v = r.f64("payload of " + t.name);
  return t;
}

}  // namespace

std::string serialize_model(const ParameterSet& params) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.uint(kModelFormatVersion);

  const auto arch = params.architecture();
  // conv kernel stored as [out, in, width]
  std::vector<double> kernel(arch.conv_channels * arch.input_dim * 3);
  for (std::size_t o = 0; o < arch.conv_channels; ++o)
    for (std::size_t i = 0; i < arch.input_dim; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        kernel[(o * arch.input_dim + i) * 3 + j] =
            params.conv_kernel[j](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
  write_tensor(w, "conv_kernel", {arch.conv_channels, arch.input_dim, 3}, kernel.data(), kernel.size());

  auto vec = [&](std::string_view name, const Vector& v) {
    write_tensor(w, name, {static_cast<std::uint64_t>(v.size())}, v.data(), static_cast<std::size_t>(v.size()));
  };
  auto mat = [&](std::string_view name, const Matrix2D& m) {
    write_tensor(w, name, {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())}, m.data(),
                 static_cast<std::size_t>(m.size()));
  };
  vec("conv_bias", params.conv_bias);
  mat("fc1_w", params.fc1_w);
  vec("fc1_b", params.fc1_b);
  mat("fc2_w", params.fc2_w);
  vec("fc2_b", params.fc2_b);
  mat("fc3_w", params.fc3_w);
  vec("fc3_b", params.fc3_b);
  return w.take();
}

ParameterSet deserialize_model(const std::string& bytes) {
  detail::ByteReader r(bytes);
  if (r.bytes(4, "magic") != kMagic) throw ParseError("not a model file: bad magic", 0);
  const auto version = r.uint<std::uint32_t>("format version");
  if (version != kModelFormatVersion)
    throw ParseError("unsupported model format version " + std::to_string(version), 4);

  std::vector<RawTensor> tensors;
  while (!r.at_end()) tensors.push_back(read_tensor(r));

  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"conv_kernel", 3}, {"conv_bias", 1}, {"fc1_w", 2}, {"fc1_b", 1},
      {"fc2_w", 2},       {"fc2_b", 1},     {"fc3_w", 2}, {"fc3_b", 1}};
  if (tensors.size() != expected.size())
    throw DataError("model file holds " + std::to_string(tensors.size()) + " tensors, expected 8");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (tensors[i].name != expected[i].first || tensors[i].dims.size() != expected[i].second)
      throw DataError("model tensor " + std::to_string(i) + " is '" + tensors[i].name + "', expected '" +
                      expected[i].first + "' of rank " + std::to_string(expected[i].second));
  }

  const auto& k = tensors[0];
  if (k.dims[2] != 3) throw ShapeError("conv_kernel width must be 3");
  Architecture arch{k.dims[1], k.dims[0], tensors[2].dims[0], tensors[4].dims[0]};
  ParameterSet p = ParameterSet::zeros(arch);
  for (std::size_t o = 0; o < arch.conv_channels; ++o)
    for (std::size_t i = 0; i < arch.input_dim; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        p.conv_kernel[j](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
            k.values[(o * arch.input_dim + i) * 3 + j];

  std::size_t next = 1;
  bool shapes_ok = true;
  for_each_tensor(p, [&](std::string_view name, auto& t) {
    if (name.starts_with("conv_kernel")) return;
    const auto& raw = tensors[next++];
    const std::uint64_t rows = raw.dims[0];
    const std::uint64_t cols = raw.dims.size() > 1 ? raw.dims[1] : 1;
    if (rows != static_cast<std::uint64_t>(t.rows()) || cols != static_cast<std::uint64_t>(t.cols())) {
      shapes_ok = false;
      return;
    }
    std::copy(raw.values.begin(), raw.values.end(), t.data());
  });
  if (!shapes_ok) throw ShapeError("model tensors have inconsistent layer widths");
  if (!p.all_finite()) throw DataError("model file contains non-finite parameters");
  return p;
}

void save_model(const ParameterSet& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  const auto bytes = serialize_model(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

ParameterSet load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace trimmer::numerics
