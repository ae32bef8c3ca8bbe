#include "aptt/io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "aptt/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts are not supported");

namespace aptt {

namespace {

void check_uniform(const std::vector<int>& dims, const std::string& path) {
  for (int n : dims)
    if (n != dims.front()) throw IoError("field dump requires uniform mode sizes: " + path);
}

std::string read_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("truncated field dump: " + path);
  return line;
}

}  // namespace

void write_dense_field(const std::string& path, const DenseTensor& t, int dim) {
  check_uniform(t.dims(), path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write field dump: " + path);
  out << "APTT1 " << dim << " " << t.dims().front() << " " << t.order() << "\n";
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!out) throw IoError("write failure on field dump: " + path);
}

DenseTensor read_dense_field(const std::string& path, int* dim_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open field dump: " + path);
  std::istringstream hdr(read_line(in, path));
  std::string magic;
  int dim = 0, m = 0, order = 0;
  hdr >> magic >> dim >> m >> order;
  if (magic != "APTT1" || dim <= 0 || m <= 0 || order <= 0)
    throw IoError("bad field dump header: " + path);
  DenseTensor t(std::vector<int>(static_cast<std::size_t>(order), m));
  in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(t.size() * sizeof(double)))
    throw IoError("truncated field dump: " + path);
  if (dim_out) *dim_out = dim;
  return t;
}

void write_tt_field(const std::string& path, const TtTensor& t, int dim) {
  check_uniform(t.dims(), path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write train dump: " + path);
  out << "APTT1 TT " << dim << " " << t.core(0).n << " " << t.order() << "\n";
  out << 1;
  for (int i = 0; i < t.order(); ++i) out << " " << t.core(i).r_right;
  out << "\n";
  for (int i = 0; i < t.order(); ++i) {
    const TtCore& c = t.core(i);
    out.write(reinterpret_cast<const char*>(c.v.data()),
              static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failure on train dump: " + path);
}

TtTensor read_tt_field(const std::string& path, int* dim_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open train dump: " + path);
  std::istringstream hdr(read_line(in, path));
  std::string magic, tt;
  int dim = 0, m = 0, order = 0;
  hdr >> magic >> tt >> dim >> m >> order;
  if (magic != "APTT1" || tt != "TT" || dim <= 0 || m <= 0 || order <= 0)
    throw IoError("bad train dump header: " + path);
  std::istringstream rline(read_line(in, path));
  std::vector<int> ranks(static_cast<std::size_t>(order) + 1);
  for (auto& r : ranks) {
    if (!(rline >> r) || r <= 0) throw IoError("bad rank line in train dump: " + path);
  }
  if (ranks.front() != 1 || ranks.back() != 1)
    throw IoError("boundary ranks must be 1 in train dump: " + path);
  std::vector<TtCore> cores;
  cores.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    TtCore c(ranks[static_cast<std::size_t>(i)], m, ranks[static_cast<std::size_t>(i) + 1]);
    in.read(reinterpret_cast<char*>(c.v.data()),
            static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(c.size() * sizeof(double)))
      throw IoError("truncated train dump: " + path);
    cores.push_back(std::move(c));
  }
  if (dim_out) *dim_out = dim;
  return TtTensor(std::move(cores));
}

}  // namespace aptt
