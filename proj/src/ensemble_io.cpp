#include "icorr/ensemble_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace icorr {

namespace {

constexpr std::array<char, 8> kMagic{'I', 'C', 'O', 'R', 'R', 'E', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), sizeof(T))) throw std::runtime_error("truncated ensemble file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_ensemble_csv(std::ostream& os, const SimEnsemble& e) {
  os.imbue(std::locale::classic());
  os << "realization,slot,interference\n" << std::setprecision(17);
  for (int r = 0; r < e.n_realizations; ++r)
    for (int t = 0; t < e.n_slots; ++t) os << r << ',' << t << ',' << e.at(r, t) << '\n';
}

void write_ensemble_binary(std::ostream& os, const SimEnsemble& e) {
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(e.n_realizations));
  put_le<std::uint64_t>(os, static_cast<std::uint64_t>(e.n_slots));
  for (double v : e.series) put_le<double>(os, v);
}

SimEnsemble read_ensemble_binary(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("not an ensemble file");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kVersion) throw std::runtime_error("unsupported ensemble format version " + std::to_string(version));
  SimEnsemble e;
  e.n_realizations = static_cast<int>(get_le<std::uint64_t>(is));
  e.n_slots = static_cast<int>(get_le<std::uint64_t>(is));
  e.series.resize(static_cast<std::size_t>(e.n_realizations) * e.n_slots);
  for (double& v : e.series) v = get_le<double>(is);
  return e;
}

void save_ensemble(const std::string& path, const SimEnsemble& e) {
  const bool csv = ends_with(path, ".csv");
  std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (csv) write_ensemble_csv(os, e);
  else write_ensemble_binary(os, e);
  if (!os) throw std::runtime_error("write failed: " + path);
}

SimEnsemble load_ensemble_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_ensemble_binary(is);
}

}  // namespace icorr
