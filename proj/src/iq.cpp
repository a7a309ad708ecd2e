#include "mig/iq.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mig {

namespace {

uint32_t read_u32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error("IQ file truncated: " + path);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

void write_u32(std::ostream& os, uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  os.write(b, 4);
}

float read_f32(std::istream& is, const std::string& path) {
  uint32_t bits = read_u32(is, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

void write_f32(std::ostream& os, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(os, bits);
}

void check_dims(uint64_t pulses, uint64_t cells, const std::string& path) {
  if (pulses == 0 || cells == 0)
    throw std::runtime_error("IQ cube has empty dimensions: " + path);
  if (pulses * cells > (1ull << 28))
    throw std::runtime_error("IQ cube is implausibly large (" + std::to_string(pulses) + "x" +
                             std::to_string(cells) + "): " + path);
}

}  // namespace

ComplexVector IqCube::cell(uint32_t c) const {
  if (c >= cells) throw std::out_of_range("IqCube::cell: index out of range");
  ComplexVector y(pulses);
  for (uint32_t p = 0; p < pulses; ++p) {
    const std::complex<float> v = at(p, c);
    y[p] = Complex(v.real(), v.imag());
  }
  return y;
}

IqCube read_migiq1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open IQ file: " + path);
  char magic[6];
  if (!is.read(magic, 6) || std::memcmp(magic, "MIGIQ1", 6) != 0)
    throw std::runtime_error("not a MIGIQ1 file: " + path);
  IqCube cube;
  cube.pulses = read_u32(is, path);
  cube.cells = read_u32(is, path);
  check_dims(cube.pulses, cube.cells, path);
  cube.samples.resize(size_t(cube.pulses) * cube.cells);
  for (auto& s : cube.samples) {
    const float re = read_f32(is, path);
    const float im = read_f32(is, path);
    s = {re, im};
  }
  is.peek();
  if (!is.eof()) throw std::runtime_error("IQ file has trailing bytes: " + path);
  return cube;
}

void write_migiq1(const IqCube& cube, const std::string& path) {
  if (cube.samples.size() != size_t(cube.pulses) * cube.cells)
    throw std::invalid_argument("write_migiq1: sample buffer does not match dimensions");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open IQ file for writing: " + path);
  os.write("MIGIQ1", 6);
  write_u32(os, cube.pulses);
  write_u32(os, cube.cells);
  for (const auto& s : cube.samples) {
    write_f32(os, s.real());
    write_f32(os, s.imag());
  }
  if (!os) throw std::runtime_error("failed writing IQ file: " + path);
}

IqCube read_iq_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open IQ file: " + path);
  struct Entry {
    uint32_t p, c;
    std::complex<float> v;
  };
  std::vector<Entry> entries;
  uint64_t max_p = 0, max_c = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.find("pulse") != std::string::npos) continue;  // header
    std::istringstream ss(line);
    long long p, c;
    double re, im;
    char comma;
    if (!(ss >> p >> comma >> c >> comma >> re >> comma >> im) || p < 0 || c < 0)
      throw std::runtime_error("bad CSV row at line " + std::to_string(lineno) + ": " + path);
    entries.push_back({uint32_t(p), uint32_t(c), {float(re), float(im)}});
    max_p = std::max<uint64_t>(max_p, uint64_t(p));
    max_c = std::max<uint64_t>(max_c, uint64_t(c));
  }
  if (entries.empty()) throw std::runtime_error("IQ CSV has no data rows: " + path);
  IqCube cube;
  cube.pulses = uint32_t(max_p + 1);
  cube.cells = uint32_t(max_c + 1);
  check_dims(cube.pulses, cube.cells, path);
  if (entries.size() != size_t(cube.pulses) * cube.cells)
    throw std::runtime_error("IQ CSV is not a dense pulse x cell grid: " + path);
  cube.samples.assign(size_t(cube.pulses) * cube.cells, {0.0f, 0.0f});
  std::vector<bool> seen(cube.samples.size(), false);
  for (const auto& e : entries) {
    const size_t idx = size_t(e.p) * cube.cells + e.c;
    if (seen[idx])
      throw std::runtime_error("IQ CSV repeats pulse " + std::to_string(e.p) + ", cell " +
                               std::to_string(e.c) + ": " + path);
    seen[idx] = true;
    cube.samples[idx] = e.v;
  }
  return cube;
}

IqCube load_iq(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open IQ file: " + path);
  char magic[6] = {};
  probe.read(magic, 6);
  probe.close();
  if (std::memcmp(magic, "MIGIQ1", 6) == 0) return read_migiq1(path);
  return read_iq_csv(path);
}

}  // namespace mig
