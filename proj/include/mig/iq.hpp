#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mig/types.hpp"

namespace mig {

// Pulse-major IQ sample cube. Samples are stored as complex<float> to match
// the wire format exactly, so binary round trips are bit-identical.
struct IqCube {
  uint32_t pulses = 0;
  uint32_t cells = 0;
  std::vector<std::complex<float>> samples;  // index p * cells + c

  std::complex<float> at(uint32_t p, uint32_t c) const { return samples[size_t(p) * cells + c]; }
  // One range cell as a double-precision pulse train.
  ComplexVector cell(uint32_t c) const;
};

// Binary format: magic "MIGIQ1", u32 pulses, u32 cells (little endian), then
// pulses*cells little-endian f32 (re, im) pairs in pulse-major order.
IqCube read_migiq1(const std::string& path);
void write_migiq1(const IqCube& cube, const std::string& path);

// CSV rows "pulse,cell,re,im" (header optional). Every (pulse, cell) pair
// must appear exactly once; dimensions are taken from the largest indices.
IqCube read_iq_csv(const std::string& path);

// Dispatches on the file's magic bytes, falling back to CSV.
IqCube load_iq(const std::string& path);

}  // namespace mig
