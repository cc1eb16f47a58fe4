#include "vta/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "vta/errors.hpp"

namespace vta::wav {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (uint32_t(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return b[0] | (b[1] << 8);
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {char(v & 0xff), char((v >> 8) & 0xff)};
  out.write(b, 2);
}

std::string read_tag(std::istream& in) {
  char t[4];
  in.read(t, 4);
  return in ? std::string(t, 4) : std::string();
}

}  // namespace

formant::Waveform read_wav(std::istream& in) {
  if (read_tag(in) != "RIFF") throw ParseError("wav: missing RIFF header");
  read_u32(in);  // riff size
  if (read_tag(in) != "WAVE") throw ParseError("wav: not a WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  formant::Waveform w;

  while (in) {
    std::string tag = read_tag(in);
    if (!in) break;
    uint32_t size = read_u32(in);
    if (tag == "fmt ") {
      format = read_u16(in);
      channels = read_u16(in);
      rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (size > 16) in.ignore(size - 16);
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw ParseError("wav: data chunk before fmt");
      if (format != 1) throw ParseError("wav: only PCM supported");
      if (channels != 1) throw ParseError("wav: only mono supported");
      if (bits != 16) throw ParseError("wav: only 16-bit supported");
      uint32_t n = size / 2;
      w.samples.resize(n);
      std::vector<char> raw(size);
      in.read(raw.data(), size);
      if (!in) throw ParseError("wav: truncated data chunk");
      for (uint32_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(uint8_t(raw[2 * i]) |
                                         (uint8_t(raw[2 * i + 1]) << 8));
        w.samples[i] = s / 32768.0;
      }
      w.fs = rate;
      return w;
    } else {
      in.ignore(size + (size & 1));  // chunks are word-aligned
    }
  }
  throw ParseError("wav: no data chunk");
}

formant::Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open wav file: " + path.string());
  try {
    return read_wav(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_wav(const formant::Waveform& w, std::ostream& out) {
  if (!(w.fs > 0.0)) throw ValidationError("write_wav: bad sample rate");
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  const double target = std::pow(10.0, -3.0 / 20.0);  // -3 dBFS
  const double scale = peak > 0.0 ? target / peak : 0.0;

  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  out.write("RIFF", 4);
  write_u32(out, 36 + 2 * n);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  uint32_t rate = static_cast<uint32_t>(std::lround(w.fs));
  write_u32(out, rate);
  write_u32(out, rate * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, 2 * n);
  for (double s : w.samples) {
    long v = std::lround(s * scale * 32767.0);
    v = std::clamp(v, -32768l, 32767l);
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
}

void write_wav(const formant::Waveform& w, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write wav file: " + path.string());
  write_wav(w, out);
}

}  // namespace vta::wav
