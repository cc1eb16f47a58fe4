#pragma once

#include <filesystem>
#include <iosfwd>

#include "vta/formant.hpp"

namespace vta::wav {

// PCM 16-bit mono RIFF only; samples scaled to [-1, 1).
formant::Waveform read_wav(std::istream& in);
formant::Waveform read_wav(const std::filesystem::path& path);

// 16-bit mono, peak-normalized to -3 dBFS (silence stays silent).
void write_wav(const formant::Waveform& w, std::ostream& out);
void write_wav(const formant::Waveform& w, const std::filesystem::path& path);

}  // namespace vta::wav
