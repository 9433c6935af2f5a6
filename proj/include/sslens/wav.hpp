#pragma once

#include <filesystem>

#include "sslens/audio.hpp"

namespace sslens {

// Reads a mono 16-bit integer PCM RIFF/WAVE file; samples are scaled by
// 1/32768 into [-1, 1). Throws with a descriptive message on non-PCM,
// multi-channel or truncated files.
AudioSignal read_wav(const std::filesystem::path& path);

// Writes mono 16-bit PCM; samples are clamped to [-1, 1) and rounded.
void write_wav(const std::filesystem::path& path, const AudioSignal& signal);

}  // namespace sslens
