#include "sslens/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace sslens {

namespace {

template <typename T>
T read_le(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

template <typename T>
void write_le(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());

  char tag[5] = {0};
  is.read(tag, 4);
  if (!is || std::strcmp(tag, "RIFF") != 0) {
    throw std::runtime_error(path.string() + ": not a RIFF file");
  }
  read_le<std::uint32_t>(is);  // riff size
  is.read(tag, 4);
  if (!is || std::strcmp(tag, "WAVE") != 0) {
    throw std::runtime_error(path.string() + ": not a WAVE file");
  }

  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::vector<std::int16_t> pcm;
  bool have_data = false;

  while (is.read(tag, 4)) {
    const std::uint32_t chunk_size = read_le<std::uint32_t>(is);
    if (!is) break;
    if (std::strcmp(tag, "fmt ") == 0) {
      format = read_le<std::uint16_t>(is);
      channels = read_le<std::uint16_t>(is);
      sample_rate = read_le<std::uint32_t>(is);
      read_le<std::uint32_t>(is);  // byte rate
      read_le<std::uint16_t>(is);  // block align
      bits = read_le<std::uint16_t>(is);
      if (chunk_size > 16) is.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::strcmp(tag, "data") == 0) {
      const std::size_t count = chunk_size / 2;
      pcm.resize(count);
      is.read(reinterpret_cast<char*>(pcm.data()),
              static_cast<std::streamsize>(count * 2));
      if (static_cast<std::size_t>(is.gcount()) != count * 2) {
        throw std::runtime_error(path.string() + ": truncated data chunk");
      }
      have_data = true;
    } else {
      is.ignore(chunk_size + (chunk_size % 2));
    }
  }
  if (!have_fmt || !have_data) {
    throw std::runtime_error(path.string() + ": missing fmt or data chunk");
  }
  if (format != 1) {
    throw std::runtime_error(path.string() + ": not integer PCM (format " +
                             std::to_string(format) + ")");
  }
  if (channels != 1) {
    throw std::runtime_error(path.string() + ": expected mono, got " +
                             std::to_string(channels) + " channels");
  }
  if (bits != 16) {
    throw std::runtime_error(path.string() + ": expected 16-bit PCM, got " +
                             std::to_string(bits) + " bits");
  }

  AudioSignal out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples = Eigen::VectorXd(static_cast<Eigen::Index>(pcm.size()));
  for (std::size_t i = 0; i < pcm.size(); ++i) {
    out.samples[static_cast<Eigen::Index>(i)] = pcm[i] / 32768.0;
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const std::uint32_t num_samples =
      static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_bytes = num_samples * 2;

  os.write("RIFF", 4);
  write_le<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_le<std::uint32_t>(os, 16);
  write_le<std::uint16_t>(os, 1);  // PCM
  write_le<std::uint16_t>(os, 1);  // mono
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(signal.sample_rate));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  write_le<std::uint16_t>(os, 2);
  write_le<std::uint16_t>(os, 16);
  os.write("data", 4);
  write_le<std::uint32_t>(os, data_bytes);
  for (Eigen::Index i = 0; i < signal.samples.size(); ++i) {
    const double scaled = std::round(signal.samples[i] * 32768.0);
    const auto s = static_cast<std::int16_t>(
        std::clamp(scaled, -32768.0, 32767.0));
    write_le<std::int16_t>(os, s);
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sslens
