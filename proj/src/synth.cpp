#include "sslens/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "sslens/fft.hpp"
#include "sslens/wav.hpp"

namespace sslens {

SynthSpec SynthSpec::highband(int sample_rate) {
  SynthSpec s;
  s.sample_rate = sample_rate;
  s.shared_low_hz = 50.0;
  s.shared_high_hz = 7550.0;
  s.artefact_low_hz = 7600.0;
  s.artefact_high_hz = 0.5 * sample_rate;
  s.attack_id = "A91";
  return s;
}

SynthSpec SynthSpec::lowband(int sample_rate) {
  SynthSpec s;
  s.sample_rate = sample_rate;
  s.shared_low_hz = 900.0;
  s.shared_high_hz = 7900.0;
  s.artefact_low_hz = 100.0;
  s.artefact_high_hz = 700.0;
  s.attack_id = "A92";
  return s;
}

namespace {

// Raised-cosine band mask with `edge` Hz transitions.
double band_mask(double f, double lo, double hi, double edge = 50.0) {
  if (f <= lo - edge || f >= hi + edge) return 0.0;
  double m = 1.0;
  if (f < lo + edge) {
    m *= 0.5 * (1.0 - std::cos(std::numbers::pi * (f - (lo - edge)) / (2.0 * edge)));
  }
  if (f > hi - edge) {
    m *= 0.5 * (1.0 - std::cos(std::numbers::pi * ((hi + edge) - f) / (2.0 * edge)));
  }
  return m;
}

}  // namespace

AudioSignal synth_utterance(const SynthSpec& spec, TrialKey key,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n =
      static_cast<int>(std::lround(spec.duration_seconds * spec.sample_rate));
  const std::size_t nfft = next_pow2(static_cast<std::size_t>(n));
  const std::size_t half = nfft / 2;

  // Per-utterance random spectral envelope shared by both classes: overall
  // gain, tilt, and a few resonant bumps.
  const double gain_db = -6.0 + 12.0 * unit(rng);
  const double tilt_db_per_octave = -3.0 + 6.0 * unit(rng);
  struct Bump { double center, width, amp_db; };
  std::vector<Bump> bumps(3);
  const double lo = spec.shared_low_hz + 100.0;
  const double hi = std::min(spec.shared_high_hz - 100.0, 6000.0);
  for (auto& b : bumps) {
    b.center = lo * std::pow(hi / lo, unit(rng));
    b.width = b.center / 5.0;
    b.amp_db = 8.0 * unit(rng);
  }

  const double art_db =
      spec.artefact_db + (key == TrialKey::Spoof ? spec.spoof_extra_db : 0.0);
  const double art_level = std::pow(10.0, art_db / 20.0);

  std::vector<double> sigma_shared(half + 1), sigma_art(half + 1);
  double s2 = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double f = static_cast<double>(k) * spec.sample_rate / nfft;
    double env_db = gain_db + tilt_db_per_octave * std::log2(std::max(f, 1.0) / 1000.0);
    for (const auto& b : bumps) {
      const double z = (f - b.center) / b.width;
      env_db += b.amp_db * std::exp(-0.5 * z * z);
    }
    sigma_shared[k] = std::pow(10.0, env_db / 20.0) *
                      band_mask(f, spec.shared_low_hz, spec.shared_high_hz);
    s2 += (k == 0 || k == half ? 1.0 : 2.0) * sigma_shared[k] * sigma_shared[k];
  }
  // The artefact level is relative to the average shared density, so the
  // overall RMS normalization below leaves the class separation intact.
  const double shared_ref = std::sqrt(s2 / static_cast<double>(nfft));
  for (std::size_t k = 0; k <= half; ++k) {
    const double f = static_cast<double>(k) * spec.sample_rate / nfft;
    sigma_art[k] = art_level * shared_ref *
                   band_mask(f, spec.artefact_low_hz,
                             std::min(spec.artefact_high_hz,
                                      0.5 * spec.sample_rate),
                             20.0);
  }
  // Scale for a time-domain RMS near 0.05; derived from the shared spectrum
  // only so both classes see the same gain.
  const double scale = 0.05 * nfft / std::sqrt(s2 * nfft / 2.0);

  Eigen::VectorXcd spectrum(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double sigma =
        scale * std::hypot(sigma_shared[k], sigma_art[k]);
    const double a = gauss(rng);
    const double b = gauss(rng);
    if (k == 0 || k == half) {
      spectrum[static_cast<Eigen::Index>(k)] = {sigma * a, 0.0};
    } else {
      const double s = sigma / std::numbers::sqrt2;
      spectrum[static_cast<Eigen::Index>(k)] = {s * a, s * b};
    }
  }

  AudioSignal out;
  out.sample_rate = spec.sample_rate;
  out.samples = irfft(spectrum, nfft).head(n).cwiseMax(-0.999).cwiseMin(0.999);
  return out;
}

Corpus generate_corpus(const SynthSpec& spec,
                       const std::filesystem::path& out_dir, int per_class,
                       std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "audio");

  Corpus corpus;
  corpus.audio_dir = out_dir / "audio";

  auto make_partition = [&](Partition part, const char* tag,
                            std::uint64_t salt) {
    std::vector<ProtocolEntry> entries;
    for (int cls = 0; cls < 2; ++cls) {
      const TrialKey key = cls == 0 ? TrialKey::Bonafide : TrialKey::Spoof;
      for (int i = 0; i < per_class; ++i) {
        ProtocolEntry e;
        e.speaker_id = "SYN_0001";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "SYN_%s_%c%05d", tag,
                      cls == 0 ? 'B' : 'S', i + 1);
        e.utterance_id = buf;
        e.key = key;
        e.attack_id = key == TrialKey::Bonafide ? "bonafide" : spec.attack_id;
        e.partition = part;
        const std::uint64_t utt_seed =
            seed ^ (salt * 0x9E3779B97F4A7C15ULL) ^
            (static_cast<std::uint64_t>(i * 2 + cls) * 0xBF58476D1CE4E5B9ULL);
        write_wav(corpus.wav_path(e), synth_utterance(spec, key, utt_seed));
        entries.push_back(std::move(e));
      }
    }
    return entries;
  };

  corpus.train = make_partition(Partition::Train, "T", 1);
  corpus.eval = make_partition(Partition::Eval, "E", 2);

  auto write_protocol = [&](const fs::path& path,
                            const std::vector<ProtocolEntry>& entries) {
    std::ofstream os(path);
    for (const auto& e : entries) {
      os << e.speaker_id << ' ' << e.utterance_id << " - "
         << (e.key == TrialKey::Bonafide ? "-" : e.attack_id) << ' '
         << (e.key == TrialKey::Bonafide ? "bonafide" : "spoof") << '\n';
    }
  };
  write_protocol(out_dir / "train.txt", corpus.train);
  write_protocol(out_dir / "eval.txt", corpus.eval);
  return corpus;
}

}  // namespace sslens
