#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "sfc/channel.hpp"
#include "sfc/lfsr.hpp"

namespace sfc {

/// kShared: one register feeds every channel serially (single-SR hardware;
/// serial extraction approximates independence between channels).
/// kIndependent: one register per channel with derived seeds, for stricter
/// statistics and A/B comparison.
enum class GeneratorMode { kShared, kIndependent };

struct GeneratorConfig {
  GeneratorMode mode = GeneratorMode::kShared;
  int width = kDefaultLfsrWidth;
  std::set<int> taps = default_taps();
  std::uint32_t seed = 1;
};

/// The register file behind one controller instance. Streams are addressed
/// by fixed indices so word consumption order is replay-exact in both modes.
class GeneratorBundle {
 public:
  // Per-cycle draw order: fuzzy input references first (when present), then
  // the rule-side channels a, b, y.
  static constexpr int kStreamRefA = 0;
  static constexpr int kStreamRefB = 1;
  static constexpr int kStreamA = 2;
  static constexpr int kStreamB = 3;
  static constexpr int kStreamY = 4;
  static constexpr int kStreamCount = 5;

  explicit GeneratorBundle(const GeneratorConfig& cfg) : cfg_(cfg) { reset(); }

  const GeneratorConfig& config() const { return cfg_; }

  /// Restores every register to its seeded state.
  void reset() {
    regs_.clear();
    if (cfg_.mode == GeneratorMode::kShared) {
      regs_.push_back(lfsr_seed(cfg_.width, cfg_.taps, cfg_.seed));
    } else {
      for (int s = 0; s < kStreamCount; ++s) {
        regs_.push_back(lfsr_seed(cfg_.width, cfg_.taps,
                                  derive_seed(cfg_.seed, s, cfg_.width)));
      }
    }
  }

  Lfsr& stream(int stream_id) {
    return cfg_.mode == GeneratorMode::kShared ? regs_[0] : regs_[stream_id];
  }

  Code draw(int stream_id, const Channel& ch) {
    return draw_channel_sample(stream(stream_id), ch);
  }

 private:
  GeneratorConfig cfg_;
  std::vector<Lfsr> regs_;
};

struct CycleSamples {
  Code xa;
  Code xb;
  Code y;
};

/// One controller clock's worth of rule-side samples. In shared mode the
/// word pairs leave the single register blocked a-pair, b-pair, y-pair.
inline CycleSamples draw_cycle_samples(GeneratorBundle& gen, const Channel& a,
                                       const Channel& b, const Channel& y) {
  CycleSamples s{};
  s.xa = gen.draw(GeneratorBundle::kStreamA, a);
  s.xb = gen.draw(GeneratorBundle::kStreamB, b);
  s.y = gen.draw(GeneratorBundle::kStreamY, y);
  return s;
}

}  // namespace sfc
