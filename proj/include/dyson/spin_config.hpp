#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyson {

// Closed integer interval of lattice sites.
struct SiteInterval {
  int lo = 0;
  int hi = -1;

  int size() const { return hi < lo ? 0 : hi - lo + 1; }
  bool contains(int s) const { return lo <= s && s <= hi; }
  bool operator==(const SiteInterval&) const = default;

  std::string describe() const {
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  }
};

// Spin configuration on a window of at most 32 sites, packed into bits.
// Bit (site - lo) set means spin +1 at that site.  The packing doubles as
// the configuration index used by exact measures and binary dumps.
class SpinConfig {
 public:
  SpinConfig(const SiteInterval& window, std::uint32_t bits)
      : window_(window), bits_(bits) {
    if (window.size() < 0 || window.size() > 32)
      throw std::invalid_argument("SpinConfig: window must hold 0..32 sites");
    if (window.size() < 32 && (bits >> window.size()) != 0)
      throw std::invalid_argument("SpinConfig: bits outside window");
  }

  static SpinConfig all_plus(const SiteInterval& w) {
    return SpinConfig(w, w.size() >= 32 ? ~0u : (1u << w.size()) - 1u);
  }
  static SpinConfig all_minus(const SiteInterval& w) { return SpinConfig(w, 0); }

  const SiteInterval& window() const { return window_; }
  std::uint32_t bits() const { return bits_; }

  int spin(int site) const {
    if (!window_.contains(site))
      throw std::out_of_range("SpinConfig::spin: site " + std::to_string(site) +
                              " outside window " + window_.describe());
    return (bits_ >> (site - window_.lo)) & 1u ? 1 : -1;
  }

  SpinConfig flipped(int site) const {
    if (!window_.contains(site))
      throw std::out_of_range("SpinConfig::flipped: site outside window");
    return SpinConfig(window_, bits_ ^ (1u << (site - window_.lo)));
  }

  SpinConfig negated() const {
    std::uint32_t mask = window_.size() >= 32 ? ~0u : (1u << window_.size()) - 1u;
    return SpinConfig(window_, bits_ ^ mask);
  }

 private:
  SiteInterval window_;
  std::uint32_t bits_;
};

}  // namespace dyson
