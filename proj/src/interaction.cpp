#include "dyson/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dyson/digest.hpp"

namespace dyson {

namespace {

std::uint64_t encode_pair(int a, int b) {
  if (a > b) std::swap(a, b);
  auto ua = static_cast<std::uint64_t>(static_cast<std::int64_t>(a) + (1LL << 31));
  auto ub = static_cast<std::uint64_t>(static_cast<std::int64_t>(b) + (1LL << 31));
  return (ua << 32) | ub;
}

}  // namespace

std::int64_t cross_pair_rank(int i, int j) {
  if (i < 1 || j < 0)
    throw std::invalid_argument("cross_pair_rank: need i >= 1, j >= 0");
  std::int64_t r = std::max(i, j);
  std::int64_t base = (r - 1) * r;
  if (i < r) {
    if (j != r) throw std::logic_error("cross_pair_rank: internal radius error");
    return base + i;
  }
  return base + r + j;  // i == r, j in 0..r
}

CrossPair cross_pair_at(std::int64_t rank) {
  if (rank < 1) throw std::invalid_argument("cross_pair_at: need rank >= 1");
  // smallest r with r(r+1) >= rank
  auto r = static_cast<std::int64_t>(std::floor(
      0.5 * (std::sqrt(4.0 * static_cast<double>(rank) + 1.0) - 1.0)));
  while (r * (r + 1) < rank) ++r;
  while (r > 1 && (r - 1) * r >= rank) --r;
  std::int64_t offset = rank - (r - 1) * r;  // 1..2r
  if (offset <= r - 1)
    return {static_cast<int>(offset), static_cast<int>(r)};
  return {static_cast<int>(r), static_cast<int>(offset - r)};
}

std::vector<CrossPair> cross_pairs(std::int64_t count) {
  if (count < 0) throw std::invalid_argument("cross_pairs: need count >= 0");
  std::vector<CrossPair> out;
  out.reserve(count);
  for (int r = 1; static_cast<std::int64_t>(out.size()) < count; ++r) {
    for (int i = 1; i < r && static_cast<std::int64_t>(out.size()) < count; ++i)
      out.push_back({i, r});
    for (int j = 0; j <= r && static_cast<std::int64_t>(out.size()) < count; ++j)
      out.push_back({r, j});
  }
  return out;
}

InteractionMask InteractionMask::intermediate(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("InteractionMask::intermediate: need k >= 0");
  InteractionMask m(Mode::intermediate);
  m.k_ = k;
  return m;
}

InteractionMask InteractionMask::pair_list(std::vector<std::pair<int, int>> pairs) {
  InteractionMask m(Mode::pair_list);
  m.pairs_.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a == b)
      throw std::invalid_argument("InteractionMask::pair_list: pair needs two distinct sites");
    m.pairs_.push_back(encode_pair(a, b));
  }
  std::sort(m.pairs_.begin(), m.pairs_.end());
  m.pairs_.erase(std::unique(m.pairs_.begin(), m.pairs_.end()), m.pairs_.end());
  return m;
}

bool InteractionMask::active(int a, int b) const {
  if (a == b) throw std::invalid_argument("InteractionMask::active: need two distinct sites");
  switch (mode_) {
    case Mode::full:
      return true;
    case Mode::half_right:
      return a >= 0 && b >= 0;
    case Mode::half_left:
      return a < 0 && b < 0;
    case Mode::intermediate: {
      bool left_a = a < 0, left_b = b < 0;
      if (left_a == left_b) return true;  // same side of the cut
      int i = -std::min(a, b);
      int j = std::max(a, b);
      return cross_pair_rank(i, j) <= k_;
    }
    case Mode::pair_list:
      return std::binary_search(pairs_.begin(), pairs_.end(), encode_pair(a, b));
  }
  return false;
}

std::string InteractionMask::id() const {
  switch (mode_) {
    case Mode::full: return "full";
    case Mode::half_right: return "half-right";
    case Mode::half_left: return "half-left";
    case Mode::intermediate: return "inter-" + std::to_string(k_);
    case Mode::pair_list: return "pairs-" + std::to_string(pairs_.size());
  }
  return "?";
}

std::uint32_t InteractionMask::dump_id() const {
  switch (mode_) {
    case Mode::full: return 0;
    case Mode::half_right: return 1;
    case Mode::half_left: return 2;
    case Mode::intermediate: return 1000 + static_cast<std::uint32_t>(k_);
    case Mode::pair_list:
      // outside the reserved ranges above
      return 3'000'000'000u + static_cast<std::uint32_t>(pairs_.size());
  }
  return ~0u;
}

std::uint64_t InteractionMask::digest() const {
  std::uint64_t h = fnv1a64(id());
  for (std::uint64_t p : pairs_) h = fnv1a64_bytes(&p, sizeof p, h);
  return h;
}

BoundaryCondition BoundaryCondition::all_plus(int extent) {
  if (extent < 1) throw std::invalid_argument("BoundaryCondition::all_plus: need extent >= 1");
  BoundaryCondition bc(Kind::plus);
  bc.left_.assign(extent, 1);
  bc.right_.assign(extent, 1);
  return bc;
}

BoundaryCondition BoundaryCondition::all_minus(int extent) {
  if (extent < 1) throw std::invalid_argument("BoundaryCondition::all_minus: need extent >= 1");
  BoundaryCondition bc(Kind::minus);
  bc.left_.assign(extent, -1);
  bc.right_.assign(extent, -1);
  return bc;
}

BoundaryCondition BoundaryCondition::fixed(std::vector<int> left, std::vector<int> right) {
  for (const auto& v : {left, right})
    for (int s : v)
      if (s != 1 && s != -1)
        throw std::invalid_argument("BoundaryCondition::fixed: spins must be +-1");
  BoundaryCondition bc(Kind::fixed);
  bc.left_ = std::move(left);
  bc.right_ = std::move(right);
  return bc;
}

int BoundaryCondition::exterior_spin(int site, const SiteInterval& volume) const {
  if (volume.contains(site))
    throw std::out_of_range("BoundaryCondition::exterior_spin: site is interior");
  if (site < volume.lo) {
    int t = volume.lo - 1 - site;
    if (t < static_cast<int>(left_.size())) return left_[t];
  } else {
    int t = site - volume.hi - 1;
    if (t < static_cast<int>(right_.size())) return right_[t];
  }
  throw std::out_of_range("BoundaryCondition::exterior_spin: site beyond declared extent");
}

std::string BoundaryCondition::id() const {
  switch (kind_) {
    case Kind::free: return "free";
    case Kind::plus: return "plus-" + std::to_string(left_.size());
    case Kind::minus: return "minus-" + std::to_string(left_.size());
    case Kind::fixed:
      return "fixed-L" + std::to_string(left_.size()) + "R" + std::to_string(right_.size());
  }
  return "?";
}

std::uint64_t BoundaryCondition::digest() const {
  std::uint64_t h = fnv1a64(id());
  for (const auto* v : {&left_, &right_})
    for (int s : *v) h = fnv1a64_bytes(&s, sizeof s, h);
  return h;
}

HamiltonianValue hamiltonian(const SpinConfig& sigma, const BoundaryCondition& bc,
                             const InteractionMask& mask, double beta,
                             const CouplingFamily& J) {
  if (!(beta >= 0.0)) throw std::invalid_argument("hamiltonian: need beta >= 0");
  const SiteInterval vol = sigma.window();
  double s = 0.0;
  for (int a = vol.lo; a <= vol.hi; ++a)
    for (int b = a + 1; b <= vol.hi; ++b)
      if (mask.active(a, b)) s += J.j(b - a) * sigma.spin(a) * sigma.spin(b);
  HamiltonianValue out;
  if (bc.kind() != BoundaryCondition::Kind::free) {
    for (int a = vol.lo; a <= vol.hi; ++a) {
      for (int t = 0; t < bc.left_extent(); ++t) {
        int b = vol.lo - 1 - t;
        if (mask.active(a, b))
          s += J.j(a - b) * sigma.spin(a) * bc.exterior_spin(b, vol);
      }
      for (int t = 0; t < bc.right_extent(); ++t) {
        int b = vol.hi + 1 + t;
        if (mask.active(a, b))
          s += J.j(b - a) * sigma.spin(a) * bc.exterior_spin(b, vol);
      }
      // everything past the declared extent is dropped; bound it
      out.truncation_bound +=
          beta * (J.tail(a - vol.lo + bc.left_extent() + 1).hi +
                  J.tail(vol.hi + bc.right_extent() + 1 - a).hi);
    }
  }
  out.value = -beta * s;
  return out;
}

PotentialValue potential_phi(const SpinConfig& x, const CouplingFamily& J) {
  if (x.window().lo != 0)
    throw std::invalid_argument("potential_phi: window must start at site 0");
  int depth = x.window().hi;
  double s = 0.0;
  for (int n = 1; n <= depth; ++n) s += J.j(n) * x.spin(n);
  return {x.spin(0) * s, J.tail(depth + 1).hi};
}

Interval suac_norm(const InteractionMask& mask, double beta, const CouplingFamily& J) {
  if (!(beta >= 0.0)) throw std::invalid_argument("suac_norm: need beta >= 0");
  if (mask.mode() != InteractionMask::Mode::pair_list)
    return J.total(1e-13).scaled(2.0 * beta);
  // finite pair list: the sup over sites is an exact finite max
  std::map<int, double> site_sum;
  for (auto [a, b] : mask.pairs()) {
    double v = J.j(std::abs(b - a));
    site_sum[a] += v;
    site_sum[b] += v;
  }
  double sup = 0.0;
  for (auto& [site, s] : site_sum) sup = std::max(sup, s);
  double fuzz = 1e-14 * (1.0 + sup);
  return Interval{sup - fuzz, sup + fuzz}.scaled(beta);
}

std::vector<std::pair<int, int>> InteractionMask::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(pairs_.size());
  for (std::uint64_t key : pairs_) {
    int a = static_cast<int>(static_cast<std::int64_t>(key >> 32) - (1LL << 31));
    int b = static_cast<int>(static_cast<std::int64_t>(key & 0xffffffffULL) - (1LL << 31));
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace dyson
