#include "ijse/random.hpp"

#include <cmath>
#include <stdexcept>

namespace ijse {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t key, std::uint64_t value) {
  return splitmix64(key ^ splitmix64(value));
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id,
                           StreamPurpose purpose)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      key_(combine(combine(splitmix64(master_seed), stream_id),
                   static_cast<std::uint64_t>(purpose))) {
  seed_state();
}

RandomStream::RandomStream(FromKey, std::uint64_t master_seed, std::uint64_t stream_id,
                           std::uint64_t key)
    : master_seed_(master_seed), stream_id_(stream_id), key_(key) {
  seed_state();
}

void RandomStream::seed_state() {
  for (std::size_t i = 0; i < state_.size(); ++i) state_[i] = splitmix64(key_ + i * kGolden);
  // xoshiro256** must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  __extension__ using u128 = unsigned __int128;
  u128 m = static_cast<u128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<u128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

RandomStream RandomStream::substream(StreamPurpose purpose, std::uint64_t index) const {
  const std::uint64_t child = combine(combine(key_, static_cast<std::uint64_t>(purpose)), index);
  return RandomStream(FromKey{}, master_seed_, stream_id_, child);
}

}  // namespace ijse
