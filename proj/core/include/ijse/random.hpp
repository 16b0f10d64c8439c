#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ijse {

/// Purpose tags that separate the random streams used within one replication.
/// Streams are keyed by (master_seed, stream_id, purpose) so that changing the
/// number of worker threads, or the order in which replications run, cannot
/// change any draw.
enum class StreamPurpose : std::uint64_t {
  generic = 0,
  data = 1,
  baseline_fit = 2,
  mediator_chain = 3,
  outcome_chain = 4,
  bootstrap = 5,
  bootstrap_indices = 6,
  bootstrap_fit = 7,
};

/// A seeded 64-bit random stream.
///
/// The stream key is a SplitMix64 hash of (master_seed, stream_id, purpose);
/// the state is a xoshiro256** generator expanded from that key. Substreams
/// are derived from the key alone, never from the current state, so a child
/// stream is the same no matter how many values the parent has produced.
///
/// Satisfies UniformRandomBitGenerator. Streams are single-owner values: copy
/// one to fork an identical sequence, never share one between threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t master_seed, std::uint64_t stream_id = 0,
                        StreamPurpose purpose = StreamPurpose::generic);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();

  /// Standard normal variate (Marsaglia polar method, spare value cached).
  double standard_normal();

  /// Uniform integer in [0, n). Unbiased (Lemire's multiply-shift rejection).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Child stream keyed by this stream's key and (purpose, index).
  RandomStream substream(StreamPurpose purpose, std::uint64_t index = 0) const;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t key() const noexcept { return key_; }

 private:
  struct FromKey {};
  RandomStream(FromKey, std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t key);
  void seed_state();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ijse
