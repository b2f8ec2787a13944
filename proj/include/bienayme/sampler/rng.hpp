#pragma once

#include <cstdint>
#include <random>

namespace bienayme::sampler {

// Independent reproducible streams from one master seed.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::mt19937_64& engine() { return engine_; }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  // Uniform on {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

struct SampleBudget {
  std::int64_t max_vertices = 1'000'000;
  std::int64_t max_attempts = 10'000'000;
};

// Accumulated by samplers when a pointer is supplied.
struct SampleStats {
  std::int64_t attempts = 0;
  std::int64_t overflows = 0;
};

}  // namespace bienayme::sampler
