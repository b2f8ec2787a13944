#pragma once

#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "bienayme/kernel/offspring.hpp"
#include "bienayme/sampler/bienayme_tree.hpp"
#include "bienayme/sampler/exact.hpp"
#include "bienayme/sampler/rng.hpp"

namespace bienayme::sampler {

// BIENAYME_THREADS if set, else the OpenMP default.
int worker_threads();

// results[i] = f(rng_i, i) with rng_i = RngStream(seed, first_stream + i).
// Replicates run on `threads` OpenMP workers; the output order (and hence
// every aggregate) does not depend on scheduling. The first exception thrown
// by any replicate is rethrown.
template <class F>
auto parallel_map(std::int64_t count, std::uint64_t seed, std::uint64_t first_stream, F&& f, int threads)
    -> std::vector<decltype(f(std::declval<RngStream&>(), std::int64_t{}))> {
  using R = decltype(f(std::declval<RngStream&>(), std::int64_t{}));
  std::vector<std::unique_ptr<R>> slots(static_cast<std::size_t>(count));
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      RngStream rng(seed, first_stream + static_cast<std::uint64_t>(i));
      slots[static_cast<std::size_t>(i)] = std::make_unique<R>(f(rng, i));
    } catch (...) {
#pragma omp critical(bienayme_batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Reference implementation: the same map, one replicate after another.
template <class F>
auto serial_map(std::int64_t count, std::uint64_t seed, std::uint64_t first_stream, F&& f)
    -> std::vector<decltype(f(std::declval<RngStream&>(), std::int64_t{}))> {
  std::vector<decltype(f(std::declval<RngStream&>(), std::int64_t{}))> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    RngStream rng(seed, first_stream + static_cast<std::uint64_t>(i));
    out.push_back(f(rng, i));
  }
  return out;
}

enum class Method { kRejection, kExact, kByType, kUnconditioned, kSpine };

Method parse_method(const std::string& name);
const char* to_string(Method m);

struct SampleRequest {
  Method method = Method::kExact;
  std::int64_t n = 1;
  std::vector<int> types;               // by-type, 0-based
  std::vector<std::int64_t> targets;    // by-type
  int root_type = 0;                    // unconditioned
  int ell = 0;                          // spine
  SampleBudget budget;
};

struct Replicate {
  std::optional<tree::MultitypeTree> tree;  // empty on overflow
  SampleStats stats;
  int mark = -1;  // spine method only
};

// Everything needed to draw replicates of one request; shared read-only.
class BatchSampler {
 public:
  BatchSampler(const kernel::OffspringFamily& family, SampleRequest request, const ExactOptions& exact = {});

  Replicate draw(RngStream& rng) const;
  const SampleRequest& request() const { return request_; }

 private:
  SampleRequest request_;
  WordSampler words_;
  std::unique_ptr<ExactSampler> exact_;
  std::unique_ptr<FlatLaw> flat_;
};

std::vector<Replicate> sample_batch(const BatchSampler& sampler, std::int64_t count, std::uint64_t seed,
                                    std::uint64_t first_stream, int threads);
std::vector<Replicate> sample_batch_serial(const BatchSampler& sampler, std::int64_t count, std::uint64_t seed,
                                           std::uint64_t first_stream);

}  // namespace bienayme::sampler
