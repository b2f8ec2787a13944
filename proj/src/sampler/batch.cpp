#include "bienayme/sampler/batch.hpp"

#include <cstdlib>

#include "bienayme/errors.hpp"
#include "bienayme/sampler/spine.hpp"

namespace bienayme::sampler {

int worker_threads() {
  if (const char* env = std::getenv("BIENAYME_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw Error(ErrorKind::kConfig, "BIENAYME_THREADS must be a positive integer");
  }
  return omp_get_max_threads();
}

Method parse_method(const std::string& name) {
  if (name == "rejection") return Method::kRejection;
  if (name == "exact") return Method::kExact;
  if (name == "by-type") return Method::kByType;
  if (name == "unconditioned") return Method::kUnconditioned;
  if (name == "spine") return Method::kSpine;
  throw Error(ErrorKind::kConfig, "unknown method '" + name + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::kRejection: return "rejection";
    case Method::kExact: return "exact";
    case Method::kByType: return "by-type";
    case Method::kUnconditioned: return "unconditioned";
    case Method::kSpine: return "spine";
  }
  return "?";
}

BatchSampler::BatchSampler(const kernel::OffspringFamily& family, SampleRequest request, const ExactOptions& exact)
    : request_(std::move(request)), words_(family) {
  if (request_.method == Method::kExact) {
    ExactOptions opts = exact;
    opts.budget = request_.budget;
    exact_ = std::make_unique<ExactSampler>(family, request_.n, opts);
  }
  if (request_.method == Method::kSpine) flat_ = std::make_unique<FlatLaw>(family);
}

Replicate BatchSampler::draw(RngStream& rng) const {
  Replicate r;
  switch (request_.method) {
    case Method::kRejection:
      r.tree = sample_conditioned_rejection(words_, request_.n, rng, request_.budget, &r.stats);
      break;
    case Method::kExact:
      r.tree = exact_->sample(request_.n, rng, &r.stats);
      break;
    case Method::kByType:
      r.tree = sample_by_type(words_, request_.types, request_.targets, rng, request_.budget, &r.stats);
      break;
    case Method::kUnconditioned: {
      r.stats.attempts = 1;
      auto u = sample_unconditioned(words_, request_.root_type, rng, request_.budget);
      if (auto* t = std::get_if<tree::MultitypeTree>(&u))
        r.tree = std::move(*t);
      else
        r.stats.overflows = 1;
      break;
    }
    case Method::kSpine: {
      r.stats.attempts = 1;
      auto s = sample_spine_tree(*flat_, request_.ell, rng, request_.budget);
      if (auto* m = std::get_if<MarkedFlatTree>(&s)) {
        r.mark = m->mark;
        r.tree = std::move(m->tree);
      } else {
        r.stats.overflows = 1;
      }
      break;
    }
  }
  return r;
}

std::vector<Replicate> sample_batch(const BatchSampler& sampler, std::int64_t count, std::uint64_t seed,
                                    std::uint64_t first_stream, int threads) {
  return parallel_map(
      count, seed, first_stream, [&](RngStream& rng, std::int64_t) { return sampler.draw(rng); }, threads);
}

std::vector<Replicate> sample_batch_serial(const BatchSampler& sampler, std::int64_t count, std::uint64_t seed,
                                           std::uint64_t first_stream) {
  return serial_map(count, seed, first_stream, [&](RngStream& rng, std::int64_t) { return sampler.draw(rng); });
}

}  // namespace bienayme::sampler
