// Times the OpenMP batch kernels against their serial references and checks
// that both produce identical output.
//   bench_batch [presets_dir] [threads]

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>

#include "bienayme/analysis/crt.hpp"
#include "bienayme/kernel/family_io.hpp"
#include "bienayme/sampler/batch.hpp"

using namespace bienayme;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool same) {
  std::cout << std::left << std::setw(34) << name << std::right << std::fixed << std::setprecision(3)
            << std::setw(10) << serial << std::setw(10) << parallel << std::setw(9) << serial / parallel
            << (same ? "   identical" : "   MISMATCH") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string presets = argc > 1 ? argv[1] : "presets";
  const int threads = argc > 2 ? std::atoi(argv[2]) : sampler::worker_threads();
  std::cout << "threads: " << threads << "\n"
            << std::left << std::setw(34) << "kernel" << std::right << std::setw(10) << "serial" << std::setw(10)
            << "parallel" << std::setw(9) << "speedup\n";
  bool ok = true;

  struct Case {
    const char* family;
    sampler::Method method;
    std::int64_t n;
    std::int64_t count;
  };
  for (const Case& c : {Case{"binary", sampler::Method::kExact, 20001, 400},
                        Case{"two_type", sampler::Method::kExact, 4001, 400},
                        Case{"two_type", sampler::Method::kRejection, 201, 400}}) {
    const auto fam = kernel::load_family(presets + "/" + c.family + ".json");
    sampler::SampleRequest req;
    req.method = c.method;
    req.n = c.n;
    sampler::BatchSampler s(fam, req);
    std::vector<sampler::Replicate> a, b;
    const double ts = seconds([&] { a = sampler::sample_batch_serial(s, c.count, 1, 0); });
    const double tp = seconds([&] { b = sampler::sample_batch(s, c.count, 1, 0, threads); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].tree == b[i].tree;
    ok = ok && same;
    row(std::string(c.family) + " " + sampler::to_string(c.method) + " n=" + std::to_string(c.n), ts, tp, same);
  }

  analysis::WalkOracleOptions w;
  w.excursions = 20000;
  w.half_length = 5000;
  std::vector<double> a, b;
  const double ts = seconds([&] { a = analysis::walk_excursion_heights_serial(w); });
  const double tp = seconds([&] { b = analysis::walk_excursion_heights(w, threads); });
  ok = ok && a == b;
  row("walk oracle 2e4 x 1e4 steps", ts, tp, a == b);
  return ok ? 0 : 1;
}
