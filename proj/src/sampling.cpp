#include "toroflow/sampling.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace toroflow {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sample_u01(std::uint64_t seed, std::uint64_t index,
                  std::uint64_t stream) {
  std::uint64_t z = splitmix64(seed ^ splitmix64(index ^ splitmix64(stream)));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("TOROFLOW_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {
double pairwise_sum_range(std::span<const double> v, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(v, lo, mid) + pairwise_sum_range(v, mid, hi);
}
}  // namespace

double pairwise_sum(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum_range(v, 0, v.size());
}

namespace {

double jacobian_for_sampling(const ChartFamily& chart, const Coords& c) {
  if (chart.has_closed_form_jacobian())
    return jacobian_det_closed_form(chart, c);
  const auto pos = chart.position<Jet>(Jet::variable(c.psi, kPsi),
                                       Jet::variable(c.theta, kTheta),
                                       Jet::variable(c.zeta, kZeta));
  Eigen::Matrix3d d1;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 3; ++k) d1(a, k) = pos[a].g[k];
  return d1.determinant();
}

std::vector<Coords> sample_impl(const ChartFamily& chart, double psi_min,
                                double psi_max, std::size_t n,
                                std::uint64_t seed, double margin) {
  std::vector<Coords> pts(n);
  std::vector<int> failed(n, 0);
  parallel_for(n, [&](std::size_t i) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt == 4096) {
        failed[i] = 1;
        return;
      }
      const std::uint64_t base = 3 * attempt;
      Coords c;
      c.psi = psi_min + (psi_max - psi_min) * sample_u01(seed, i, base);
      c.theta = kTwoPi * sample_u01(seed, i, base + 1);
      c.zeta = kTwoPi * sample_u01(seed, i, base + 2);
      if (!in_domain(chart, c)) continue;
      if (jacobian_for_sampling(chart, c) < margin) continue;
      pts[i] = c;
      return;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (failed[i])
      throw std::runtime_error(
          "sample_shell: rejection sampling exhausted 4096 attempts; the "
          "requested shell is (nearly) empty for " + chart.describe());
  return pts;
}

}  // namespace

std::vector<Coords> sample_shell(const ChartFamily& chart,
                                 const DomainSpec& dom, std::size_t n,
                                 std::uint64_t seed, double margin) {
  if (!(dom.psi_min < dom.psi_max) || !(dom.psi_max < chart.psi0()))
    throw std::invalid_argument(
        "sample_shell: need psi_min < psi_max < psi0");
  return sample_impl(chart, dom.psi_min, dom.psi_max, n, seed, margin);
}

std::vector<Coords> sample_level_set(const ChartFamily& chart, double psi,
                                     std::size_t n, std::uint64_t seed,
                                     double margin) {
  if (!(psi < chart.psi0()))
    throw std::invalid_argument("sample_level_set: need psi < psi0");
  return sample_impl(chart, psi, psi, n, seed, margin);
}

}  // namespace toroflow
