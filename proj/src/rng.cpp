#include "nidx/rng.hpp"

namespace nidx {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Mat gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat m(rows, cols);
  // row-major fill so matrices match the row-major wire format
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  return ud(rng);
}

}  // namespace nidx
