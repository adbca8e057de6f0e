#include "cartan/random.hpp"

namespace cartan {

namespace {

void fill_degree(int nvars, int remaining, int var, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[var] = k;
    fill_degree(nvars, remaining - k, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<std::vector<int>> monomials_up_to(int nvars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= degree; ++d) fill_degree(nvars, d, 0, cur, out);
  return out;
}

std::vector<double> randpoly_coefficients(int nvars, int degree, std::uint64_t seed) {
  Rng rng(seed);
  const auto count = monomials_up_to(nvars, degree).size();
  std::vector<double> coeffs(count);
  for (auto& c : coeffs) c = rng.uniform(-1.0, 1.0);
  return coeffs;
}

}  // namespace cartan
