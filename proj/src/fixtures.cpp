#include "tracial/fixtures.hpp"

#include <initializer_list>

namespace tracial::fixtures {

namespace {

linalg::HermitianMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  linalg::ComplexMatrix m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return linalg::HermitianMatrix(m);
}

}  // namespace

std::vector<NamedPair> figure_pairs() {
  std::vector<NamedPair> out;
  out.push_back({"figure1a", {real_matrix({{1, 0}, {0, -1}}), real_matrix({{2, -1}, {-1, 1}})}});
  out.push_back({"figure1b", {real_matrix({{2, 0}, {0, -1}}), real_matrix({{1, -2}, {-2, 2}})}});
  out.push_back({"figure1c",
                 {real_matrix({{1, 0, 0}, {0, 2, 0}, {0, 0, -1}}), real_matrix({{0, 1, 1}, {1, -1, -1}, {1, -1, 1}})}});
  out.push_back({"figure1d",
                 {real_matrix({{-3, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 2}}),
                  real_matrix({{0, 0, 0, -1}, {0, 0, 0, -1}, {0, 0, -2, -2}, {-1, -1, -2, 2}})}});
  return out;
}

}  // namespace tracial::fixtures
