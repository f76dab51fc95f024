#include "pcons/counting.hpp"

#include <stdexcept>
#include <vector>

namespace pcons {

BigInt bell_number(int n) {
  if (n < 0) throw std::invalid_argument("bell_number of negative n");
  std::vector<BigInt> row{1};  // triangle row 0
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next(i + 1);
    next[0] = row.back();
    for (int j = 1; j <= i; ++j) next[j] = next[j - 1] + row[j - 1];
    row = std::move(next);
  }
  return row[0];
}

BigInt count_partitions_into_k(int n, int k) {
  if (n < 1) throw std::invalid_argument("count_partitions_into_k needs n >= 1");
  if (k < 1) throw std::invalid_argument("count_partitions_into_k needs k >= 1");
  BigInt sum = 0;
  BigInt binom = 1;  // C(k, 0)
  BigInt k_factorial = 1;
  for (int j = 1; j <= k; ++j) {
    binom = binom * (k - j + 1) / j;  // C(k, j), exact at every step
    BigInt term = binom * boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(n));
    if ((k - j) % 2 == 0)
      sum += term;
    else
      sum -= term;
    k_factorial *= j;
  }
  return sum / k_factorial;
}

}  // namespace pcons
