#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace pcons {

using BigInt = boost::multiprecision::cpp_int;

// Number of partitions of an n-element set, via the Bell triangle.
BigInt bell_number(int n);

// Number of partitions of an n-element set into exactly k non-empty clusters,
// via the alternating-sum formula (1/k!) * sum_{j=1..k} (-1)^(k-j) C(k,j) j^n.
// Returns 0 for k > n. The route is deliberately different from bell_number's
// so that the two can be cross-checked against each other.
BigInt count_partitions_into_k(int n, int k);

}  // namespace pcons
