#pragma once

#include <vector>

namespace qnet {

/// Maximum-weight matching on a dense graph. `weight` is a symmetric matrix
/// of non-negative integers; a zero weight means the edge is absent. Returns
/// mate[i] = matched partner or -1. O(n^3) blossom algorithm.
std::vector<int> max_weight_matching(const std::vector<std::vector<long long>>& weight);

/// Minimum-weight perfect matching over an even number of nodes given a
/// symmetric non-negative integer distance matrix. Reduces to
/// max_weight_matching with weights (BIG - dist).
std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<long long>>& dist);

}  // namespace qnet
