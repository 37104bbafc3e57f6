/*
 * Copyright 2026 The cpinterp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <vector>

namespace cpinterp {

// Perfect matching on the bipartite support graph {(p, q) : w(p, q) > threshold}
// of a square weight matrix, by augmenting paths. Adjacency lists are ordered
// by descending weight so heavier entries are preferred. Returns the column
// matched to each row, or nullopt if no perfect matching exists.
inline std::optional<std::vector<Eigen::Index>>
perfect_matching(const Eigen::MatrixXd &w, double threshold) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n)
    return std::nullopt;

  std::vector<std::vector<Eigen::Index>> adj(static_cast<size_t>(n));
  for (Eigen::Index p = 0; p < n; ++p) {
    auto &row = adj[static_cast<size_t>(p)];
    for (Eigen::Index q = 0; q < n; ++q)
      if (w(p, q) > threshold)
        row.push_back(q);
    std::stable_sort(row.begin(), row.end(), [&](Eigen::Index x, Eigen::Index y) {
      return w(p, x) > w(p, y);
    });
  }

  std::vector<Eigen::Index> row_of_col(static_cast<size_t>(n), -1);
  std::vector<char> seen(static_cast<size_t>(n));

  // Iterative DFS for an augmenting path from row `root`.
  auto augment = [&](Eigen::Index root) {
    std::fill(seen.begin(), seen.end(), 0);
    struct Frame {
      Eigen::Index row;
      size_t next;
      Eigen::Index via_col;
    };
    std::vector<Frame> stack{{root, 0, -1}};
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto &nbrs = adj[static_cast<size_t>(f.row)];
      if (f.next == nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Eigen::Index q = nbrs[f.next++];
      if (seen[static_cast<size_t>(q)])
        continue;
      seen[static_cast<size_t>(q)] = 1;
      const Eigen::Index owner = row_of_col[static_cast<size_t>(q)];
      if (owner < 0) {
        // Flip the path: each frame's row takes the column it descended by.
        Eigen::Index col = q;
        for (size_t s = stack.size(); s-- > 0;) {
          const Eigen::Index prev = stack[s].via_col;
          row_of_col[static_cast<size_t>(col)] = stack[s].row;
          col = prev;
        }
        return true;
      }
      stack.push_back({owner, 0, q});
    }
    return false;
  };

  for (Eigen::Index p = 0; p < n; ++p) {
    if (!augment(p))
      return std::nullopt;
  }

  std::vector<Eigen::Index> col_of_row(static_cast<size_t>(n), -1);
  for (Eigen::Index q = 0; q < n; ++q)
    col_of_row[static_cast<size_t>(row_of_col[static_cast<size_t>(q)])] = q;
  return col_of_row;
}

} // namespace cpinterp
