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

#include <cstdint>

namespace cpinterp {

// Relative tolerances. Each consumer documents what it is relative to.
struct Tolerances {
  double hermitian = 1e-10;     // asymmetry accepted at construction
  double decomposition = 1e-8;  // eigen / joint diagonalization residuals
  double unitarity = 1e-10;
  double commute = 1e-8;
  double feasibility = 1e-8;    // LP residual, scaled by the table norms
  double property = 1e-8;       // unital / TP / interpolation verdicts
  double numrange = 1e-7;       // support-function containment slack
};

struct Config {
  Tolerances tol;
  std::uint64_t seed = 0;
  int grid = 720;
};

} // namespace cpinterp
