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

#include <stdexcept>
#include <string>

namespace cpinterp {

// Bad shapes, non-Hermitian inputs, violated preconditions.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An iterative routine failed to converge or a tolerance could not be met.
// `residual` carries the worst deviation observed when it is meaningful.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string &what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// Two independent routes disagreed. This indicates a bug, not bad input.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace cpinterp
