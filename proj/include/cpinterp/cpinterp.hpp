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

#include "cpinterp/analytic.hpp"
#include "cpinterp/classify.hpp"
#include "cpinterp/config.hpp"
#include "cpinterp/construct.hpp"
#include "cpinterp/errors.hpp"
#include "cpinterp/feasibility.hpp"
#include "cpinterp/linalg.hpp"
#include "cpinterp/matching.hpp"
#include "cpinterp/simplex.hpp"
#include "cpinterp/verify.hpp"
