// Copyright 2026 The specstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>

namespace specstream {

// Adaptive Simpson integration of f over [lo, hi] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-10, int max_depth = 48);

}  // namespace specstream
