// Copyright 2026 The AltGDmin Authors.
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

#ifndef ALTGDMIN_QUADRATURE_H_
#define ALTGDMIN_QUADRATURE_H_

#include "altgdmin/linalg.h"

namespace altgdmin {

// E[ζ² 1{|ζ| ≤ c}] for ζ ~ N(0,1), by adaptive Gauss–Kronrod quadrature.
double truncated_gaussian_second_moment(double c);

// β(α) = E[ζ² 1{‖x‖² ζ² ≤ α}] for a column of norm column_norm.
double truncation_shrinkage(double alpha, double column_norm);

// β_k(α) for every column of x_star; E[X̂₀ | α] = X⋆ diag(β).
Vector truncation_shrinkage(const Matrix& x_star, double alpha);

}  // namespace altgdmin

#endif  // ALTGDMIN_QUADRATURE_H_
