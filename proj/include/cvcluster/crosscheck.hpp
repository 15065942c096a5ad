// Copyright 2026 The cvcluster Authors
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

// Agreement between symbolic nullifier variances and the covariance oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cvcluster/gaussian_oracle.hpp"
#include "cvcluster/nullifier.hpp"

namespace cvcluster {

inline constexpr double kOracleTolerance = 1e-12;

inline double relative_error(double numeric, double symbolic) {
    return std::abs(numeric - symbolic) / std::max(std::abs(symbolic), 1e-30);
}

struct CrossCheck {
    double max_rel_pre = 0.0;   // canonical nullifiers, before any measurement
    double max_rel_post = 0.0;  // retained nullifiers, conditioned on the erasures
    std::size_t compared = 0;
    bool ok() const { return max_rel_pre < kOracleTolerance && max_rel_post < kOracleTolerance; }
};

inline CrossCheck oracle_cross_check(const BuiltState& state, const std::vector<Nullifier>& canonical) {
    CrossCheck cc;
    const CovarianceState pre = run_numeric(state.program, state.profile, first_measurement(state.program));
    for (const Nullifier& n : canonical) {
        cc.max_rel_pre = std::max(cc.max_rel_pre, relative_error(quadratic_form_variance(pre, n.expr), variance(n, state)));
        ++cc.compared;
    }
    if (!state.removed().empty()) {
        const CovarianceState post = run_numeric(state.program, state.profile);
        for (const Nullifier& n : retained_nullifiers(canonical, state)) {
            cc.max_rel_post = std::max(cc.max_rel_post,
                                       relative_error(quadratic_form_variance(post, n.expr), conditional_variance(n.expr, state)));
            ++cc.compared;
        }
    }
    return cc;
}

}  // namespace cvcluster
