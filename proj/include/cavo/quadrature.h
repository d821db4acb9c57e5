// Copyright 2026 The cavo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAVO_QUADRATURE_H_
#define CAVO_QUADRATURE_H_

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

namespace cavo {

/// Composite 20-point Gauss-Legendre on [a, b]; the panel count doubles until two
/// successive estimates agree to tol (absolute, scaled by max(1, |I|)).
template <typename F>
double integrate(F f, double a, double b, double tol = 1e-10, int max_panels = 1 << 14) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    auto composite = [&](int panels) {
        double h = (b - a) / panels, sum = 0;
        for (int i = 0; i < panels; i++) sum += Rule::integrate(f, a + i * h, a + (i + 1) * h);
        return sum;
    };
    double prev = composite(1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double cur = composite(panels);
        if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("quadrature did not converge");
}

}  // namespace cavo

#endif
