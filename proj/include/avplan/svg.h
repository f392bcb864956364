// Copyright 2026 The avplan Authors
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

#ifndef AVPLAN_SVG_H_
#define AVPLAN_SVG_H_

#include <span>
#include <string>
#include <string_view>

#include "avplan/risk.h"

namespace avplan {

// Trade-off plot of a Pareto front: c on the x axis, PR and AP on the left
// axis ([0, 1]) and the test cost on the right axis.
std::string render_front_svg(std::span<const RiskProfile> front,
                             std::string_view title);

}  // namespace avplan

#endif  // AVPLAN_SVG_H_
