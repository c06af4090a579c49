// Copyright 2026 The qgas authors
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

namespace qgas {

// Internal unit system: hbar = k_B = 1 with user-chosen mass and length units.
// Formulas still carry the constants explicitly so the unit choice lives in
// exactly one place.
inline constexpr double hbar = 1.0;
inline constexpr double k_boltzmann = 1.0;

}  // namespace qgas
