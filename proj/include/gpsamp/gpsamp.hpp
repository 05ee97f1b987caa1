// Copyright 2026 the gpsamp authors
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

#ifndef GPSAMP_GPSAMP_HPP
#define GPSAMP_GPSAMP_HPP

#include "gpsamp/dataset.hpp"
#include "gpsamp/errors.hpp"
#include "gpsamp/fastmath.hpp"
#include "gpsamp/features.hpp"
#include "gpsamp/gaussian.hpp"
#include "gpsamp/gp.hpp"
#include "gpsamp/kernels.hpp"
#include "gpsamp/moopt.hpp"
#include "gpsamp/paths.hpp"
#include "gpsamp/rng.hpp"
#include "gpsamp/sobol.hpp"
#include "gpsamp/testbeds.hpp"
#include "gpsamp/truss.hpp"
#include "gpsamp/tsopt.hpp"

#endif
