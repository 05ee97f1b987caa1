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

#ifndef GPSAMP_ERRORS_HPP
#define GPSAMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpsamp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct FitFailed : Error {
  using Error::Error;
};

struct DegenerateVariance : Error {
  using Error::Error;
};

struct InvalidDistribution : Error {
  using Error::Error;
};

struct NoFeasiblePoint : Error {
  using Error::Error;
};

struct IterationFailed : Error {
  using Error::Error;
};

struct EmptyData : Error {
  using Error::Error;
};

struct EmptyCandidates : Error {
  using Error::Error;
};

struct SingularStiffness : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline void require_dims(bool cond, const std::string& msg) {
  if (!cond) throw DimensionMismatch(msg);
}

}  // namespace gpsamp

#endif
