// Copyright 2026 The qmeter Authors
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

#include "qmeter/measurement.hpp"
#include "qmeter/operator_core.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace qmeter::testing {

using Mat = Matrix<double>;
using Vec = Vector<double>;
using cd = std::complex<double>;

inline Vec ket(std::initializer_list<cd> entries) {
  Vec v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (cd e : entries) v(i++) = e;
  return v;
}

inline Vec plus() { return ket({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}); }
inline Vec y_plus() { return ket({1 / std::sqrt(2.0), cd(0, 1 / std::sqrt(2.0))}); }

inline Mat diag(std::initializer_list<double> entries) {
  Mat m = Mat::Zero(static_cast<Index>(entries.size()), static_cast<Index>(entries.size()));
  Index i = 0;
  for (double e : entries) m(i, i) = e, ++i;
  return m;
}

inline Mat number_operator(Index n) { return bosonic_operators<double>(BosonicSpace(n)).number; }

inline KrausSet<double> single(const Mat& m, const std::string& label = "m") {
  return KrausSet<double>({{label, m}}, false);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

#define EXPECT_ERROR_CODE(stmt, expected_code)                           \
  do {                                                                   \
    try {                                                                \
      stmt;                                                              \
      ADD_FAILURE() << "expected " << ::qmeter::to_string(expected_code); \
    } catch (const ::qmeter::Error& e) {                                 \
      EXPECT_EQ(e.code(), expected_code) << e.what();                    \
    }                                                                    \
  } while (0)

}  // namespace qmeter::testing
