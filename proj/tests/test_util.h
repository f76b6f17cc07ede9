// Copyright 2026 The LIC Authors. All Rights Reserved.
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

// Helpers shared by the unit tests.

#ifndef LIC_TESTS_TEST_UTIL_H_
#define LIC_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lic/rng.h"
#include "lic/tape.h"
#include "lic/tensor.h"

namespace lic {
namespace testing {

template <typename T = double>
BasicTensor<T> RandomTensor(const Shape& shape, uint64_t seed, double lo = -1,
                            double hi = 1) {
  BasicTensor<T> t(shape);
  CounterRng rng(seed, 0x7e57);
  for (T& v : t.data()) v = static_cast<T>(lo + (hi - lo) * rng.NextUniform());
  return t;
}

// Builds a scalar root from the given leaves.
using GraphFn =
    std::function<Var(Tape<double>&, const std::vector<Var>& leaves)>;

struct GradCheckOptions {
  double step = 1e-4;
  double rel_tol = 1e-4;
  double abs_tol = 1e-6;
  // Check only every `stride`-th element of each input (1 = all);
  // per_input_stride, when given, overrides it input by input.
  size_t stride = 1;
  std::vector<size_t> per_input_stride;
};

// Compares Backward() against central finite differences for every input.
inline void ExpectGradientsMatch(const GraphFn& f,
                                 const std::vector<Tensor64>& inputs,
                                 const GradCheckOptions& opt = {}) {
  Tape<double> tape;
  std::vector<Var> leaves;
  for (const Tensor64& t : inputs) leaves.push_back(tape.Leaf(t, true));
  const Var root = f(tape, leaves);
  const Gradients<double> grads = tape.Backward(root);

  auto eval = [&](const std::vector<Tensor64>& xs) {
    Tape<double> t;
    std::vector<Var> ls;
    for (const Tensor64& x : xs) ls.push_back(t.Leaf(x, false));
    return t.value(f(t, ls)).item();
  };

  std::vector<Tensor64> work = inputs;
  int failures = 0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const Tensor64& analytic = grads[leaves[i]];
    ASSERT_EQ(analytic.shape(), inputs[i].shape());
    const size_t stride =
        i < opt.per_input_stride.size() ? opt.per_input_stride[i] : opt.stride;
    for (size_t j = 0; j < inputs[i].size(); j += stride) {
      const double orig = work[i][j];
      work[i][j] = orig + opt.step;
      const double fp = eval(work);
      work[i][j] = orig - opt.step;
      const double fm = eval(work);
      work[i][j] = orig;
      const double numeric = (fp - fm) / (2 * opt.step);
      const double a = analytic[j];
      const double err = std::abs(a - numeric);
      const double scale = std::max(std::abs(a), std::abs(numeric));
      if (err > opt.abs_tol && err > opt.rel_tol * scale && failures < 10) {
        ++failures;
        ADD_FAILURE() << "input " << i << " element " << j << ": backward "
                      << a << " vs finite difference " << numeric;
      }
    }
  }
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("lic_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
}  // namespace lic

#endif  // LIC_TESTS_TEST_UTIL_H_
