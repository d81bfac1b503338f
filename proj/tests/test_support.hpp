#pragma once

#include <gtest/gtest.h>

#include <string>

#include "random_instances.hpp"

namespace hq::testing {

inline std::string fixture(const std::string& name) { return std::string(HQ_FIXTURE_DIR) + "/" + name; }

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return max_abs(a - b); }

}  // namespace hq::testing
