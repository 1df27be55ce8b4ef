#pragma once

#include "mergesim/types.hpp"

#include <vector>

namespace mergesim {

enum class ActionEncoding {
    Binary,    // 5-bit one-hot
    Discrete,  // single integer in (0, 5]
    Frenet,    // (lateral, longitudinal), each in {-1, 0, 1}
};

int encoding_width(ActionEncoding scheme);

std::vector<double> encode_action(MetaAction action, ActionEncoding scheme);

} // namespace mergesim
