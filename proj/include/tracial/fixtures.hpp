#pragma once

#include <string>
#include <vector>

#include "tracial/pencil.hpp"

namespace tracial::fixtures {

struct NamedPair {
  std::string name;
  pencil::HermitianPair pair;
};

/// The four real symmetric pairs drawn in the reference figure, in order.
std::vector<NamedPair> figure_pairs();

}  // namespace tracial::fixtures
