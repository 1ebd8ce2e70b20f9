#pragma once

#include <string>
#include <string_view>

#include "tracial/pencil.hpp"

namespace tracial::io {

/// {"name": ..., "source": ..., "A": [[[re, im], ...], ...], "B": ...}.
/// Entries may also be plain numbers. Matrices are symmetrized as (M + M^*)/2
/// after rejecting max |M - M^*| > 1e-12.
struct PairDocument {
  std::string name;
  std::string source;
  pencil::HermitianPair pair;
};

/// Throws ParseError for malformed text and NotHermitian for asymmetric input.
PairDocument parse_pair_document(std::string_view text);
/// As parse_pair_document; IOError when the file cannot be read.
PairDocument load_pair_document(const std::string& path);

std::string to_json(const PairDocument& doc);

}  // namespace tracial::io
