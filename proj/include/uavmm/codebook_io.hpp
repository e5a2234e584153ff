// SPDX-License-Identifier: Apache-2.0

#ifndef UAVMM_CODEBOOK_IO_HPP
#define UAVMM_CODEBOOK_IO_HPP

#include "uavmm/codebook.hpp"

#include <json.hpp>

#include <ostream>

namespace uavmm {

// {n_antennas, branching, layers: [[{layer, index, weights: [[re, im], ...]}]]}
nlohmann::json codebook_to_json(const HierCodebook &cb);

// Active masks are recovered from nonzero weights. The kind is not part of
// the schema; pass it if it matters to the caller.
HierCodebook codebook_from_json(const nlohmann::json &j, CodebookKind kind = CodebookKind::bmw_ss);

// CSV with header `omega,gain_db`.
void write_pattern_csv(std::ostream &os, const BeamPattern &p);

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

} // namespace uavmm

#endif
