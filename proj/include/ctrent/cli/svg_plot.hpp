#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ctrent/entropy.hpp"

namespace ctrent::cli {

/// Scatter of (h1_per_bit, hinf_per_bit) on the unit square, one circle per
/// counter, with the Hinf = H1 diagonal. Output bytes depend only on input.
std::string render_entropy_scatter(std::span<const EntropyAssessment> assessments,
                                   std::string_view title = "Entropy per bit");

}  // namespace ctrent::cli
