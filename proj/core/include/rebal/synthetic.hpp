#pragma once

#include "rebal/dataset.hpp"

#include <cstddef>
#include <cstdint>

namespace rebal {

struct SyntheticSpec {
    std::size_t rows = 8955;
    double positive_rate = 0.156;
    std::uint64_t seed = 1;
    double missing_rate = 0.0; ///< chance a categorical cell is left empty
};

/// Ten-column HR-style schema: city_development_index, gender,
/// relevent_experience, enrolled_university, education_level,
/// major_discipline, experience, company_size, company_type, target.
Schema hr_schema();

/// Seeded HR-style table with exactly round(positive_rate * rows) positives.
/// Features are drawn from class-conditional distributions that overlap,
/// so the classes are learnable but not separable.
Dataset generate_hr_dataset(const SyntheticSpec& spec);

} // namespace rebal
