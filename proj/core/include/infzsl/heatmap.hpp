#pragma once

#include <filesystem>
#include <vector>

#include "infzsl/cess.hpp"

namespace infzsl {

/// Renders the embedding as an SVG heatmap. Columns are reordered by their
/// importance, descending, so the most transferable-and-discriminative
/// concepts sit on the left; cell color maps the matrix min..max linearly.
/// `column_importance` must have one entry per column of `s`.
void export_heatmap(const SemanticEmbedding& s,
                    const std::vector<double>& column_importance,
                    const std::filesystem::path& path);

}  // namespace infzsl
