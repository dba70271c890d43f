#pragma once

#include <filesystem>

#include "kaczmarz/linear_system.hpp"

namespace kaczmarz::cli {

/// Reads a system from MatrixMarket (array or coordinate, real/integer,
/// general) or from the CSV layout:
///
///     m,n
///     a11,...,a1n
///     ...
///     am1,...,amn
///     b1,...,bm
///
/// For MatrixMarket input the right-hand side is either the trailing column,
/// when the header block contains a comment line with `rhs-column`, or the
/// sibling file with the `.rhs` extension.
LinearSystem load_system(const std::filesystem::path& path);

/// A vector from a one-column MatrixMarket file or from plain numbers
/// separated by whitespace or commas.
Vector load_vector(const std::filesystem::path& path);

}  // namespace kaczmarz::cli
