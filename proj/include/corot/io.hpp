#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "corot/history.hpp"
#include "corot/slice.hpp"

namespace corot {

// Columnar slice format: one header line "t alpha k n_points dr", then rows
// "r v pi gamma omega" at 15 significant digits.
void write_slice(const std::filesystem::path& path, const Slice& s);
Slice read_slice(const std::filesystem::path& path);

std::string slice_filename(int index);

void write_history(const std::filesystem::path& dir, const History& h);
History read_history(const std::filesystem::path& dir);

// text written through a temporary file and an atomic rename
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_g15(double x);

}  // namespace corot
