#pragma once

// On-disk bit string formats.
//
// Text:   ASCII '0'/'1', one string per line. Blank lines are skipped.
// Packed: 8-byte little-endian bit count, then ceil(count / 8) bytes with
//         bit i stored in byte i / 8 at bit position i % 8. Padding bits are 0.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamrec/bitstring.hpp"

namespace hamrec::bitio {

enum class Format { text, packed };

void write_text(std::ostream& out, const std::vector<BitString>& strings);
std::vector<BitString> read_text(std::istream& in);

void write_packed(std::ostream& out, const BitString& bits);
BitString read_packed(std::istream& in);

// Packed if the file ends in ".bin", text otherwise.
Format guess_format(const std::filesystem::path& path);

void save(const std::filesystem::path& path, const BitString& bits);
// Text files must hold exactly one string.
BitString load(const std::filesystem::path& path);

}  // namespace hamrec::bitio
