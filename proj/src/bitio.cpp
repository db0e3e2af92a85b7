#include "hamrec/bitio.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "hamrec/error.hpp"

namespace hamrec::bitio {

void write_text(std::ostream& out, const std::vector<BitString>& strings) {
  for (const auto& s : strings) out << s.to_string() << '\n';
}

std::vector<BitString> read_text(std::istream& in) {
  std::vector<BitString> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(BitString::parse(line));
  }
  return out;
}

void write_packed(std::ostream& out, const BitString& bits) {
  std::array<char, 8> header{};
  const std::uint64_t n = bits.size();
  for (int i = 0; i < 8; ++i) header[static_cast<std::size_t>(i)] = static_cast<char>((n >> (8 * i)) & 0xff);
  out.write(header.data(), header.size());
  const std::size_t nbytes = (bits.size() + 7) / 8;
  std::string body(nbytes, '\0');
  const auto words = bits.words();
  for (std::size_t b = 0; b < nbytes; ++b) {
    body[b] = static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xff);
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

BitString read_packed(std::istream& in) {
  std::array<unsigned char, 8> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  require(in.gcount() == 8, ErrorKind::domain, "packed bit file: truncated length header");
  std::uint64_t n = 0;
  for (int i = 7; i >= 0; --i) n = (n << 8) | header[static_cast<std::size_t>(i)];
  const std::size_t nbytes = static_cast<std::size_t>((n + 7) / 8);
  std::string body(nbytes, '\0');
  in.read(body.data(), static_cast<std::streamsize>(nbytes));
  require(static_cast<std::size_t>(in.gcount()) == nbytes, ErrorKind::domain,
          "packed bit file: expected " + std::to_string(nbytes) + " payload bytes");
  BitString out(static_cast<std::size_t>(n));
  auto words = out.words();
  for (std::size_t b = 0; b < nbytes; ++b) {
    words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(body[b])) << (8 * (b % 8));
  }
  if (n % 8 != 0) {
    const auto last = static_cast<unsigned char>(body.back());
    require((last >> (n % 8)) == 0, ErrorKind::domain, "packed bit file: nonzero padding bits");
  }
  return out;
}

Format guess_format(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? Format::packed : Format::text;
}

void save(const std::filesystem::path& path, const BitString& bits) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::config, "cannot open '" + path.string() + "' for writing");
  if (guess_format(path) == Format::packed) {
    write_packed(out, bits);
  } else {
    write_text(out, {bits});
  }
}

BitString load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::config, "cannot open '" + path.string() + "'");
  if (guess_format(path) == Format::packed) return read_packed(in);
  auto strings = read_text(in);
  require(strings.size() == 1, ErrorKind::domain,
          "text bit file '" + path.string() + "' must hold exactly one string, found " +
              std::to_string(strings.size()));
  return std::move(strings.front());
}

}  // namespace hamrec::bitio
