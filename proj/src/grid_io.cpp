#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "ldacert/error.hpp"
#include "ldacert/field.hpp"

namespace ldacert {

namespace {

template <class T>
T parse_token(std::string_view tok, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FileError(fmt::format("LDA-GRID: cannot parse {} '{}'", what, tok));
  return v;
}

}  // namespace

ScalarField read_grid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FileError("LDA-GRID: empty input");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "LDA-GRID" || version != "v1") throw FileError("LDA-GRID: bad magic or version");
  std::string tok[9];
  for (auto& t : tok)
    if (!(hs >> t)) throw FileError("LDA-GRID: header needs nx ny nz hx hy hz ox oy oz");
  std::string extra;
  if (hs >> extra) throw FileError("LDA-GRID: trailing header token '" + extra + "'");

  ScalarField f;
  for (int a = 0; a < 3; ++a) {
    f.spec.n[a] = parse_token<int>(tok[a], "extent");
    f.spec.h[a] = parse_token<double>(tok[3 + a], "spacing");
    f.spec.origin[a] = parse_token<double>(tok[6 + a], "origin");
  }
  try {
    f.spec.validate();
  } catch (const InvalidField& e) {
    throw FileError(std::string("LDA-GRID: ") + e.what());
  }
  const std::size_t n = f.spec.size();
  f.values.reserve(n);
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const char* p = body.data();
  const char* end = p + body.size();
  auto space = [](char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; };
  while (true) {
    while (p < end && space(*p)) ++p;
    if (p == end) break;
    const char* q = p;
    while (q < end && !space(*q)) ++q;
    if (f.values.size() == n) throw FileError("LDA-GRID: more values than the header declares");
    f.values.push_back(parse_token<double>(std::string_view(p, q - p), "value"));
    p = q;
  }
  if (f.values.size() != n)
    throw FileError(fmt::format("LDA-GRID: expected {} values, found {}", n, f.values.size()));
  return f;
}

void write_grid(std::ostream& out, const ScalarField& f) {
  const GridSpec& s = f.spec;
  out << fmt::format("LDA-GRID v1 {} {} {} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n", s.n[0],
                     s.n[1], s.n[2], s.h[0], s.h[1], s.h[2], s.origin[0], s.origin[1], s.origin[2]);
  std::string line;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    line += fmt::format("{:.17g}", f.values[i]);
    line += (i + 1) % s.n[0] == 0 ? '\n' : ' ';
    if (line.size() > 1 << 16) {
      out << line;
      line.clear();
    }
  }
  out << line;
}

ScalarField read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open density file '" + path + "'");
  return read_grid(in);
}

void write_grid_file(const std::string& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write '" + path + "'");
  write_grid(out, f);
  if (!out) throw FileError("write failed for '" + path + "'");
}

}  // namespace ldacert
