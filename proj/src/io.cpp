#include "sinedist/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sinedist {
namespace {

struct Cursor {
  std::string name;
  int line = 0;
};

[[noreturn]] void parse_fail(const Cursor& cursor, const std::string& message) {
  fail(Errc::ParseError, cursor.name + ":" + std::to_string(cursor.line) + ": " + message);
}

// Next non-blank line after comment stripping, split on whitespace.
bool next_tokens(std::istream& in, Cursor& cursor, std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    ++cursor.line;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    tokens.clear();
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    if (!tokens.empty()) return true;
  }
  return false;
}

void expect_key(std::istream& in, Cursor& cursor, std::vector<std::string>& tokens,
                const std::string& key) {
  if (!next_tokens(in, cursor, tokens)) parse_fail(cursor, "expected '" + key + "', got end of file");
  if (tokens[0] != key) parse_fail(cursor, "expected '" + key + "', got '" + tokens[0] + "'");
}

long long parse_integer(const Cursor& cursor, const std::string& token) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size() || errno == ERANGE)
    parse_fail(cursor, "bad integer '" + token + "'");
  return v;
}

double parse_real(const Cursor& cursor, const std::string& token) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE)
    parse_fail(cursor, "bad number '" + token + "'");
  if (!std::isfinite(v)) parse_fail(cursor, "non-finite number '" + token + "'");
  return v;
}

// An `re` or `im` line carrying exactly `count` finite values.
std::vector<double> parse_row(std::istream& in, Cursor& cursor, std::vector<std::string>& tokens,
                              const std::string& key, std::size_t count) {
  expect_key(in, cursor, tokens, key);
  if (tokens.size() != count + 1)
    parse_fail(cursor, "'" + key + "' needs " + std::to_string(count) + " values, got " +
                           std::to_string(tokens.size() - 1));
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 1; i < tokens.size(); ++i) values.push_back(parse_real(cursor, tokens[i]));
  return values;
}

CMatrix parse_block(std::istream& in, Cursor& cursor, std::vector<std::string>& tokens,
                    Eigen::Index rows, Eigen::Index cols) {
  const auto count = static_cast<std::size_t>(rows * cols);
  const std::vector<double> re = parse_row(in, cursor, tokens, "re", count);
  const std::vector<double> im = parse_row(in, cursor, tokens, "im", count);
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      m(r, c) = {re[i], im[i]};
    }
  return m;
}

void write_block(std::ostream& out, const CMatrix& m) {
  char buf[64];
  const auto put = [&out, &buf](double v, char head) {
    std::snprintf(buf, sizeof buf, "%c%.17g", head, v);
    out << buf;
  };
  for (const char* key : {"re", "im"}) {
    out << key;
    const bool real_part = key[0] == 'r';
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        put(real_part ? m(r, c).real() : m(r, c).imag(), ' ');
    out << '\n';
  }
}

void require_kind(const MatrixFile& file, MatrixKind kind, const char* what) {
  if (file.kind != kind)
    fail(Errc::ParseError, std::string(what) + ": file holds kind '" +
                               std::string(kind_name(file.kind)) + "', need '" +
                               std::string(kind_name(kind)) + "'");
}

}  // namespace

std::string_view kind_name(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Density: return "density";
    case MatrixKind::Pure: return "pure";
    case MatrixKind::KrausSet: return "kraus_set";
    case MatrixKind::Povm: return "povm";
  }
  fail(Errc::ParseError, "kind_name: bad kind value");
}

MatrixKind parse_kind(std::string_view name) {
  if (name == "density") return MatrixKind::Density;
  if (name == "pure") return MatrixKind::Pure;
  if (name == "kraus_set") return MatrixKind::KrausSet;
  if (name == "povm") return MatrixKind::Povm;
  fail(Errc::ParseError, "unknown kind '" + std::string(name) +
                             "' (expected density, pure, kraus_set, or povm)");
}

MatrixFile parse_matrix_file(std::istream& in, std::string_view name) {
  Cursor cursor{std::string(name), 0};
  std::vector<std::string> tokens;

  expect_key(in, cursor, tokens, "kind");
  if (tokens.size() != 2) parse_fail(cursor, "'kind' needs exactly one value");
  MatrixFile file;
  try {
    file.kind = parse_kind(tokens[1]);
  } catch (const Error& e) {
    parse_fail(cursor, e.what());
  }

  expect_key(in, cursor, tokens, "dim");
  if (tokens.size() != 2) parse_fail(cursor, "'dim' needs exactly one value");
  const long long dim = parse_integer(cursor, tokens[1]);
  if (dim < 1 || dim > kMaxEigDim)
    parse_fail(cursor, "dim must be between 1 and " + std::to_string(kMaxEigDim));
  file.dim = static_cast<Eigen::Index>(dim);

  const Eigen::Index cols = file.kind == MatrixKind::Pure ? 1 : file.dim;
  const bool multi = file.kind == MatrixKind::KrausSet || file.kind == MatrixKind::Povm;
  long long blocks = 1;
  if (multi) {
    expect_key(in, cursor, tokens, "blocks");
    if (tokens.size() != 2) parse_fail(cursor, "'blocks' needs exactly one value");
    blocks = parse_integer(cursor, tokens[1]);
    if (blocks < 1 || blocks > 4096) parse_fail(cursor, "blocks must be between 1 and 4096");
  }
  for (long long b = 0; b < blocks; ++b) {
    if (multi) {
      expect_key(in, cursor, tokens, "block");
      if (tokens.size() != 2 || parse_integer(cursor, tokens[1]) != b)
        parse_fail(cursor, "expected 'block " + std::to_string(b) + "'");
    }
    file.blocks.push_back(parse_block(in, cursor, tokens, file.dim, cols));
  }
  if (next_tokens(in, cursor, tokens))
    parse_fail(cursor, "unexpected trailing content '" + tokens[0] + "'");
  return file;
}

MatrixFile load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open '" + path + "' for reading");
  return parse_matrix_file(in, path);
}

void write_matrix_file(std::ostream& out, const MatrixFile& file) {
  out << "kind " << kind_name(file.kind) << '\n';
  out << "dim " << file.dim << '\n';
  const bool multi = file.kind == MatrixKind::KrausSet || file.kind == MatrixKind::Povm;
  if (multi) out << "blocks " << file.blocks.size() << '\n';
  for (std::size_t b = 0; b < file.blocks.size(); ++b) {
    if (multi) out << "block " << b << '\n';
    write_block(out, file.blocks[b]);
  }
}

void save_matrix_file(const std::string& path, const MatrixFile& file) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot open '" + path + "' for writing");
  write_matrix_file(out, file);
  out.flush();
  if (!out) fail(Errc::IoError, "failed writing '" + path + "'");
}

DensityMatrix to_density(const MatrixFile& file) {
  require_kind(file, MatrixKind::Density, "to_density");
  return DensityMatrix(file.blocks.at(0));
}

PureStateT<double> to_pure(const MatrixFile& file) {
  require_kind(file, MatrixKind::Pure, "to_pure");
  return PureStateT<double>(file.blocks.at(0).col(0));
}

DensityMatrix to_state(const MatrixFile& file) {
  if (file.kind == MatrixKind::Pure) return DensityMatrix::pure(to_pure(file));
  return to_density(file);
}

KrausChannel to_channel(const MatrixFile& file) {
  require_kind(file, MatrixKind::KrausSet, "to_channel");
  return KrausChannel(file.blocks);
}

Povm to_povm(const MatrixFile& file) {
  require_kind(file, MatrixKind::Povm, "to_povm");
  return Povm(file.blocks);
}

MatrixFile from_density(const DensityMatrix& rho) {
  return {MatrixKind::Density, rho.dim(), {rho.matrix()}};
}

MatrixFile from_pure(const PureStateT<double>& x) {
  return {MatrixKind::Pure, x.dim(), {x.amplitudes()}};
}

MatrixFile from_channel(const KrausChannel& channel) {
  return {MatrixKind::KrausSet, channel.dim(), channel.kraus()};
}

MatrixFile from_povm(const Povm& povm) {
  return {MatrixKind::Povm, povm.dim(), povm.elements()};
}

}  // namespace sinedist
