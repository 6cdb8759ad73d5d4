#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sinedist/channels.hpp"
#include "sinedist/states.hpp"

namespace sinedist {

enum class MatrixKind { Density, Pure, KrausSet, Povm };

std::string_view kind_name(MatrixKind kind);
MatrixKind parse_kind(std::string_view name);  // ParseError on an unknown kind

// One parsed object file: a state, an operation, or a measurement.
//
// The format is a line-oriented text document.  `#` starts a comment, blank
// lines are skipped, and each remaining line is `key values...`:
//
//   kind density            | density, pure, kraus_set, povm
//   dim 2
//   re 0.5 0 0 0.5          | row-major real parts (dim entries for pure,
//   im 0 0 0 0              | dim*dim otherwise), imaginary parts likewise
//
// kraus_set and povm files carry several matrices:
//
//   kind kraus_set
//   dim 2
//   blocks 2
//   block 0
//   re ... / im ...
//   block 1
//   re ... / im ...
//
// Writers emit 17 significant digits so a write-then-read round trip
// reproduces every double exactly.
struct MatrixFile {
  MatrixKind kind = MatrixKind::Density;
  Eigen::Index dim = 0;
  std::vector<CMatrix> blocks;  // pure: one dim x 1 column; otherwise dim x dim
};

// Parsing reports ParseError with "<name>:<line>: <problem>"; numbers must
// be finite.  Structural shape is checked here, object invariants (unit
// trace, completeness, ...) by the typed conversions below.
MatrixFile parse_matrix_file(std::istream& in, std::string_view name);
MatrixFile load_matrix_file(const std::string& path);  // IoError if unreadable

void write_matrix_file(std::ostream& out, const MatrixFile& file);
void save_matrix_file(const std::string& path, const MatrixFile& file);  // IoError

// Typed conversions; each validates the object's invariants on construction
// and demands the matching kind.
DensityMatrix to_density(const MatrixFile& file);
PureStateT<double> to_pure(const MatrixFile& file);
// density or pure, viewed as a density matrix either way.
DensityMatrix to_state(const MatrixFile& file);
KrausChannel to_channel(const MatrixFile& file);
Povm to_povm(const MatrixFile& file);

MatrixFile from_density(const DensityMatrix& rho);
MatrixFile from_pure(const PureStateT<double>& x);
MatrixFile from_channel(const KrausChannel& channel);
MatrixFile from_povm(const Povm& povm);

}  // namespace sinedist
