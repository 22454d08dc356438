#pragma once

#include <filesystem>
#include <vector>

#include "rcurc/dense_matrix.hpp"
#include "rcurc/sampling.hpp"
#include "rcurc/solver.hpp"

namespace rcurc {

/// Binary matrix codec. Layout: 8-byte magic "RCURCMAT", u32 little-endian
/// version (1), u64 LE rows, u64 LE cols, then rows*cols real64 LE values in
/// row-major order. Round trips are bit-exact.
///
/// write_matrix rejects empty matrices (ArgumentError); read_matrix raises
/// FormatError naming the byte offset for bad magic/version/shape and the
/// expected vs actual length for truncation; I/O failures raise IoError.
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix(const std::filesystem::path& path);

/// Stack grayscale frames as matrix columns: each binary 8-bit PGM (P5)
/// frame of height H and width W is vectorized column-major (pixel (r, c)
/// lands at row c*H + r) into one column, in the order given. All frames
/// must share dimensions; values are real64 in [0, 255].
DenseMatrix frames_to_matrix(const std::vector<std::filesystem::path>& paths);

/// Observation codec: JSON text with alphabetically sorted keys, so equal
/// observations serialize to identical bytes. Reading re-validates every
/// structural invariant (index ranges, mask ordering, union coverage) by
/// rebuilding through the validating constructors.
void write_observation(const std::filesystem::path& path,
                       const CcsObservation& obs);
CcsObservation read_observation(const std::filesystem::path& path);

/// Iteration trace as CSV: header `iter,e_k,zeta_k,wall_ms`, one row per
/// iteration at 17 significant digits (doubles parse back identically),
/// ending with a `# termination=<reason>` comment line.
void write_trace(const std::filesystem::path& path, const SolveReport& report);

}  // namespace rcurc
