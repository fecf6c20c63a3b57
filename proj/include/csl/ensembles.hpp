#pragma once

#include <string>
#include <vector>

#include "csl/complex_matrix.hpp"
#include "csl/rng.hpp"

namespace csl {

enum class Ensemble {
    kGinibre,          // i.i.d. standard complex normal entries
    kGue,              // Hermitian, standard second moments
    kUnitary,          // orthonormalization of a Ginibre draw
    kDiagonalComplex,  // diagonal, entries uniform on the closed unit disk
    kCommuting,        // commuting normal tuple (see sample_commuting_normal_tuple)
};

Ensemble ensemble_from_name(const std::string& name);
std::string ensemble_name(Ensemble kind);

/// One matrix from the named ensemble. Entry consumption order is fixed
/// (row-major, re before im), so a draw is a pure function of the stream.
ComplexMatrix sample_matrix(Ensemble kind, std::size_t n, RngStream& rng);

/// A commuting normal tuple a_j = U diag(lambda^(j)) U* with a shared
/// unitary frame. The frame and the stored diagonals are returned so tests
/// can diagonalize back; diagonals are drawn uniformly from the unit disk.
struct CommutingTuple {
    std::vector<ComplexMatrix> matrices;
    ComplexMatrix frame;                         // U
    std::vector<std::vector<Complex>> diagonals;  // lambda^(j), j = 0..d-1
};

CommutingTuple sample_commuting_normal_tuple(std::size_t d, std::size_t n, RngStream& rng);

}  // namespace csl
