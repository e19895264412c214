#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrmf/hermitian.hpp"

namespace lrmf {

enum class BasisKind { Diagonal, RealSym, ImagAntisym };

/// Compact code for one element of the orthonormal Hermitian sampling basis:
/// a diagonal unit, a real symmetric pair, or an imaginary antisymmetric pair.
/// Indices are 1-based; k < j for the two off-diagonal kinds.
struct BasisIndex {
  BasisKind kind = BasisKind::Diagonal;
  int k = 1;
  int j = 1;

  static BasisIndex diagonal(int k) { return {BasisKind::Diagonal, k, k}; }
  static BasisIndex real_sym(int k, int j) { return {BasisKind::RealSym, k, j}; }
  static BasisIndex imag_antisym(int k, int j) {
    return {BasisKind::ImagAntisym, k, j};
  }

  void validate(int m) const;

  /// Flat position in 0..m^2-1: diagonals first, then real symmetric pairs in
  /// lexicographic order, then the imaginary antisymmetric pairs.
  int ordinal(int m) const;
  static BasisIndex from_ordinal(int m, int ordinal);
  static int count(int m) { return m * m; }

  bool operator==(const BasisIndex&) const = default;
};

/// Dense matrix of the basis element; unit Frobenius norm, Hermitian.
Hermitian basis_element(const BasisIndex& idx, int m);

/// <S, basis_element(idx)> read off directly from one or two entries of S.
double inner_with_basis(const Hermitian& s, const BasisIndex& idx);

struct Observation {
  double tau = 0.0;
  BasisIndex x;
  double y = 0.0;
};

/// Immutable sample store for the trace-regression model
/// y = <A(tau), X> + noise, with X drawn from the sampling basis.
class Dataset {
 public:
  Dataset(std::vector<Observation> observations, int m, double a,
          std::uint64_t seed, std::string description = "");

  const std::vector<Observation>& observations() const { return obs_; }
  std::size_t size() const { return obs_.size(); }
  int m() const { return m_; }
  /// Recorded bound with |y| <= a for every observation.
  double a() const { return a_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& description() const { return description_; }

  /// Observation indices sorted by tau (precomputed; window queries are
  /// binary searches over this order).
  const std::vector<std::uint32_t>& sorted_by_tau() const { return sorted_; }

  /// Indices of observations with tau in [lo, hi], in tau order.
  std::pair<std::size_t, std::size_t> window(double lo, double hi) const;

 private:
  std::vector<Observation> obs_;
  int m_ = 0;
  double a_ = 0.0;
  std::uint64_t seed_ = 0;
  std::string description_;
  std::vector<std::uint32_t> sorted_;
};

/// CSV with header `tau,kind,k,j,y`, plus a `<path>.meta` sidecar recording
/// m, a, seed, n and the generator description.
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace lrmf
