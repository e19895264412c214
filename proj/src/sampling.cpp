#include "lrmf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lrmf {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

int pair_offset(int m, int k, int j) {
  // 1-based k < j mapped to 0..m(m-1)/2-1 in lexicographic order.
  const int k0 = k - 1;
  return k0 * m - k0 * (k0 + 1) / 2 + (j - k - 1);
}

std::string kind_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::Diagonal: return "diag";
    case BasisKind::RealSym: return "sym";
    case BasisKind::ImagAntisym: return "asym";
  }
  return "?";
}

BasisKind kind_from_name(const std::string& name) {
  if (name == "diag") return BasisKind::Diagonal;
  if (name == "sym") return BasisKind::RealSym;
  if (name == "asym") return BasisKind::ImagAntisym;
  throw IoError("unknown basis kind: " + name);
}

}  // namespace

void BasisIndex::validate(int m) const {
  const bool diag = kind == BasisKind::Diagonal;
  if (k < 1 || j < 1 || k > m || j > m)
    throw InvalidArgument("basis index out of range for m=" + std::to_string(m));
  if (diag && k != j) throw InvalidArgument("diagonal basis index needs k == j");
  if (!diag && !(k < j))
    throw InvalidArgument("off-diagonal basis index needs k < j");
}

int BasisIndex::ordinal(int m) const {
  validate(m);
  const int pairs = m * (m - 1) / 2;
  switch (kind) {
    case BasisKind::Diagonal: return k - 1;
    case BasisKind::RealSym: return m + pair_offset(m, k, j);
    case BasisKind::ImagAntisym: return m + pairs + pair_offset(m, k, j);
  }
  return -1;
}

BasisIndex BasisIndex::from_ordinal(int m, int ordinal) {
  const int pairs = m * (m - 1) / 2;
  if (ordinal < 0 || ordinal >= m * m)
    throw InvalidArgument("basis ordinal out of range");
  if (ordinal < m) return diagonal(ordinal + 1);
  int rest = ordinal - m;
  const BasisKind kind = rest < pairs ? BasisKind::RealSym : BasisKind::ImagAntisym;
  if (rest >= pairs) rest -= pairs;
  int k = 1;
  while (rest >= m - k) {
    rest -= m - k;
    ++k;
  }
  const int j = k + 1 + rest;
  return {kind, k, j};
}

Hermitian basis_element(const BasisIndex& idx, int m) {
  idx.validate(m);
  CMatrix e = CMatrix::Zero(m, m);
  const int r = idx.k - 1, c = idx.j - 1;
  switch (idx.kind) {
    case BasisKind::Diagonal:
      e(r, r) = 1.0;
      break;
    case BasisKind::RealSym:
      e(r, c) = kInvSqrt2;
      e(c, r) = kInvSqrt2;
      break;
    case BasisKind::ImagAntisym:
      e(r, c) = Complex(0.0, kInvSqrt2);
      e(c, r) = Complex(0.0, -kInvSqrt2);
      break;
  }
  return hermitian_unchecked(std::move(e));
}

double inner_with_basis(const Hermitian& s, const BasisIndex& idx) {
  idx.validate(static_cast<int>(s.dim()));
  const int r = idx.k - 1, c = idx.j - 1;
  switch (idx.kind) {
    case BasisKind::Diagonal: return s(r, r).real();
    case BasisKind::RealSym: return std::sqrt(2.0) * s(r, c).real();
    case BasisKind::ImagAntisym: return std::sqrt(2.0) * s(r, c).imag();
  }
  return 0.0;
}

Dataset::Dataset(std::vector<Observation> observations, int m, double a,
                 std::uint64_t seed, std::string description)
    : obs_(std::move(observations)),
      m_(m),
      a_(a),
      seed_(seed),
      description_(std::move(description)) {
  if (m_ <= 0) throw InvalidArgument("Dataset: m must be positive");
  if (obs_.empty()) throw InvalidArgument("Dataset: no observations");
  for (const auto& o : obs_) {
    if (o.tau < 0.0 || o.tau > 1.0)
      throw InvalidArgument("Dataset: tau outside [0,1]");
    o.x.validate(m_);
    if (std::abs(o.y) > a_ * (1.0 + 1e-12))
      throw InvalidArgument("Dataset: |y| exceeds the recorded bound a");
  }
  sorted_.resize(obs_.size());
  for (std::uint32_t i = 0; i < sorted_.size(); ++i) sorted_[i] = i;
  std::stable_sort(sorted_.begin(), sorted_.end(),
                   [&](std::uint32_t l, std::uint32_t r) {
                     return obs_[l].tau < obs_[r].tau;
                   });
}

std::pair<std::size_t, std::size_t> Dataset::window(double lo, double hi) const {
  auto cmp_lo = [&](std::uint32_t i, double v) { return obs_[i].tau < v; };
  auto cmp_hi = [&](double v, std::uint32_t i) { return v < obs_[i].tau; };
  const auto begin =
      std::lower_bound(sorted_.begin(), sorted_.end(), lo, cmp_lo);
  const auto end = std::upper_bound(sorted_.begin(), sorted_.end(), hi, cmp_hi);
  return {static_cast<std::size_t>(begin - sorted_.begin()),
          static_cast<std::size_t>(end - sorted_.begin())};
}

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "tau,kind,k,j,y\n" << std::setprecision(17);
  for (const auto& o : data.observations())
    out << o.tau << "," << kind_name(o.x.kind) << "," << o.x.k << "," << o.x.j
        << "," << o.y << "\n";
  if (!out) throw IoError("write failed: " + path);

  std::ofstream meta(path + ".meta");
  if (!meta) throw IoError("cannot open for writing: " + path + ".meta");
  meta << std::setprecision(17);
  meta << "m=" << data.m() << "\n";
  meta << "a=" << data.a() << "\n";
  meta << "seed=" << data.seed() << "\n";
  meta << "n=" << data.size() << "\n";
  meta << "spec=" << data.description() << "\n";
}

Dataset load_dataset(const std::string& path) {
  std::ifstream meta(path + ".meta");
  if (!meta) throw IoError("cannot open: " + path + ".meta");
  int m = 0;
  double a = 0.0;
  std::uint64_t seed = 0;
  std::string description;
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "m") m = std::stoi(value);
    else if (key == "a") a = std::stod(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "spec") description = value;
  }

  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::getline(in, line);
  if (line != "tau,kind,k,j,y") throw IoError("dataset file: bad header");
  std::vector<Observation> obs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    Observation o;
    std::getline(row, field, ',');
    o.tau = std::stod(field);
    std::getline(row, field, ',');
    const BasisKind kind = kind_from_name(field);
    std::getline(row, field, ',');
    const int k = std::stoi(field);
    std::getline(row, field, ',');
    const int j = std::stoi(field);
    o.x = BasisIndex{kind, k, j};
    std::getline(row, field, ',');
    o.y = std::stod(field);
    obs.push_back(o);
  }
  return Dataset(std::move(obs), m, a, seed, description);
}

}  // namespace lrmf
