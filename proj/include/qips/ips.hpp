#pragma once

// Nearest-neighbour interacting particle systems on sites 0..N-1 with a free
// right boundary: the local 4x4 operator updates the left site of each pair and
// leaves the right site untouched, so site N-1 never changes.
//
// Basis convention: pair states are ordered 00, 01, 10, 11 (left bit first);
// a configuration's index has site 0 as the most significant bit. Column c of
// an operator holds the weights of moving out of state c.

#include "qips/matrix.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qips {

inline constexpr int default_max_sites = 12;
inline constexpr double default_classification_tol = 1e-10;
inline constexpr double pca_entry_tol = 1e-12;

class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() < 2) throw std::domain_error("a configuration needs at least 2 sites");
    for (auto b : bits_)
      if (b > 1) throw std::domain_error("configuration entries must be 0 or 1");
  }

  static Configuration parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("configuration must be a 0/1 string: " + std::string(text));
      bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Configuration(std::move(bits));
  }

  static Configuration from_index(std::size_t index, int sites) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(sites));
    for (int i = 0; i < sites; ++i) bits[static_cast<std::size_t>(i)] = (index >> (sites - 1 - i)) & 1u;
    return Configuration(std::move(bits));
  }

  int sites() const { return static_cast<int>(bits_.size()); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::size_t index() const {
    std::size_t idx = 0;
    for (auto b : bits_) idx = (idx << 1) | b;
    return idx;
  }

  std::string str() const {
    std::string s;
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Index of pair state (left, right) in the 00, 01, 10, 11 ordering.
constexpr std::size_t pair_index(unsigned left, unsigned right) { return 2 * left + right; }

template <class T>
struct LocalOperator {
  Matrix<T> entries = Matrix<T>(4, 4);

  /// Weight of (i,j) -> (k,l).
  const T& weight(unsigned i, unsigned j, unsigned k, unsigned l) const {
    return entries(pair_index(k, l), pair_index(i, j));
  }
};

template <class T>
struct DKParams {
  T p{0};
  T q{0};
};

template <class T>
void validate(const DKParams<T>& params) {
  auto in_unit = [](const T& x) { return !(x < T(0)) && !(T(1) < x); };
  if (!in_unit(params.p) || !in_unit(params.q)) throw std::domain_error("DK parameters must lie in [0,1]");
}

/// Domany-Kinzel local operator. The left site becomes 1 with probability 0,
/// p, p, q when the old pair is 00, 01, 10, 11.
template <class T>
LocalOperator<T> build_dk_local(const DKParams<T>& params) {
  validate(params);
  const T& p = params.p;
  const T& q = params.q;
  LocalOperator<T> op;
  auto& a = op.entries;
  a(0, 0) = T(1);
  a(0, 2) = T(1) - p;
  a(1, 1) = T(1) - p;
  a(1, 3) = T(1) - q;
  a(2, 2) = p;
  a(3, 1) = p;
  a(3, 3) = q;
  return op;
}

struct Classification {
  bool right_preserving = false;
  bool is_pca = false;
  bool is_qca = false;
  double tolerance = default_classification_tol;
};

template <class T>
bool is_right_preserving(const LocalOperator<T>& op, double tol = default_classification_tol) {
  for (std::size_t row = 0; row < 4; ++row)
    for (std::size_t col = 0; col < 4; ++col)
      if ((row & 1u) != (col & 1u) && !scalar_traits<T>::is_zero(op.entries(row, col), tol)) return false;
  return true;
}

namespace detail {

template <class T>
double real_part(const T& x) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return x.real();
  } else {
    return to_double(x);
  }
}

template <class T>
double imag_part(const T& x) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return x.imag();
  } else {
    return 0.0;
  }
}

template <class T>
std::complex<double> as_complex(const T& x) {
  return {real_part(x), imag_part(x)};
}

}  // namespace detail

/// PCA: real entries in [0,1] (within 1e-12) and unit column sums (within tol).
/// QCA: the 4x4 matrix is unitary within tol.
template <class T>
Classification classify_local(const LocalOperator<T>& op, double tol = default_classification_tol) {
  Classification out;
  out.tolerance = tol;
  out.right_preserving = is_right_preserving(op, tol);

  bool pca = true;
  for (std::size_t col = 0; col < 4 && pca; ++col) {
    double sum = 0.0;
    for (std::size_t row = 0; row < 4; ++row) {
      const auto& x = op.entries(row, col);
      double re = detail::real_part(x);
      if (std::abs(detail::imag_part(x)) > pca_entry_tol || re < -pca_entry_tol || re > 1.0 + pca_entry_tol) {
        pca = false;
        break;
      }
      sum += re;
    }
    if (std::abs(sum - 1.0) > tol) pca = false;
  }
  out.is_pca = pca;

  bool qca = true;
  for (std::size_t c1 = 0; c1 < 4 && qca; ++c1)
    for (std::size_t c2 = 0; c2 < 4; ++c2) {
      std::complex<double> dot = 0.0;
      for (std::size_t row = 0; row < 4; ++row)
        dot += detail::as_complex(op.entries(row, c1)) * std::conj(detail::as_complex(op.entries(row, c2)));
      if (std::abs(dot - (c1 == c2 ? 1.0 : 0.0)) > tol) {
        qca = false;
        break;
      }
    }
  out.is_qca = qca;
  return out;
}

template <class T>
struct GlobalOperator {
  Matrix<T> entries;
  int sites = 0;
};

/// The 2^N x 2^N operator obtained by sweeping the local operator over pairs
/// (0,1), (1,2), ..., (N-2,N-1) in that order. Under right preservation the
/// weight of c -> r is the product of the pair weights
/// a^{c_x c_{x+1}}_{r_x c_{x+1}} and vanishes unless r and c share site N-1.
template <class T>
GlobalOperator<T> global_from_local(const LocalOperator<T>& op, int sites, int max_sites = default_max_sites) {
  if (sites < 2) throw std::domain_error("global operator needs N >= 2");
  if (sites > max_sites) throw std::domain_error("N exceeds the configured cap of " + std::to_string(max_sites));
  if (!is_right_preserving(op)) throw structure_error("local operator is not right-preserving");

  const std::size_t dim = std::size_t{1} << sites;
  GlobalOperator<T> g{Matrix<T>(dim, dim), sites};
  const std::size_t free_states = dim / 2;
  for (std::size_t c = 0; c < dim; ++c) {
    auto bit = [&](std::size_t idx, int site) -> unsigned { return (idx >> (sites - 1 - site)) & 1u; };
    for (std::size_t prefix = 0; prefix < free_states; ++prefix) {
      const std::size_t r = (prefix << 1) | (c & 1u);
      T w(1);
      for (int x = 0; x + 1 < sites; ++x) {
        const unsigned cx = bit(c, x);
        const unsigned cy = bit(c, x + 1);
        w *= op.weight(cx, cy, bit(r, x), cy);
        if (w == T(0)) break;
      }
      g.entries(r, c) = w;
    }
  }
  return g;
}

template <class T>
struct BlockPair {
  Matrix<T> block0;  // configurations ending in 0
  Matrix<T> block1;  // configurations ending in 1
};

/// Splits by the last bit. Inside a block the row/column order is the integer
/// value of the first N-1 bits, e.g. 000,010,100,110 | 001,011,101,111.
template <class T>
BlockPair<T> split_blocks(const GlobalOperator<T>& g, double tol = default_classification_tol) {
  const std::size_t dim = g.entries.rows();
  if (dim < 4 || dim != g.entries.cols() || (dim & (dim - 1)) != 0) throw structure_error("global operator must be 2^N square");
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if ((r & 1u) != (c & 1u) && !scalar_traits<T>::is_zero(g.entries(r, c), tol))
        throw structure_error("nonzero entry couples configurations with different last site");
  const std::size_t half = dim / 2;
  BlockPair<T> out{Matrix<T>(half, half), Matrix<T>(half, half)};
  for (std::size_t r = 0; r < half; ++r)
    for (std::size_t c = 0; c < half; ++c) {
      out.block0(r, c) = g.entries(2 * r, 2 * c);
      out.block1(r, c) = g.entries(2 * r + 1, 2 * c + 1);
    }
  return out;
}

/// Draws trajectories of a PCA. Every left site is redrawn from the column of
/// its old pair state, which is exactly the law of one global-operator step.
class Sampler {
 public:
  Sampler(const LocalOperator<double>& op, std::uint64_t seed) : rng_(seed) {
    if (!classify_local(op).is_pca) throw std::domain_error("sampling requires a PCA local operator");
    for (unsigned i = 0; i < 2; ++i)
      for (unsigned j = 0; j < 2; ++j) prob_one_[pair_index(i, j)] = op.weight(i, j, 1, j);
  }

  Configuration step(const Configuration& current) {
    Configuration next = current;
    for (int x = 0; x + 1 < current.sites(); ++x) {
      const double p1 = prob_one_[pair_index(current[x], current[x + 1])];
      next[x] = uniform() < p1 ? 1 : 0;
    }
    return next;
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double prob_one_[4] = {};
};

template <class T>
LocalOperator<double> to_double_operator(const LocalOperator<T>& op) {
  return {op.entries.template cast<double>()};
}

inline std::vector<Configuration> sample_trajectory(const LocalOperator<double>& op, const Configuration& init, int steps,
                                                    std::uint64_t seed) {
  if (steps < 0) throw std::domain_error("steps must be non-negative");
  Sampler sampler(op, seed);
  std::vector<Configuration> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(init);
  for (int t = 0; t < steps; ++t) path.push_back(sampler.step(path.back()));
  return path;
}

}  // namespace qips
