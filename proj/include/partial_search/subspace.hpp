#pragma once

// Exact dynamics of global/local Grover operators on the three-dimensional
// invariant subspace spanned by
//   |t>    the marked item,
//   |bt'>  uniform superposition of the other items in the target block,
//   |b'>   uniform superposition of all items outside the target block.
// Every operator involved is a real orthogonal 3x3 matrix in this basis.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "partial_search/errors.hpp"
#include "partial_search/search_space.hpp"

namespace partial_search {

struct State3 {
  double amp_t = 0.0;
  double amp_bt = 0.0;
  double amp_bbar = 0.0;

  double norm_squared() const { return amp_t * amp_t + amp_bt * amp_bt + amp_bbar * amp_bbar; }
};

/// Row-major 3x3 matrix in the (|t>, |bt'>, |b'>) basis.
struct Matrix3 {
  std::array<double, 9> a{};

  double operator()(int row, int col) const { return a[static_cast<std::size_t>(3 * row + col)]; }
  double& operator()(int row, int col) { return a[static_cast<std::size_t>(3 * row + col)]; }

  static Matrix3 identity() {
    Matrix3 out;
    out(0, 0) = out(1, 1) = out(2, 2) = 1.0;
    return out;
  }

  Matrix3 transposed() const {
    Matrix3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
    return out;
  }

  double determinant() const {
    const auto& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }

  friend Matrix3 operator*(const Matrix3& x, const Matrix3& y) {
    Matrix3 out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c) + x(r, 2) * y(2, c);
    return out;
  }

  friend State3 operator*(const Matrix3& m, const State3& v) {
    return {m(0, 0) * v.amp_t + m(0, 1) * v.amp_bt + m(0, 2) * v.amp_bbar,
            m(1, 0) * v.amp_t + m(1, 1) * v.amp_bt + m(1, 2) * v.amp_bbar,
            m(2, 0) * v.amp_t + m(2, 1) * v.amp_bt + m(2, 2) * v.amp_bbar};
  }
};

// ---------------------------------------------------------------------------
// Operator sequences

enum class OpKind : std::uint8_t { Global = 0, Local = 1 };

struct Run {
  OpKind kind;
  std::uint64_t count;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Composition of global and local Grover operators, stored in application
/// order: runs()[0] acts first on the initial state. Adjacent runs always have
/// different kinds.
///
/// Two textual forms exist:
///  - tokens, application order: "g:4,l:2,g:1"
///  - product notation, right-to-left: "G_8G_2^2G_8^4" (same sequence for n=8, m=2)
class OperatorSequence {
 public:
  OperatorSequence() = default;

  OperatorSequence(std::initializer_list<Run> runs) {
    for (const Run& r : runs) append(r.kind, r.count);
  }

  /// Bit i of `bits` (Global = 0, Local = 1) is the kind of the i-th applied query.
  static OperatorSequence from_bits(std::uint64_t bits, int length) {
    OperatorSequence seq;
    for (int i = 0; i < length; ++i)
      seq.append(((bits >> i) & 1U) != 0 ? OpKind::Local : OpKind::Global, 1);
    return seq;
  }

  OperatorSequence& append(OpKind kind, std::uint64_t count = 1) {
    if (count == 0) return *this;
    if (!runs_.empty() && runs_.back().kind == kind) {
      runs_.back().count += count;
    } else {
      runs_.push_back({kind, count});
    }
    total_ += count;
    return *this;
  }

  std::span<const Run> runs() const { return runs_; }
  std::size_t run_count() const { return runs_.size(); }
  std::uint64_t total_queries() const { return total_; }
  bool empty() const { return runs_.empty(); }

  std::optional<OpKind> last_kind() const {
    if (runs_.empty()) return std::nullopt;
    return runs_.back().kind;
  }

  /// One character per query in application order, '0' = Global, '1' = Local.
  std::string bit_string() const {
    std::string out;
    out.reserve(total_);
    for (const Run& r : runs_) out.append(r.count, r.kind == OpKind::Global ? '0' : '1');
    return out;
  }

  std::string to_tokens() const {
    std::string out;
    for (const Run& r : runs_) {
      if (!out.empty()) out += ',';
      out += r.kind == OpKind::Global ? "g:" : "l:";
      out += std::to_string(r.count);
    }
    return out;
  }

  static OperatorSequence parse_tokens(std::string_view text) {
    OperatorSequence seq;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view token = text.substr(pos, end - pos);
      if (token.size() < 3 || token[1] != ':' || (token[0] != 'g' && token[0] != 'l')) {
        throw ParameterError("malformed sequence token '" + std::string(token) +
                             "', expected g:<count> or l:<count>");
      }
      seq.append(token[0] == 'g' ? OpKind::Global : OpKind::Local,
                 parse_count(token.substr(2), token));
      pos = end + 1;
    }
    return seq;
  }

  /// Product notation, leftmost factor applied last. Exponent 1 is omitted.
  std::string to_product(int n, int m) const {
    std::string out;
    for (auto it = runs_.rbegin(); it != runs_.rend(); ++it) {
      out += "G_" + std::to_string(it->kind == OpKind::Global ? n : m);
      if (it->count != 1) out += "^" + std::to_string(it->count);
    }
    return out;
  }

  static OperatorSequence parse_product(std::string_view text, int n, int m) {
    struct Factor {
      OpKind kind;
      std::uint64_t count;
    };
    std::vector<Factor> factors;
    std::size_t pos = 0;
    auto digits_at = [&](std::size_t p) {
      std::size_t q = p;
      while (q < text.size() && text[q] >= '0' && text[q] <= '9') ++q;
      return q;
    };
    while (pos < text.size()) {
      if (text.compare(pos, 2, "G_") != 0) {
        throw ParameterError("malformed operator product '" + std::string(text) + "'");
      }
      std::size_t end = digits_at(pos + 2);
      std::string_view label = text.substr(pos + 2, end - pos - 2);
      std::uint64_t which = parse_count(label, text);
      OpKind kind;
      if (which == static_cast<std::uint64_t>(n)) {
        kind = OpKind::Global;
      } else if (which == static_cast<std::uint64_t>(m)) {
        kind = OpKind::Local;
      } else {
        throw ParameterError("operator G_" + std::string(label) + " matches neither n=" +
                             std::to_string(n) + " nor m=" + std::to_string(m));
      }
      std::uint64_t count = 1;
      pos = end;
      if (pos < text.size() && text[pos] == '^') {
        end = digits_at(pos + 1);
        count = parse_count(text.substr(pos + 1, end - pos - 1), text);
        pos = end;
      }
      factors.push_back({kind, count});
    }
    OperatorSequence seq;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) seq.append(it->kind, it->count);
    return seq;
  }

  friend bool operator==(const OperatorSequence& x, const OperatorSequence& y) {
    return x.runs_ == y.runs_;
  }

 private:
  static std::uint64_t parse_count(std::string_view digits, std::string_view context) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
      throw ParameterError("invalid count in '" + std::string(context) + "'");
    }
    return value;
  }

  std::vector<Run> runs_;
  std::uint64_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Probabilities

inline constexpr double kProbabilitySlack = 1e-9;

/// Clamp rounding noise into [0,1]; anything further out signals a bug.
inline double clamp_probability(double p) {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    throw ConsistencyError("probability " + std::to_string(p) + " outside [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

/// |s_n> = sin(g) sin(t2) |t> + sin(g) cos(t2) |bt'> + cos(g) |b'>
inline State3 initial_state(const SearchSpace& space) {
  const Angles a = space.angles();
  const double sg = std::sin(a.gamma);
  return {sg * std::sin(a.theta2), sg * std::cos(a.theta2), std::cos(a.gamma)};
}

/// Global Grover operator D_n O_t. Orthogonal with determinant -1.
inline Matrix3 global_grover_matrix(const SearchSpace& space) {
  const Angles a = space.angles();
  const double sg = std::sin(a.gamma), cg = std::cos(a.gamma);
  const double s2 = std::sin(a.theta2), c2 = std::cos(a.theta2);
  Matrix3 g;
  g(0, 0) = 1.0 - 2.0 * sg * sg * s2 * s2;
  g(0, 1) = 2.0 * sg * sg * s2 * c2;
  g(0, 2) = 2.0 * sg * cg * s2;
  g(1, 0) = -2.0 * sg * sg * s2 * c2;
  g(1, 1) = 2.0 * sg * sg * c2 * c2 - 1.0;
  g(1, 2) = 2.0 * sg * cg * c2;
  g(2, 0) = -2.0 * sg * cg * s2;
  g(2, 1) = 2.0 * sg * cg * c2;
  g(2, 2) = 2.0 * cg * cg - 1.0;
  return g;
}

/// Rotation by `angle` in the (|t>, |bt'>) plane, identity on |b'>.
inline Matrix3 block_rotation(double angle) {
  Matrix3 r = Matrix3::identity();
  const double c = std::cos(angle), s = std::sin(angle);
  r(0, 0) = c;
  r(0, 1) = s;
  r(1, 0) = -s;
  r(1, 1) = c;
  return r;
}

/// Local Grover operator D_m O_t: a rotation by 2*theta2 inside the target block.
inline Matrix3 local_grover_matrix(const SearchSpace& space) {
  return block_rotation(2.0 * space.angles().theta2);
}

/// Cosine/sine pair of a block rotation, applied without building a matrix.
struct BlockRotation {
  double c = 1.0;
  double s = 0.0;

  static BlockRotation local_run(const SearchSpace& space, std::uint64_t count) {
    const double angle = 2.0 * static_cast<double>(count) * space.angles().theta2;
    return {std::cos(angle), std::sin(angle)};
  }

  State3 apply(const State3& v) const {
    return {c * v.amp_t + s * v.amp_bt, -s * v.amp_t + c * v.amp_bt, v.amp_bbar};
  }
};

/// S|s_n>. A run of j local operators is one rotation by 2*j*theta2; a run of
/// j global operators is j matrix-vector products.
inline State3 apply_sequence(const SearchSpace& space, const OperatorSequence& seq,
                             State3 state) {
  const Matrix3 global = global_grover_matrix(space);
  for (const Run& run : seq.runs()) {
    if (run.kind == OpKind::Local) {
      state = BlockRotation::local_run(space, run.count).apply(state);
    } else {
      for (std::uint64_t i = 0; i < run.count; ++i) state = global * state;
    }
  }
  return state;
}

inline State3 apply_sequence(const SearchSpace& space, const OperatorSequence& seq) {
  return apply_sequence(space, seq, initial_state(space));
}

inline double block_probability_of(const State3& v) {
  return clamp_probability(1.0 - v.amp_bbar * v.amp_bbar);
}

inline double target_probability_of(const State3& v) {
  return clamp_probability(v.amp_t * v.amp_t);
}

/// Probability that measuring S|s_n> lands in the target block.
inline double block_success_probability(const SearchSpace& space, const OperatorSequence& seq) {
  return block_probability_of(apply_sequence(space, seq));
}

/// Probability that measuring S|s_n> yields the marked item itself.
inline double full_target_probability(const SearchSpace& space, const OperatorSequence& seq) {
  return target_probability_of(apply_sequence(space, seq));
}

/// sin^2((2k+1) theta1) for plain Grover search on 2^n items.
inline double grover_full_search_probability(int n, std::uint64_t k) {
  if (n < 1 || n > kMaxQubits) throw ParameterError("n out of range");
  const double theta1 = asin_inv_sqrt_pow2(n);
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta1);
  return clamp_probability(s * s);
}

/// Block success probability when only global operators are used (k of them).
inline double grover_only_block_probability(const SearchSpace& space, std::uint64_t k) {
  const double theta1 = space.angles().theta1;
  const double phase = (2.0 * static_cast<double>(k) + 1.0) * theta1;
  const double s = std::sin(phase), c = std::cos(phase);
  const double b = static_cast<double>(space.block_size());
  const double n_items = static_cast<double>(space.database_size());
  return clamp_probability(s * s + (b - 1.0) / (n_items - 1.0) * c * c);
}

// ---------------------------------------------------------------------------
// GRK family G_n G_m^{k2} G_n^{k1}

/// The GRK sequence G_n G_m^{k2} G_n^{k1} in application order.
inline OperatorSequence grk_sequence(std::uint64_t k1, std::uint64_t k2) {
  OperatorSequence seq;
  seq.append(OpKind::Global, k1).append(OpKind::Local, k2).append(OpKind::Global, 1);
  return seq;
}

/// Evaluates G_n G_m^{k2} G_n^{k1} |s_n> for many (k1, k2) pairs. The states
/// G_n^{k1}|s_n> are cached for k1 <= max_k1, so each evaluation costs one
/// block rotation and one matrix-vector product.
class GrkEvaluator {
 public:
  GrkEvaluator(const SearchSpace& space, std::uint64_t max_k1)
      : space_(space), global_(global_grover_matrix(space)) {
    prefix_.reserve(max_k1 + 1);
    prefix_.push_back(initial_state(space));
    for (std::uint64_t i = 0; i < max_k1; ++i) prefix_.push_back(global_ * prefix_.back());
  }

  const SearchSpace& space() const { return space_; }
  std::uint64_t max_k1() const { return prefix_.size() - 1; }

  /// G_n^{k1}|s_n>
  const State3& prefix(std::uint64_t k1) const { return prefix_.at(k1); }

  BlockRotation rotation(std::uint64_t k2) const { return BlockRotation::local_run(space_, k2); }

  State3 state(std::uint64_t k1, const BlockRotation& rot) const {
    return global_ * rot.apply(prefix_.at(k1));
  }

  State3 state(std::uint64_t k1, std::uint64_t k2) const { return state(k1, rotation(k2)); }

 private:
  SearchSpace space_;
  Matrix3 global_;
  std::vector<State3> prefix_;
};

}  // namespace partial_search
