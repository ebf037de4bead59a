#include "uqm/angmom.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uqm::angmom {

namespace {

using I128 = __int128;

constexpr int kMaxFactorial = 33;  // largest n with n! inside a 128-bit word

const std::array<I128, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<I128, kMaxFactorial + 1> t{};
    t[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

I128 factorial(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw std::domain_error("clebsch_gordan: factorial argument out of range");
  }
  return factorial_table()[n];
}

I128 checked_mul(I128 a, I128 b) {
  I128 out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::domain_error("clebsch_gordan: exact arithmetic overflow");
  }
  return out;
}

I128 checked_add(I128 a, I128 b) {
  I128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::domain_error("clebsch_gordan: exact arithmetic overflow");
  }
  return out;
}

I128 gcd128(I128 a, I128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact rational with eager reduction; overflow throws rather than wraps.
struct Rat {
  I128 num = 0;
  I128 den = 1;

  void normalize() {
    if (den == 0) throw std::logic_error("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const I128 g = gcd128(num == 0 ? den : num, den);
    num /= g;
    den /= g;
  }
};

Rat rat_mul(const Rat& a, const Rat& b) {
  const I128 g1 = gcd128(a.num, b.den);
  const I128 g2 = gcd128(b.num, a.den);
  Rat r{checked_mul(a.num / (g1 == 0 ? 1 : g1), b.num / (g2 == 0 ? 1 : g2)),
        checked_mul(a.den / (g2 == 0 ? 1 : g2), b.den / (g1 == 0 ? 1 : g1))};
  r.normalize();
  return r;
}

Rat rat_add(const Rat& a, const Rat& b) {
  const I128 g = gcd128(a.den, b.den);
  const I128 bd = b.den / g;
  const I128 ad = a.den / g;
  Rat r{checked_add(checked_mul(a.num, bd), checked_mul(b.num, ad)),
        checked_mul(a.den, bd)};
  r.normalize();
  return r;
}

double rat_to_double(const Rat& r) {
  return static_cast<double>(static_cast<long double>(r.num) /
                             static_cast<long double>(r.den));
}

I128 binomial_i128(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

double binomial(int n, int k) {
  return static_cast<double>(static_cast<long double>(binomial_i128(n, k)));
}

// In-place single-qubit unitary at one register position (big-endian bits).
void apply_at_position(Vector& amps, const Matrix& u, int pos, int n) {
  const std::uint64_t mask = std::uint64_t{1} << (n - 1 - pos);
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if (idx & mask) continue;
    const Complex a0 = amps(static_cast<Eigen::Index>(idx));
    const Complex a1 = amps(static_cast<Eigen::Index>(idx | mask));
    amps(static_cast<Eigen::Index>(idx)) = u(0, 0) * a0 + u(0, 1) * a1;
    amps(static_cast<Eigen::Index>(idx | mask)) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

// SU(2) rotation taking |0> to phi and |1> to the orthogonal state.
Matrix rotation_from_state(const PureState& phi) {
  const Complex a = phi.amplitudes()(0);
  const Complex b = phi.amplitudes()(1);
  Matrix u(2, 2);
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j, HalfInt m) {
  const int tj1 = j1.twice, tm1 = m1.twice, tj2 = j2.twice, tm2 = m2.twice;
  const int tj = j.twice, tm = m.twice;
  if (tj1 < 0 || tj2 < 0 || tj < 0) {
    throw std::invalid_argument("clebsch_gordan: negative spin");
  }
  if (((tj1 + tm1) | (tj2 + tm2) | (tj + tm)) & 1) {
    throw std::invalid_argument("clebsch_gordan: spin/projection parity mismatch");
  }
  // Selection rules: zero coefficient, not an error.
  if (tm1 + tm2 != tm) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm) > tj) {
    return 0.0;
  }
  if (tj < std::abs(tj1 - tj2) || tj > tj1 + tj2) return 0.0;

  const int a1 = (tj1 + tm1) / 2, a2 = (tj1 - tm1) / 2;
  const int a3 = (tj2 + tm2) / 2, a4 = (tj2 - tm2) / 2;
  const int a5 = (tj + tm) / 2, a6 = (tj - tm) / 2;
  const int t1 = (tj1 + tj2 - tj) / 2;
  const int t2 = (tj1 - tj2 + tj) / 2;
  const int t3 = (-tj1 + tj2 + tj) / 2;
  const int u1 = (tj - tj2 + tm1) / 2;  // may be negative
  const int u2 = (tj - tj1 - tm2) / 2;  // may be negative

  // Squared prefactor (2j+1) Delta(j1,j2,j) times the six projection
  // factorials; everything stays an exact rational.
  Rat pre{tj + 1, 1};
  pre = rat_mul(pre, Rat{factorial(t1), 1});
  pre = rat_mul(pre, Rat{factorial(t2), 1});
  pre = rat_mul(pre, Rat{factorial(t3), 1});
  pre = rat_mul(pre, Rat{1, factorial((tj1 + tj2 + tj) / 2 + 1)});
  for (const int a : {a1, a2, a3, a4, a5, a6}) {
    pre = rat_mul(pre, Rat{factorial(a), 1});
  }

  const int z_lo = std::max({0, -u1, -u2});
  const int z_hi = std::min({t1, a2, a3});
  Rat sum{0, 1};
  for (int z = z_lo; z <= z_hi; ++z) {
    I128 d = factorial(z);
    d = checked_mul(d, factorial(t1 - z));
    d = checked_mul(d, factorial(a2 - z));
    d = checked_mul(d, factorial(a3 - z));
    d = checked_mul(d, factorial(u1 + z));
    d = checked_mul(d, factorial(u2 + z));
    sum = rat_add(sum, Rat{(z % 2 == 0) ? 1 : -1, d});
  }
  if (sum.num == 0) return 0.0;
  const double sign = sum.num < 0 ? -1.0 : 1.0;
  return sign * std::sqrt(rat_to_double(pre)) * std::abs(rat_to_double(sum));
}

double bk_coefficient(int n, int m, int k) {
  if (n < 1 || m < n) {
    throw std::invalid_argument("bk_coefficient: need 1 <= n <= m");
  }
  if (k < 0 || k > m - n) {
    throw std::invalid_argument("bk_coefficient: k out of range");
  }
  if (m > kMaxFactorial) {
    throw std::domain_error("bk_coefficient: m too large for exact table");
  }
  // (n+1)/(m+1) * C(m-n,k)/C(m,k), exactly, then one square root.
  Rat r{n + 1, m + 1};
  r = rat_mul(r, Rat{binomial_i128(m - n, k), 1});
  r = rat_mul(r, Rat{1, binomial_i128(m, k)});
  const double val = std::sqrt(rat_to_double(r));
  return (k % 2 == 0) ? val : -val;
}

std::vector<double> bk_vector(int n, int m) {
  std::vector<double> b;
  b.reserve(m - n + 1);
  for (int k = 0; k <= m - n; ++k) b.push_back(bk_coefficient(n, m, k));
  return b;
}

PureState dicke_state(int num_qubits, int excitations,
                      std::vector<std::string> labels) {
  if (num_qubits < 1 || num_qubits > 24) {
    throw std::invalid_argument("dicke_state: qubit count out of range");
  }
  if (excitations < 0 || excitations > num_qubits) {
    throw std::invalid_argument("dicke_state: excitation count out of range");
  }
  if (labels.empty()) {
    for (int i = 0; i < num_qubits; ++i) labels.push_back("q" + std::to_string(i));
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const double amp = 1.0 / std::sqrt(binomial(num_qubits, excitations));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (std::popcount(x) == excitations) {
      amps(static_cast<Eigen::Index>(x)) = amp;
    }
  }
  return PureState(std::move(amps), std::move(labels));
}

Matrix symmetric_projector_m(int m) {
  if (m < 1 || m > 10) {
    throw std::invalid_argument("symmetric_projector_m: m out of range (1..10)");
  }
  const Eigen::Index dim = Eigen::Index{1} << m;
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k <= m; ++k) {
    const Vector d = dicke_state(m, k).amplitudes();
    p += d * d.adjoint();
  }
  return p;
}

Matrix symmetric_projector_by_permutations(int m) {
  if (m < 1 || m > 6) {
    throw std::invalid_argument(
        "symmetric_projector_by_permutations: m out of range (1..6)");
  }
  const Eigen::Index dim = Eigen::Index{1} << m;
  Matrix acc = Matrix::Zero(dim, dim);
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
      std::uint64_t y = 0;
      for (int i = 0; i < m; ++i) {
        const std::uint64_t bit = (x >> (m - 1 - i)) & 1u;
        y |= bit << (m - 1 - perm[i]);
      }
      acc(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / static_cast<double>(count);
}

PureState apply_product_unitary(const PureState& psi, const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u, kAlgebraTol)) {
    throw std::invalid_argument("apply_product_unitary: need a 2x2 unitary");
  }
  Vector amps = psi.amplitudes();
  const int n = psi.num_qubits();
  for (int pos = 0; pos < n; ++pos) apply_at_position(amps, u, pos, n);
  return PureState(std::move(amps), psi.labels());
}

NMOutcome run_nm_protocol(const CloningSpec& spec) {
  const int n = spec.n, m = spec.m, num_pairs = m - n;
  if (spec.phi.num_qubits() != 1) {
    throw std::invalid_argument("run_nm_protocol: input must be one qubit");
  }
  if (n < 1 || m < n) {
    throw std::invalid_argument("run_nm_protocol: need 1 <= n <= m");
  }
  const int total = m + num_pairs;  // n inputs + (m-n) pairs
  if (total > 22) {
    throw std::invalid_argument("run_nm_protocol: register exceeds 22 qubits");
  }

  // Assemble |phi>^n with the program pairs, then sort the register so the
  // m clone slots come first and the B qubits last.
  std::vector<std::string> order;
  PureState reg = spec.phi.relabeled({"S1"});
  order.push_back("S1");
  for (int i = 2; i <= n; ++i) {
    const std::string label = "S" + std::to_string(i);
    reg = tensor(reg, spec.phi.relabeled({label}));
    order.push_back(label);
  }
  const BellKind pair_kind = spec.program == ProgramState::Singlet
                                 ? BellKind::PsiMinus
                                 : BellKind::PhiPlus;
  for (int i = 1; i <= num_pairs; ++i) {
    const std::string a = "A" + std::to_string(i);
    const std::string b = "B" + std::to_string(i);
    reg = tensor(reg, bell_state(pair_kind, a, b));
  }
  for (int i = 1; i <= num_pairs; ++i) order.push_back("A" + std::to_string(i));
  for (int i = 1; i <= num_pairs; ++i) order.push_back("B" + std::to_string(i));
  if (num_pairs > 0) reg = reg.permuted(order);

  // Project the first m qubits onto the symmetric subspace, Dicke sector by
  // Dicke sector: rows group the clone bits, columns the B bits.
  const std::uint64_t rows = std::uint64_t{1} << m;
  const std::uint64_t cols = std::uint64_t{1} << num_pairs;
  const Vector& amps = reg.amplitudes();
  Matrix sector_sums = Matrix::Zero(m + 1, static_cast<Eigen::Index>(cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    const int k = std::popcount(r);
    for (std::uint64_t c = 0; c < cols; ++c) {
      sector_sums(k, static_cast<Eigen::Index>(c)) +=
          amps(static_cast<Eigen::Index>(r * cols + c));
    }
  }
  Vector projected(static_cast<Eigen::Index>(rows * cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    const int k = std::popcount(r);
    const double weight = binomial(m, k);
    for (std::uint64_t c = 0; c < cols; ++c) {
      projected(static_cast<Eigen::Index>(r * cols + c)) =
          sector_sums(k, static_cast<Eigen::Index>(c)) / weight;
    }
  }

  const double p = projected.squaredNorm();
  const PureState post_raw(projected / std::sqrt(p), order);

  // Expansion coefficients over the rotated excitation basis: Dicke states
  // in the (phi, phi-perp) frame on the clones, paired with the matching
  // B-side frame (conjugated by i sigma_Y for the triplet program).
  const Matrix u = rotation_from_state(spec.phi);
  Matrix u_b = u;
  if (spec.program == ProgramState::Triplet) {
    Matrix i_sigma_y(2, 2);
    i_sigma_y << 0.0, 1.0, -1.0, 0.0;
    u_b = i_sigma_y * u;
  }
  std::vector<std::string> clone_labels(order.begin(), order.begin() + m);
  std::vector<std::string> b_labels(order.begin() + m, order.end());
  std::vector<Complex> overlaps;
  for (int k = 0; k <= num_pairs; ++k) {
    PureState basis =
        apply_product_unitary(dicke_state(m, k, clone_labels), u);
    if (num_pairs > 0) {
      const PureState b_side = apply_product_unitary(
          dicke_state(num_pairs, num_pairs - k, b_labels), u_b);
      basis = tensor(basis, b_side);
    }
    overlaps.push_back(basis.inner(post_raw));
  }
  const Complex phase = overlaps[0] / std::abs(overlaps[0]);
  std::vector<double> b;
  b.reserve(overlaps.size());
  for (const Complex& c : overlaps) {
    const Complex fixed = c / phase;
    if (std::abs(fixed.imag()) > 1e-9) {
      throw std::logic_error("run_nm_protocol: expansion coefficient not real");
    }
    b.push_back(fixed.real());
  }

  DensityMatrix reduced_clone = partial_trace(post_raw, {"S1"});
  const double f_clone =
      fidelity_pure(reduced_clone, spec.phi.relabeled({"S1"}));

  std::optional<DensityMatrix> reduced_anticlone;
  double f_anti = std::numeric_limits<double>::quiet_NaN();
  if (num_pairs > 0) {
    reduced_anticlone = partial_trace(post_raw, {"B1"});
    PureState target = spec.program == ProgramState::Singlet
                           ? perp(spec.phi).relabeled({"B1"})
                           : PureState(spec.phi.amplitudes().conjugate(),
                                       {"B1"});
    f_anti = fidelity_pure(*reduced_anticlone, target);
  }

  return NMOutcome{p,
                   std::move(b),
                   f_clone,
                   f_anti,
                   std::move(reduced_clone),
                   std::move(reduced_anticlone),
                   post_raw.canonicalized()};
}

ClosedForms closed_form_fidelities(int n, int m) {
  if (n < 1 || m < n) {
    throw std::invalid_argument("closed_form_fidelities: need 1 <= n <= m");
  }
  ClosedForms f;
  f.success_probability =
      std::ldexp((m + 1.0) / (n + 1.0), -(m - n));
  f.clone_fidelity = (n + 1.0 + static_cast<double>(n) / m) / (n + 2.0);
  f.anticlone_fidelity = m == n ? std::numeric_limits<double>::quiet_NaN()
                                : (n + 1.0) / (n + 2.0);
  return f;
}

}  // namespace uqm::angmom
