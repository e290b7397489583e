#include "homc/tensor.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace homc {

namespace {
constexpr std::int64_t kMaxColumns = 4'000'000;
}

std::int64_t column_count(int n, int m) {
  if (n < 1) throw std::invalid_argument("column_count: need n >= 1");
  if (m < 1) throw std::invalid_argument("column_count: need m >= 1");
  std::int64_t cols = 1;
  for (int j = 0; j < m; ++j) {
    cols *= n;
    if (cols > kMaxColumns) {
      throw std::invalid_argument("column_count: n^m exceeds the dense-storage capacity of " +
                                  std::to_string(kMaxColumns) + " columns");
    }
  }
  return cols;
}

MultiIndex::MultiIndex(int n_, std::vector<int> parts_)
    : n(n_), m(static_cast<int>(parts_.size())), parts(std::move(parts_)) {
  for (int p : parts) {
    if (p < 1 || p > n) {
      throw std::invalid_argument("MultiIndex: component " + std::to_string(p) +
                                  " outside [1, " + std::to_string(n) + "]");
    }
  }
}

std::int64_t col_index(const MultiIndex& idx) {
  std::int64_t pos = 0;
  for (int p : idx.parts) {
    if (p < 1 || p > idx.n) {
      throw std::invalid_argument("col_index: component " + std::to_string(p) + " outside [1, " +
                                  std::to_string(idx.n) + "]");
    }
    pos = pos * idx.n + (p - 1);
  }
  return pos + 1;
}

MultiIndex col_unindex(int n, int m, std::int64_t pos) {
  const std::int64_t cols = column_count(n, m);
  if (pos < 1 || pos > cols) {
    throw std::invalid_argument("col_unindex: position " + std::to_string(pos) + " outside [1, " +
                                std::to_string(cols) + "]");
  }
  std::vector<int> parts(static_cast<std::size_t>(m));
  std::int64_t rest = pos - 1;
  for (int j = m - 1; j >= 0; --j) {
    parts[static_cast<std::size_t>(j)] = static_cast<int>(rest % n) + 1;
    rest /= n;
  }
  MultiIndex idx;
  idx.n = n;
  idx.m = m;
  idx.parts = std::move(parts);
  return idx;
}

void decode_column(std::int64_t col, int n, int m, std::span<int> digits_out) {
  for (int j = m - 1; j >= 0; --j) {
    digits_out[static_cast<std::size_t>(j)] = static_cast<int>(col % n);
    col /= n;
  }
}

template <class S>
void ProbabilityVector<S>::check(double tol) const {
  if (entries_.empty()) throw std::invalid_argument("ProbabilityVector: empty");
  S sum{};
  for (const S& e : entries_) {
    if (e < S{}) throw std::invalid_argument("ProbabilityVector: negative entry");
    sum += e;
  }
  if constexpr (scalar_traits<S>::exact) {
    if (sum != S(1)) throw std::invalid_argument("ProbabilityVector: entries sum to " + sum.str());
  } else {
    if (abs_value(sum - 1.0) > tol) {
      throw std::invalid_argument("ProbabilityVector: entries sum to " + std::to_string(sum));
    }
  }
}

template <class S>
TransitionTensor<S>::TransitionTensor(int n, int m, std::vector<S> column_major)
    : n_(n), m_(m), cols_(column_count(n, m)), data_(std::move(column_major)) {
  if (static_cast<std::int64_t>(data_.size()) != cols_ * n_) {
    throw std::invalid_argument("TransitionTensor: expected " + std::to_string(cols_ * n_) +
                                " entries, got " + std::to_string(data_.size()));
  }
}

template <class S>
const S& TransitionTensor<S>::entry(int row, const MultiIndex& idx) const {
  if (row < 1 || row > n_) throw std::invalid_argument("entry: row outside [1, n]");
  if (idx.n != n_ || idx.m != m_) throw std::invalid_argument("entry: multi-index shape mismatch");
  return at(row - 1, col_index(idx) - 1);
}

std::string TensorViolation::describe(int n, int m) const {
  std::ostringstream os;
  MultiIndex idx = col_unindex(n, m, column);
  os << "column (";
  for (int j = 0; j < m; ++j) os << (j ? "," : "") << idx.parts[static_cast<std::size_t>(j)];
  os << ")";
  switch (kind) {
    case Kind::negative_entry:
      os << " row " << row << ": negative entry, magnitude " << magnitude;
      break;
    case Kind::entry_above_one:
      os << " row " << row << ": entry exceeds 1 by " << magnitude;
      break;
    case Kind::column_sum:
      os << ": sum deviates from 1 by " << magnitude;
      break;
  }
  return os.str();
}

template <class S>
std::vector<S> kron_power(const ProbabilityVector<S>& x, int m) {
  if (m < 1) throw std::invalid_argument("kron_power: need m >= 1");
  const int n = x.size();
  column_count(n, m);  // capacity guard
  std::vector<S> acc(x.entries());
  std::vector<S> next;
  for (int step = 1; step < m; ++step) {
    next.clear();
    next.reserve(acc.size() * static_cast<std::size_t>(n));
    for (const S& a : acc) {
      for (int j = 0; j < n; ++j) next.push_back(a * x[j]);
    }
    acc.swap(next);
  }
  return acc;
}

template <class S>
ProbabilityVector<S> apply(const TransitionTensor<S>& P, const ProbabilityVector<S>& x) {
  if (x.size() != P.states()) {
    throw std::invalid_argument("apply: vector has " + std::to_string(x.size()) +
                                " entries, tensor has " + std::to_string(P.states()) + " states");
  }
  std::vector<S> weights = kron_power(x, P.order());
  std::vector<S> out(static_cast<std::size_t>(P.states()), S{});
  const int n = P.states();
  for (std::int64_t c = 0; c < P.columns(); ++c) {
    const S& w = weights[static_cast<std::size_t>(c)];
    std::span<const S> col = P.column(c);
    for (int r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] += col[static_cast<std::size_t>(r)] * w;
  }
  // Looser sum tolerance than validation: one multiply-accumulate pass over
  // n^m columns can drift by more than 1e-12 ulps at the largest sizes.
  return ProbabilityVector<S>(std::move(out), 1e-9);
}

template <class S>
ProbabilityVector<S> apply_via_slices(const TransitionTensor<S>& P, const ProbabilityVector<S>& x) {
  if (P.order() != 2) throw std::invalid_argument("apply_via_slices: defined for order 2 only");
  if (x.size() != P.states()) throw std::invalid_argument("apply_via_slices: dimension mismatch");
  const int n = P.states();
  // M = sum_i x_i P_i, column s of P_i is tensor column (i, s).
  std::vector<S> M(static_cast<std::size_t>(n) * n, S{});
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < n; ++s) {
      std::span<const S> col = P.column(static_cast<std::int64_t>(i) * n + s);
      for (int r = 0; r < n; ++r) {
        M[static_cast<std::size_t>(s) * n + r] += x[i] * col[static_cast<std::size_t>(r)];
      }
    }
  }
  std::vector<S> out(static_cast<std::size_t>(n), S{});
  for (int s = 0; s < n; ++s) {
    for (int r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] += M[static_cast<std::size_t>(s) * n + r] * x[s];
  }
  return ProbabilityVector<S>(std::move(out), 1e-9);
}

template <class S>
S residual(const TransitionTensor<S>& P, const ProbabilityVector<S>& x) {
  ProbabilityVector<S> y = apply(P, x);
  S worst{};
  for (int i = 0; i < x.size(); ++i) {
    S d = abs_value(y[i] - x[i]);
    if (worst < d) worst = d;
  }
  return worst;
}

template <class S>
std::vector<TensorViolation> validate(const TransitionTensor<S>& P, double tol) {
  std::vector<TensorViolation> out;
  const int n = P.states();
  const S one(1);
  for (std::int64_t c = 0; c < P.columns(); ++c) {
    std::span<const S> col = P.column(c);
    S sum{};
    for (int r = 0; r < n; ++r) {
      const S& e = col[static_cast<std::size_t>(r)];
      sum += e;
      if constexpr (scalar_traits<S>::exact) {
        if (e < S{}) {
          out.push_back({TensorViolation::Kind::negative_entry, r + 1, c + 1,
                         scalar_traits<S>::to_double(abs_value(e))});
        } else if (e > one) {
          out.push_back({TensorViolation::Kind::entry_above_one, r + 1, c + 1,
                         scalar_traits<S>::to_double(e - one)});
        }
      } else {
        if (e < -tol) {
          out.push_back({TensorViolation::Kind::negative_entry, r + 1, c + 1, -e});
        } else if (e > 1.0 + tol) {
          out.push_back({TensorViolation::Kind::entry_above_one, r + 1, c + 1, e - 1.0});
        }
      }
    }
    if constexpr (scalar_traits<S>::exact) {
      if (sum != one) {
        out.push_back({TensorViolation::Kind::column_sum, 0, c + 1,
                       scalar_traits<S>::to_double(abs_value(sum - one))});
      }
    } else {
      if (abs_value(sum - 1.0) > tol) {
        out.push_back({TensorViolation::Kind::column_sum, 0, c + 1, abs_value(sum - 1.0)});
      }
    }
  }
  return out;
}

void apply_into(const TransitionTensor<double>& P, std::span<const double> x, ApplyWorkspace& ws) {
  const int n = P.states();
  const int m = P.order();
  const std::int64_t cols = P.columns();
  ws.kron.resize(static_cast<std::size_t>(cols));
  ws.out.assign(static_cast<std::size_t>(n), 0.0);
  // fold-left Kronecker power, first index slowest (lexicographic order)
  std::int64_t len = n;
  for (int i = 0; i < n; ++i) ws.kron[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  for (int step = 1; step < m; ++step) {
    for (std::int64_t i = len - 1; i >= 0; --i) {
      const double a = ws.kron[static_cast<std::size_t>(i)];
      double* dst = ws.kron.data() + i * n;
      for (int j = n - 1; j >= 0; --j) dst[j] = a * x[static_cast<std::size_t>(j)];
    }
    len *= n;
  }
  const double* data = P.data().data();
  for (std::int64_t c = 0; c < cols; ++c) {
    const double w = ws.kron[static_cast<std::size_t>(c)];
    if (w == 0.0) continue;
    const double* col = data + c * n;
    for (int r = 0; r < n; ++r) ws.out[static_cast<std::size_t>(r)] += col[r] * w;
  }
}

double residual_into(const TransitionTensor<double>& P, std::span<const double> x,
                     ApplyWorkspace& ws) {
  apply_into(P, x, ws);
  double worst = 0.0;
  for (int r = 0; r < P.states(); ++r) {
    double d = std::abs(ws.out[static_cast<std::size_t>(r)] - x[static_cast<std::size_t>(r)]);
    if (d > worst) worst = d;
  }
  return worst;
}

template <class S>
ProbabilityVector<S> basis_vector(int n, int i) {
  if (i < 1 || i > n) throw std::invalid_argument("basis_vector: index outside [1, n]");
  std::vector<S> e(static_cast<std::size_t>(n), S{});
  e[static_cast<std::size_t>(i - 1)] = S(1);
  return ProbabilityVector<S>(std::move(e));
}

template <class S>
ProbabilityVector<S> face_barycenter(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("face_barycenter: k outside [1, n]");
  std::vector<S> f(static_cast<std::size_t>(n), S{});
  for (int i = 0; i < k; ++i) f[static_cast<std::size_t>(i)] = scalar_traits<S>::from_ratio(1, k);
  return ProbabilityVector<S>(std::move(f));
}

TransitionTensor<double> to_double_tensor(const TransitionTensor<Rational>& P) {
  std::vector<double> data;
  data.reserve(P.data().size());
  for (const Rational& r : P.data()) data.push_back(r.to_double());
  return TransitionTensor<double>(P.states(), P.order(), std::move(data));
}

ProbabilityVector<double> to_double_vector(const ProbabilityVector<Rational>& x) {
  std::vector<double> d;
  d.reserve(x.entries().size());
  for (const Rational& r : x.entries()) d.push_back(r.to_double());
  return ProbabilityVector<double>(std::move(d), 1e-9);
}

// explicit instantiations
template class ProbabilityVector<double>;
template class ProbabilityVector<Rational>;
template class TransitionTensor<double>;
template class TransitionTensor<Rational>;
template std::vector<double> kron_power(const ProbabilityVector<double>&, int);
template std::vector<Rational> kron_power(const ProbabilityVector<Rational>&, int);
template ProbabilityVector<double> apply(const TransitionTensor<double>&,
                                         const ProbabilityVector<double>&);
template ProbabilityVector<Rational> apply(const TransitionTensor<Rational>&,
                                           const ProbabilityVector<Rational>&);
template ProbabilityVector<double> apply_via_slices(const TransitionTensor<double>&,
                                                    const ProbabilityVector<double>&);
template ProbabilityVector<Rational> apply_via_slices(const TransitionTensor<Rational>&,
                                                      const ProbabilityVector<Rational>&);
template double residual(const TransitionTensor<double>&, const ProbabilityVector<double>&);
template Rational residual(const TransitionTensor<Rational>&, const ProbabilityVector<Rational>&);
template std::vector<TensorViolation> validate(const TransitionTensor<double>&, double);
template std::vector<TensorViolation> validate(const TransitionTensor<Rational>&, double);
template ProbabilityVector<double> basis_vector<double>(int, int);
template ProbabilityVector<Rational> basis_vector<Rational>(int, int);
template ProbabilityVector<double> face_barycenter<double>(int, int);
template ProbabilityVector<Rational> face_barycenter<Rational>(int, int);

}  // namespace homc
