#include "cod/lie.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cod {

Mat bracket(const Mat& A, const Mat& B) {
  if (!A.is_square() || A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("bracket needs square matrices of equal shape");
  return A * B - B * A;
}

FieldElement killing(const Mat& A, const Mat& B) {
  if (!A.is_square() || A.rows() != B.rows()) throw std::invalid_argument("shape mismatch");
  const FiniteField& F = A.field();
  int n = A.rows();
  if ((2L * n) % F.characteristic() == 0)
    throw std::domain_error("Killing form is degenerate: characteristic divides 2n");
  if (!A.is_traceless() || !B.is_traceless())
    throw std::invalid_argument("Killing form arguments must be traceless");
  // Tr(AB) without forming the product
  long t = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t = F.raw_add(t, F.raw_mul(A.raw(i, k), B.raw(k, i)));
  return A.field_ptr()->from_int(2L * n) * A.field_ptr()->from_encoded(t);
}

std::vector<Mat> sl_basis(const FieldPtr& F, int n) {
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(n) * n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Mat E(F, n, n);
      E.set_raw(i, j, 1);
      out.push_back(std::move(E));
    }
  for (int i = 0; i + 1 < n; ++i) {
    Mat H(F, n, n);
    H.set_raw(i, i, 1);
    H.set_raw(i + 1, i + 1, F->raw_neg(1));
    out.push_back(std::move(H));
  }
  return out;
}

std::vector<long> sl_coords(const Mat& A) {
  if (!A.is_square()) throw std::invalid_argument("sl coordinates need a square matrix");
  if (!A.is_traceless()) throw std::invalid_argument("sl coordinates need a traceless matrix");
  const FiniteField& F = A.field();
  int n = A.rows();
  std::vector<long> c;
  c.reserve(static_cast<size_t>(n) * n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c.push_back(A.raw(i, j));
  long partial = 0;  // coefficient of E_ii - E_(i+1)(i+1) is d_0 + ... + d_i
  for (int i = 0; i + 1 < n; ++i) {
    partial = F.raw_add(partial, A.raw(i, i));
    c.push_back(partial);
  }
  return c;
}

Mat sl_from_coords(const FieldPtr& F, int n, const std::vector<long>& coords) {
  if (static_cast<int>(coords.size()) != n * n - 1) throw std::invalid_argument("coordinate length mismatch");
  Mat A(F, n, n);
  size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) A.set_raw(i, j, coords[idx++]);
  long prev = 0;
  for (int i = 0; i + 1 < n; ++i) {
    long cur = coords[idx++];
    A.set_raw(i, i, F->raw_sub(cur, prev));
    prev = cur;
  }
  A.set_raw(n - 1, n - 1, F->raw_neg(prev));
  return A;
}

// --- Subalgebra ---------------------------------------------------------------

Subalgebra make_span(const FieldPtr& F, int n, const std::vector<Mat>& mats) {
  Mat stacked(F, static_cast<int>(mats.size()), n * n);
  for (size_t r = 0; r < mats.size(); ++r) {
    std::vector<long> flat = mats[r].flatten();
    for (size_t j = 0; j < flat.size(); ++j)
      stacked.set_raw(static_cast<int>(r), static_cast<int>(j), flat[j]);
  }
  RrefResult R = rref(stacked);
  Subalgebra S;
  S.n_ = n;
  S.field_ = F;
  S.rref_rows_ = Mat(F, R.rank, n * n);
  for (int r = 0; r < R.rank; ++r)
    for (int j = 0; j < n * n; ++j) S.rref_rows_.set_raw(r, j, R.mat.raw(r, j));
  S.pivots_ = R.pivots;
  for (int r = 0; r < R.rank; ++r) {
    std::vector<long> flat(static_cast<size_t>(n) * n);
    for (int j = 0; j < n * n; ++j) flat[static_cast<size_t>(j)] = S.rref_rows_.raw(r, j);
    S.basis_.push_back(Mat::unflatten(F, n, n, flat));
  }
  S.bracket_closed_ = true;
  for (size_t i = 0; i < S.basis_.size() && S.bracket_closed_; ++i)
    for (size_t j = i + 1; j < S.basis_.size() && S.bracket_closed_; ++j)
      if (!S.contains(bracket(S.basis_[i], S.basis_[j]))) S.bracket_closed_ = false;
  return S;
}

Subalgebra Subalgebra::span_close(const std::vector<Mat>& mats) {
  if (mats.empty()) throw std::invalid_argument("span of an empty set needs an ambient algebra");
  const FieldPtr& F = mats[0].field_ptr();
  int n = mats[0].rows();
  for (const Mat& M : mats) {
    if (!M.is_square() || M.rows() != n || M.field_ptr().get() != F.get())
      throw std::invalid_argument("span members must be square, same size, same field");
    if (!M.is_traceless()) throw std::invalid_argument("span members must be traceless");
  }
  return make_span(F, n, mats);
}

bool Subalgebra::contains(const Mat& A) const {
  if (A.rows() != n_ || A.cols() != n_ || A.field_ptr().get() != field_.get()) return false;
  const FiniteField& F = *field_;
  std::vector<long> v = A.flatten();
  for (size_t r = 0; r < pivots_.size(); ++r) {
    long f = v[static_cast<size_t>(pivots_[r])];
    if (f == 0) continue;
    for (int j = 0; j < n_ * n_; ++j)
      v[static_cast<size_t>(j)] = F.raw_sub(v[static_cast<size_t>(j)], F.raw_mul(f, rref_rows_.raw(static_cast<int>(r), j)));
  }
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

bool Subalgebra::is_abelian() const {
  for (size_t i = 0; i < basis_.size(); ++i)
    for (size_t j = i + 1; j < basis_.size(); ++j)
      if (!bracket(basis_[i], basis_[j]).is_zero()) return false;
  return true;
}

bool Subalgebra::operator==(const Subalgebra& o) const {
  return n_ == o.n_ && field_.get() == o.field_.get() && rref_rows_ == o.rref_rows_;
}

Subalgebra Subalgebra::conjugated(const Mat& g) const {
  Mat gi = g.inverse();
  std::vector<Mat> imgs;
  imgs.reserve(basis_.size());
  for (const Mat& b : basis_) imgs.push_back(g * b * gi);
  return span_close(imgs);
}

// --- predicates -----------------------------------------------------------------

Subalgebra normalizer(const Subalgebra& H) {
  if (!H.bracket_closed()) throw std::invalid_argument("normalizer needs a bracket-closed span");
  const FieldPtr& F = H.field_ptr();
  const FiniteField& Fd = *F;
  int n = H.ambient_n();
  int N = n * n - 1;
  std::vector<Mat> basis = sl_basis(F, n);
  // rows: for each h in the H-basis, the map x -> [x, h] followed by
  // reduction modulo H; x in the normalizer iff all residuals vanish.
  int rows_per = n * n;
  Mat system(F, H.dim() * rows_per, N);
  for (int hi = 0; hi < H.dim(); ++hi) {
    const Mat& h = H.basis()[static_cast<size_t>(hi)];
    for (int k = 0; k < N; ++k) {
      std::vector<long> v = bracket(basis[static_cast<size_t>(k)], h).flatten();
      // reduce against the reduced echelon rows of H
      for (size_t r = 0; r < H.basis().size(); ++r) {
        std::vector<long> row = H.basis()[r].flatten();
        int pivot = -1;
        for (size_t j = 0; j < row.size(); ++j)
          if (row[j] != 0) {
            pivot = static_cast<int>(j);
            break;
          }
        long f = v[static_cast<size_t>(pivot)];
        if (f == 0) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] = Fd.raw_sub(v[j], Fd.raw_mul(f, row[j]));
      }
      for (int j = 0; j < rows_per; ++j) system.set_raw(hi * rows_per + j, k, v[static_cast<size_t>(j)]);
    }
  }
  Mat K = nullspace(system);
  std::vector<Mat> gens;
  for (int c = 0; c < K.cols(); ++c) {
    std::vector<long> coords(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) coords[static_cast<size_t>(i)] = K.raw(i, c);
    gens.push_back(sl_from_coords(F, n, coords));
  }
  if (gens.empty()) gens.push_back(Mat(F, n, n));  // zero span
  return Subalgebra::span_close(gens);
}

bool is_nilpotent(const Subalgebra& H) {
  if (!H.bracket_closed()) throw std::invalid_argument("nilpotency needs a bracket-closed span");
  std::vector<Mat> cur = H.basis();
  int dim = static_cast<int>(cur.size());
  if (dim == 0) return true;
  while (true) {
    std::vector<Mat> next;
    for (const Mat& x : H.basis())
      for (const Mat& y : cur) {
        Mat b = bracket(x, y);
        if (!b.is_zero()) next.push_back(b);
      }
    if (next.empty()) return true;
    Subalgebra S = make_span(H.field_ptr(), H.ambient_n(), next);
    if (S.dim() >= dim) return false;  // series stabilized above zero
    dim = S.dim();
    cur = S.basis();
  }
}

bool is_cartan(const Subalgebra& H) {
  if (!H.bracket_closed()) throw std::invalid_argument("Cartan test needs a bracket-closed span");
  return is_nilpotent(H) && normalizer(H) == H;
}

const std::vector<Mat>* RootDecomposition::space_of(const std::vector<FieldElement>& root) const {
  for (size_t i = 0; i < roots.size(); ++i)
    if (roots[i] == root) return &spaces[i];
  return nullptr;
}

std::optional<RootDecomposition> root_decomposition(const Subalgebra& H) {
  if (!H.is_abelian()) throw std::invalid_argument("root decomposition needs an abelian subalgebra");
  const FieldPtr& F = H.field_ptr();
  int n = H.ambient_n();
  int N = n * n - 1;
  std::vector<Mat> basis = sl_basis(F, n);
  std::vector<Mat> ops;
  ops.reserve(H.basis().size());
  for (const Mat& h : H.basis()) {
    Mat op(F, N, N);
    for (int k = 0; k < N; ++k) {
      std::vector<long> col = sl_coords(bracket(basis[static_cast<size_t>(k)], h));
      for (int i = 0; i < N; ++i) op.set_raw(i, k, col[static_cast<size_t>(i)]);
    }
    ops.push_back(std::move(op));
  }
  auto se = simultaneous_eigenbasis(ops);
  if (!se.has_value()) return std::nullopt;

  // group eigenvectors by their eigenvalue tuple
  std::map<std::vector<long>, std::pair<std::vector<FieldElement>, std::vector<Mat>>> groups;
  for (int c = 0; c < N; ++c) {
    std::vector<long> key;
    key.reserve(se->eigen_tuples[static_cast<size_t>(c)].size());
    for (const FieldElement& e : se->eigen_tuples[static_cast<size_t>(c)])
      key.push_back(e.canonical_rank());
    std::vector<long> coords(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) coords[static_cast<size_t>(i)] = se->basis.raw(i, c);
    auto& g = groups[key];
    g.first = se->eigen_tuples[static_cast<size_t>(c)];
    g.second.push_back(sl_from_coords(F, n, coords));
  }
  RootDecomposition rd{H, {}, {}};
  for (auto& [key, val] : groups) {
    rd.roots.push_back(val.first);
    rd.spaces.push_back(std::move(val.second));
  }
  return rd;
}

namespace {

// Root-string condition: for every root alpha (zero included) and nonzero
// root beta, some alpha + k beta with 1 <= k <= steps is not a root. The
// step bound is char(F) - 1; it is passed in so the interpretation stays in
// one place.
bool root_strings_terminate(const std::vector<std::vector<FieldElement>>& roots,
                            const FieldPtr& F, long steps) {
  std::map<std::vector<long>, bool> root_set;
  for (const auto& r : roots) {
    std::vector<long> key;
    key.reserve(r.size());
    for (const FieldElement& e : r) key.push_back(e.canonical_rank());
    root_set[key] = true;
  }
  auto is_zero_root = [](const std::vector<FieldElement>& r) {
    return std::all_of(r.begin(), r.end(), [](const FieldElement& e) { return e.is_zero(); });
  };
  for (const auto& alpha : roots)
    for (const auto& beta : roots) {
      if (is_zero_root(beta)) continue;
      bool some_missing = false;
      for (long k = 1; k <= steps && !some_missing; ++k) {
        std::vector<long> key;
        key.reserve(alpha.size());
        FieldElement kf = F->from_int(k);
        for (size_t t = 0; t < alpha.size(); ++t)
          key.push_back((alpha[t] + kf * beta[t]).canonical_rank());
        if (root_set.find(key) == root_set.end()) some_missing = true;
      }
      if (!some_missing) return false;
    }
  return true;
}

}  // namespace

CartanReport is_classical_cartan(const Subalgebra& H) {
  CartanReport rep;
  rep.bracket_closed = H.bracket_closed();
  if (!rep.bracket_closed) return rep;
  rep.nilpotent = is_nilpotent(H);
  rep.self_normalizing = normalizer(H) == H;
  rep.is_cartan = rep.nilpotent && rep.self_normalizing;
  rep.abelian = H.is_abelian();
  if (!rep.abelian) return rep;
  auto rd = root_decomposition(H);
  rep.has_root_decomposition = rd.has_value();
  if (!rd.has_value()) return rep;

  const FiniteField& F = *H.field_ptr();
  auto neg_root = [&](const std::vector<FieldElement>& r) {
    std::vector<FieldElement> out;
    out.reserve(r.size());
    for (const FieldElement& e : r) out.push_back(-e);
    return out;
  };
  auto is_zero_root = [](const std::vector<FieldElement>& r) {
    return std::all_of(r.begin(), r.end(), [](const FieldElement& e) { return e.is_zero(); });
  };

  rep.condition_b = true;
  for (size_t i = 0; i < rd->roots.size() && rep.condition_b; ++i) {
    const auto& alpha = rd->roots[i];
    if (is_zero_root(alpha)) continue;
    const std::vector<Mat>* minus = rd->space_of(neg_root(alpha));
    if (minus == nullptr) continue;
    std::vector<Mat> prods;
    for (const Mat& x : rd->spaces[i])
      for (const Mat& y : *minus) prods.push_back(bracket(x, y));
    if (make_span(H.field_ptr(), H.ambient_n(), prods).dim() != 1) rep.condition_b = false;
  }

  rep.condition_c = root_strings_terminate(rd->roots, H.field_ptr(), F.characteristic() - 1);

  rep.is_classical = rep.is_cartan && rep.abelian && rep.has_root_decomposition &&
                     rep.condition_b && rep.condition_c;
  return rep;
}

bool killing_orthogonal(const Subalgebra& A, const Subalgebra& B) {
  for (const Mat& x : A.basis())
    for (const Mat& y : B.basis())
      if (!killing(x, y).is_zero()) return false;
  return true;
}

Subalgebra diagonal_cartan(const FieldPtr& F, int n) {
  std::vector<Mat> gens;
  for (int i = 0; i + 1 < n; ++i) {
    Mat H(F, n, n);
    H.set_raw(i, i, 1);
    H.set_raw(i + 1, i + 1, F->raw_neg(1));
    gens.push_back(std::move(H));
  }
  return Subalgebra::span_close(gens);
}

bool classical_algebra_check(int n, const FieldPtr& F) {
  if (n % F->characteristic() == 0)
    throw std::domain_error("sl_n has nontrivial center when the characteristic divides n");
  int N = n * n - 1;
  std::vector<Mat> basis = sl_basis(F, n);
  // center: stack the maps x -> [x, e_k] and intersect the kernels
  Mat system(F, N * N, N);
  for (int k = 0; k < N; ++k)
    for (int c = 0; c < N; ++c) {
      std::vector<long> col = sl_coords(bracket(basis[static_cast<size_t>(c)], basis[static_cast<size_t>(k)]));
      for (int i = 0; i < N; ++i) system.set_raw(k * N + i, c, col[static_cast<size_t>(i)]);
    }
  if (nullspace(system).cols() != 0) return false;
  // derived algebra: the brackets of basis pairs span everything
  std::vector<Mat> prods;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      prods.push_back(bracket(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]));
  return make_span(F, n, prods).dim() == N;
}

FieldElement killing_via_adjoint(const Mat& A, const Mat& B) {
  const FieldPtr& F = A.field_ptr();
  int n = A.rows();
  int N = n * n - 1;
  std::vector<Mat> basis = sl_basis(F, n);
  auto ad = [&](const Mat& X) {
    Mat op(F, N, N);
    for (int k = 0; k < N; ++k) {
      std::vector<long> col = sl_coords(bracket(X, basis[static_cast<size_t>(k)]));
      for (int i = 0; i < N; ++i) op.set_raw(i, k, col[static_cast<size_t>(i)]);
    }
    return op;
  };
  return (ad(A) * ad(B)).trace();
}

}  // namespace cod
