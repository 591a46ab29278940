#include "cod/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cod {

// --- Mat --------------------------------------------------------------------

Mat::Mat(FieldPtr field, int rows, int cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {
  if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("negative matrix dimensions");
  e_.assign(static_cast<size_t>(rows_) * cols_, 0);
}

Mat Mat::identity(const FieldPtr& field, int n) {
  Mat I(field, n, n);
  for (int i = 0; i < n; ++i) I.set_raw(i, i, 1);
  return I;
}

Mat Mat::from_ints(const FieldPtr& field, std::vector<std::vector<long>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Mat M(field, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
      throw std::invalid_argument("ragged rows");
    for (int j = 0; j < c; ++j)
      M.set_raw(i, j, field->from_int(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]).encoded());
  }
  return M;
}

FieldElement Mat::at(int i, int j) const { return field_->from_encoded(raw(i, j)); }

void Mat::set(int i, int j, const FieldElement& v) {
  if (&v.field() != field_.get()) throw std::invalid_argument("entry from a different field");
  set_raw(i, j, v.encoded());
}

void Mat::check_same_field(const Mat& o) const {
  if (field_.get() != o.field_.get())
    throw std::invalid_argument("matrices over different fields");
}

Mat Mat::operator+(const Mat& o) const {
  check_same_field(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  Mat r(field_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->raw_add(e_[i], o.e_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  check_same_field(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  Mat r(field_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->raw_sub(e_[i], o.e_[i]);
  return r;
}

Mat Mat::operator-() const {
  Mat r(field_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->raw_neg(e_[i]);
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  check_same_field(o);
  if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch");
  Mat r(field_, rows_, o.cols_);
  const FiniteField& F = *field_;
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      long a = raw(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        long b = o.raw(k, j);
        if (b == 0) continue;
        r.set_raw(i, j, F.raw_add(r.raw(i, j), F.raw_mul(a, b)));
      }
    }
  return r;
}

Mat Mat::scaled(const FieldElement& c) const {
  if (&c.field() != field_.get()) throw std::invalid_argument("scalar from a different field");
  Mat r(field_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->raw_mul(e_[i], c.encoded());
  return r;
}

Mat Mat::transpose() const {
  Mat r(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set_raw(j, i, raw(i, j));
  return r;
}

FieldElement Mat::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of a non-square matrix");
  long t = 0;
  for (int i = 0; i < rows_; ++i) t = field_->raw_add(t, raw(i, i));
  return field_->from_encoded(t);
}

bool Mat::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](long v) { return v == 0; });
}

Mat Mat::pow(long e) const {
  if (!is_square()) throw std::invalid_argument("power of a non-square matrix");
  if (e < 0) return inverse().pow(-e);
  Mat r = identity(field_, rows_);
  Mat base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

bool Mat::operator==(const Mat& o) const {
  return field_.get() == o.field_.get() && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

Mat Mat::unflatten(const FieldPtr& field, int rows, int cols, const std::vector<long>& enc) {
  if (static_cast<size_t>(rows) * cols != enc.size()) throw std::invalid_argument("size mismatch");
  Mat M(field, rows, cols);
  for (size_t i = 0; i < enc.size(); ++i) {
    if (enc[i] < 0 || enc[i] >= field->size()) throw std::invalid_argument("entry out of range");
    M.e_[i] = enc[i];
  }
  return M;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j) os << (j ? " " : "[") << at(i, j).str();
    os << "]" << (i + 1 == rows_ ? "]" : "\n");
  }
  return os.str();
}

Mat kron(const Mat& A, const Mat& B) {
  if (A.field_ptr().get() != B.field_ptr().get())
    throw std::invalid_argument("Kronecker product over different fields");
  const FiniteField& F = A.field();
  Mat r(A.field_ptr(), A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) {
      long a = A.raw(i, j);
      if (a == 0) continue;
      for (int k = 0; k < B.rows(); ++k)
        for (int l = 0; l < B.cols(); ++l)
          r.set_raw(i * B.rows() + k, j * B.cols() + l, F.raw_mul(a, B.raw(k, l)));
    }
  return r;
}

// --- elimination -------------------------------------------------------------

RrefResult rref(const Mat& A) {
  Mat M = A;
  const FiniteField& F = M.field();
  int rows = M.rows(), cols = M.cols();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i)
      if (M.raw(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = 0; j < cols; ++j) {
        long t = M.raw(r, j);
        M.set_raw(r, j, M.raw(pivot, j));
        M.set_raw(pivot, j, t);
      }
    long inv = F.raw_inv(M.raw(r, c));
    for (int j = c; j < cols; ++j) M.set_raw(r, j, F.raw_mul(M.raw(r, j), inv));
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      long f = M.raw(i, c);
      if (f == 0) continue;
      for (int j = c; j < cols; ++j)
        M.set_raw(i, j, F.raw_sub(M.raw(i, j), F.raw_mul(f, M.raw(r, j))));
    }
    pivots.push_back(c);
    ++r;
  }
  return RrefResult{std::move(M), std::move(pivots), r};
}

int rank(const Mat& A) { return rref(A).rank; }

Mat nullspace(const Mat& A) {
  RrefResult R = rref(A);
  const FiniteField& F = A.field();
  int cols = A.cols();
  std::vector<char> is_pivot(static_cast<size_t>(cols), 0);
  for (int c : R.pivots) is_pivot[static_cast<size_t>(c)] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
  Mat K(A.field_ptr(), cols, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    K.set_raw(fc, static_cast<int>(k), 1);
    for (size_t r = 0; r < R.pivots.size(); ++r)
      K.set_raw(R.pivots[r], static_cast<int>(k), F.raw_neg(R.mat.raw(static_cast<int>(r), fc)));
  }
  return K;
}

std::optional<Mat> solve(const Mat& A, const Mat& B) {
  if (A.field_ptr().get() != B.field_ptr().get())
    throw std::invalid_argument("solve over different fields");
  if (A.rows() != B.rows()) throw std::invalid_argument("shape mismatch");
  int n = A.rows(), m = A.cols(), k = B.cols();
  Mat aug(A.field_ptr(), n, m + k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) aug.set_raw(i, j, A.raw(i, j));
    for (int j = 0; j < k; ++j) aug.set_raw(i, m + j, B.raw(i, j));
  }
  RrefResult R = rref(aug);
  Mat X(A.field_ptr(), m, k);
  for (size_t r = 0; r < R.pivots.size(); ++r) {
    int pc = R.pivots[r];
    if (pc >= m) return std::nullopt;  // pivot in the right block: inconsistent
    for (int j = 0; j < k; ++j) X.set_raw(pc, j, R.mat.raw(static_cast<int>(r), m + j));
  }
  return X;
}

Mat Mat::inverse() const {
  if (!is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  auto X = solve(*this, identity(field_, rows_));
  if (!X.has_value() || rank(*this) != rows_) throw std::domain_error("singular matrix");
  return *X;
}

// --- Polynomial ---------------------------------------------------------------

Polynomial::Polynomial(FieldPtr field, std::vector<FieldElement> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (&c.field() != field_.get()) throw std::invalid_argument("coefficient from a different field");
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Polynomial Polynomial::from_ints(const FieldPtr& field, const std::vector<long>& coeffs) {
  std::vector<FieldElement> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.push_back(field->from_int(v));
  return Polynomial(field, std::move(c));
}

FieldElement Polynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return field_->zero();
  return c_[static_cast<size_t>(i)];
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  size_t n = std::max(c_.size(), o.c_.size());
  std::vector<FieldElement> c;
  c.reserve(n);
  for (size_t i = 0; i < n; ++i)
    c.push_back(coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i)));
  return Polynomial(field_, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  size_t n = std::max(c_.size(), o.c_.size());
  std::vector<FieldElement> c;
  c.reserve(n);
  for (size_t i = 0; i < n; ++i)
    c.push_back(coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i)));
  return Polynomial(field_, std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return Polynomial(field_);
  std::vector<FieldElement> c(c_.size() + o.c_.size() - 1, field_->zero());
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] = c[i + j] + c_[i] * o.c_[j];
  return Polynomial(field_, std::move(c));
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (field_.get() != o.field_.get() || c_.size() != o.c_.size()) return false;
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

FieldElement Polynomial::eval(const FieldElement& x) const {
  FieldElement v = field_->zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

Mat Polynomial::eval(const Mat& A) const {
  Mat v(field_, A.rows(), A.cols());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    v = v * A;
    for (int i = 0; i < A.rows(); ++i)
      v.set_raw(i, i, field_->raw_add(v.raw(i, i), it->encoded()));
  }
  return v;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<FieldElement> rem(c_);
  std::vector<FieldElement> quo(
      static_cast<size_t>(std::max(0, degree() - d.degree() + 1)), field_->zero());
  FieldElement lead_inv = d.c_.back().inverse();
  for (int i = static_cast<int>(rem.size()) - 1; i >= d.degree(); --i) {
    FieldElement f = rem[static_cast<size_t>(i)] * lead_inv;
    if (f.is_zero()) continue;
    quo[static_cast<size_t>(i - d.degree())] = f;
    for (int j = 0; j <= d.degree(); ++j) {
      size_t idx = static_cast<size_t>(i - d.degree() + j);
      rem[idx] = rem[idx] - f * d.c_[static_cast<size_t>(j)];
    }
  }
  return {Polynomial(field_, std::move(quo)), Polynomial(field_, std::move(rem))};
}

std::vector<FieldElement> Polynomial::roots() const {
  std::vector<FieldElement> out;
  if (is_zero()) return out;
  Polynomial cur = *this;
  for (long r = 0; r < field_->size(); ++r) {
    FieldElement x = field_->by_rank(r);
    while (!cur.is_zero() && cur.degree() >= 1 && cur.eval(x).is_zero()) {
      out.push_back(x);
      Polynomial lin(field_, {-x, field_->one()});
      cur = cur.divmod(lin).first;
    }
  }
  return out;
}

std::string Polynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    FieldElement c = coeff(i);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || !c.is_one()) os << c.str();
    if (i > 0) {
      if (!c.is_one()) os << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// --- characteristic / minimal polynomials --------------------------------------

Polynomial char_poly(const Mat& A) {
  if (!A.is_square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  const FieldPtr& Fp = A.field_ptr();
  const FiniteField& F = *Fp;
  int n = A.rows();
  if (n == 0) return Polynomial(Fp, {F.one()});
  // Berkowitz: extend the leading principal block one row/column at a time,
  // multiplying by the Toeplitz matrix of the border products.
  std::vector<long> v = {1, F.raw_neg(A.raw(0, 0))};  // descending coefficients
  for (int i = 1; i < n; ++i) {
    std::vector<long> col;
    col.reserve(static_cast<size_t>(i + 2));
    col.push_back(1);
    col.push_back(F.raw_neg(A.raw(i, i)));
    std::vector<long> w(static_cast<size_t>(i));  // starts as the border column
    for (int r = 0; r < i; ++r) w[static_cast<size_t>(r)] = A.raw(r, i);
    for (int k = 0; k < i; ++k) {
      long rc = 0;  // border row against w
      for (int c = 0; c < i; ++c) rc = F.raw_add(rc, F.raw_mul(A.raw(i, c), w[static_cast<size_t>(c)]));
      col.push_back(F.raw_neg(rc));
      if (k + 1 < i) {
        std::vector<long> nw(static_cast<size_t>(i), 0);
        for (int r = 0; r < i; ++r) {
          long acc = 0;
          for (int c = 0; c < i; ++c)
            acc = F.raw_add(acc, F.raw_mul(A.raw(r, c), w[static_cast<size_t>(c)]));
          nw[static_cast<size_t>(r)] = acc;
        }
        w = std::move(nw);
      }
    }
    std::vector<long> nv(static_cast<size_t>(i + 2), 0);
    for (size_t r = 0; r < nv.size(); ++r)
      for (size_t c = 0; c < v.size(); ++c) {
        if (r < c || r - c >= col.size()) continue;
        nv[r] = F.raw_add(nv[r], F.raw_mul(col[r - c], v[c]));
      }
    v = std::move(nv);
  }
  std::vector<FieldElement> asc;
  asc.reserve(v.size());
  for (auto it = v.rbegin(); it != v.rend(); ++it) asc.push_back(F.from_encoded(*it));
  return Polynomial(Fp, std::move(asc));
}

Polynomial min_poly(const Mat& A) {
  if (!A.is_square()) throw std::invalid_argument("minimal polynomial of a non-square matrix");
  const FieldPtr& Fp = A.field_ptr();
  const FiniteField& F = *Fp;
  int n = A.rows();
  size_t len = static_cast<size_t>(n) * static_cast<size_t>(n);
  // row-reduce the flattened powers of A incrementally, tracking combinations
  std::vector<std::vector<long>> rows;    // reduced vectors
  std::vector<int> pivot_of_row;
  std::vector<std::vector<long>> combos;  // combination of original powers per row
  Mat P = Mat::identity(Fp, n);
  for (int d = 0;; ++d) {
    std::vector<long> vec = P.flatten();
    std::vector<long> combo(static_cast<size_t>(d + 1), 0);
    combo[static_cast<size_t>(d)] = 1;
    for (size_t r = 0; r < rows.size(); ++r) {
      long f = vec[static_cast<size_t>(pivot_of_row[r])];
      if (f == 0) continue;
      for (size_t j = 0; j < len; ++j)
        vec[j] = F.raw_sub(vec[j], F.raw_mul(f, rows[r][j]));
      for (size_t j = 0; j < combos[r].size(); ++j)
        combo[j] = F.raw_sub(combo[j], F.raw_mul(f, combos[r][j]));
    }
    int piv = -1;
    for (size_t j = 0; j < len; ++j)
      if (vec[j] != 0) {
        piv = static_cast<int>(j);
        break;
      }
    if (piv < 0) {
      // dependence found: combo gives the annihilator, monic by construction
      std::vector<FieldElement> asc;
      asc.reserve(combo.size());
      for (long c : combo) asc.push_back(F.from_encoded(c));
      return Polynomial(Fp, std::move(asc));
    }
    long inv = F.raw_inv(vec[static_cast<size_t>(piv)]);
    for (size_t j = 0; j < len; ++j) vec[j] = F.raw_mul(vec[j], inv);
    for (size_t j = 0; j < combo.size(); ++j) combo[j] = F.raw_mul(combo[j], inv);
    rows.push_back(std::move(vec));
    pivot_of_row.push_back(piv);
    combos.push_back(std::move(combo));
    if (d > n) throw std::logic_error("annihilator not found below dimension bound");
    P = P * A;
  }
}

std::pair<Polynomial, Polynomial> char_min_poly(const Mat& A) {
  return {char_poly(A), min_poly(A)};
}

// --- eigendecomposition ----------------------------------------------------------

std::optional<EigenDecomposition> diagonalize(const Mat& A) {
  if (!A.is_square()) throw std::invalid_argument("diagonalization of a non-square matrix");
  const FieldPtr& Fp = A.field_ptr();
  const FiniteField& F = *Fp;
  int n = A.rows();
  Polynomial mp = min_poly(A);
  std::vector<FieldElement> distinct;
  for (long r = 0; r < F.size(); ++r) {
    FieldElement x = F.by_rank(r);
    if (mp.eval(x).is_zero()) distinct.push_back(x);
  }
  if (static_cast<int>(distinct.size()) != mp.degree()) return std::nullopt;
  EigenDecomposition out{distinct, {}, Mat(Fp, n, n)};
  int col = 0;
  for (const FieldElement& lam : distinct) {
    Mat shifted = A;
    for (int i = 0; i < n; ++i) shifted.set_raw(i, i, F.raw_sub(shifted.raw(i, i), lam.encoded()));
    Mat K = nullspace(shifted);
    for (int j = 0; j < K.cols(); ++j) {
      for (int i = 0; i < n; ++i) out.basis.set_raw(i, col, K.raw(i, j));
      out.eigenvalues.push_back(lam);
      ++col;
    }
  }
  if (col != n) throw std::logic_error("eigenspace dimensions inconsistent with minimal polynomial");
  return out;
}

namespace {

struct Block {
  Mat basis;  // n x k columns
  std::vector<FieldElement> tuple;
};

}  // namespace

std::optional<SimultaneousEigen> simultaneous_eigenbasis(std::span<const Mat> family) {
  if (family.empty()) throw std::invalid_argument("empty operator family");
  const FieldPtr& Fp = family[0].field_ptr();
  const FiniteField& F = *Fp;
  int n = family[0].rows();
  for (const Mat& A : family) {
    if (!A.is_square() || A.rows() != n || A.field_ptr().get() != Fp.get())
      throw std::invalid_argument("family members must be square, same size, same field");
  }
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      if (family[i] * family[j] != family[j] * family[i])
        throw std::invalid_argument("family members must commute pairwise");

  std::vector<Block> blocks;
  blocks.push_back(Block{Mat::identity(Fp, n), {}});
  for (const Mat& A : family) {
    std::vector<Block> next;
    for (Block& blk : blocks) {
      int k = blk.basis.cols();
      // restrict A to the invariant subspace spanned by the block columns
      auto R = solve(blk.basis, A * blk.basis);
      if (!R.has_value()) throw std::logic_error("block not invariant under a commuting operator");
      int found = 0;
      for (long rk = 0; rk < F.size() && found < k; ++rk) {
        FieldElement lam = F.by_rank(rk);
        Mat shifted = *R;
        for (int i = 0; i < k; ++i)
          shifted.set_raw(i, i, F.raw_sub(shifted.raw(i, i), lam.encoded()));
        Mat K = nullspace(shifted);
        if (K.cols() == 0) continue;
        Block nb{blk.basis * K, blk.tuple};
        nb.tuple.push_back(lam);
        found += K.cols();
        next.push_back(std::move(nb));
      }
      if (found != k) return std::nullopt;  // restriction not diagonalizable over F
    }
    blocks = std::move(next);
  }

  SimultaneousEigen out{Mat(Fp, n, n), {}};
  int col = 0;
  for (const Block& blk : blocks)
    for (int j = 0; j < blk.basis.cols(); ++j) {
      for (int i = 0; i < n; ++i) out.basis.set_raw(i, col, blk.basis.raw(i, j));
      out.eigen_tuples.push_back(blk.tuple);
      ++col;
    }
  if (col != n) throw std::logic_error("refinement lost dimensions");
  return out;
}

}  // namespace cod
