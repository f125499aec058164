#include "yano/jet.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace yano {

namespace {

std::string describe_point(const std::vector<double>& p) {
  if (p.empty()) return {};
  std::ostringstream os;
  os << " at (";
  for (size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

int common_dim(const Jet2& a, const Jet2& b) {
  if (a.dim() == 0) return b.dim();
  if (b.dim() == 0 || a.dim() == b.dim()) return a.dim();
  throw std::invalid_argument("jet dimension mismatch");
}

cplx on_upper_side(cplx z) {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  return z;
}

}  // namespace

SingularEvaluation::SingularEvaluation(const std::string& what, std::vector<double> point)
    : Error(what + describe_point(point)), point_(std::move(point)) {}

Jet2::Jet2(int n, cplx v) : n_(n), v_(v) {
  if (n < 0 || n > kMaxDim) throw std::invalid_argument("jet dimension out of range");
}

Jet2 Jet2::variable(int n, int i, double v) {
  if (i < 0 || i >= n) throw std::out_of_range("coordinate index out of range");
  Jet2 j(n, v);
  j.g_[i] = 1.0;
  return j;
}

Jet2 Jet2::partial(int k) const {
  if (n_ == 0) return Jet2{};
  if (k < 0 || k >= n_) throw std::out_of_range("partial index out of range");
  Jet2 r(n_, g_[k]);
  for (int i = 0; i < n_; ++i) r.g_[i] = h_[k * kMaxDim + i];
  return r;
}

Jet2 Jet2::directional(const std::vector<cplx>& v) const {
  if (n_ == 0) return Jet2{};
  Jet2 r(n_, 0.0);
  for (int k = 0; k < n_; ++k) {
    r.v_ += v[k] * g_[k];
    for (int i = 0; i < n_; ++i) r.g_[i] += v[k] * h_[k * kMaxDim + i];
  }
  return r;
}

bool Jet2::is_finite() const {
  auto fin = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!fin(v_)) return false;
  for (int i = 0; i < n_; ++i) {
    if (!fin(g_[i])) return false;
    for (int j = 0; j < n_; ++j)
      if (!fin(h_[i * kMaxDim + j])) return false;
  }
  return true;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  const int n = common_dim(*this, o);
  n_ = n;
  v_ += o.v_;
  if (o.n_) {
    for (int i = 0; i < n; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h_[i * kMaxDim + j] += o.h_[i * kMaxDim + j];
  }
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  const int n = common_dim(*this, o);
  n_ = n;
  v_ -= o.v_;
  if (o.n_) {
    for (int i = 0; i < n; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h_[i * kMaxDim + j] -= o.h_[i * kMaxDim + j];
  }
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2 operator-(const Jet2& a) {
  Jet2 r(a.n_, -a.v_);
  for (int i = 0; i < a.n_; ++i) r.g_[i] = -a.g_[i];
  for (int i = 0; i < a.n_; ++i)
    for (int j = 0; j < a.n_; ++j) r.h_[i * kMaxDim + j] = -a.h_[i * kMaxDim + j];
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int n = common_dim(a, b);
  Jet2 r(n, a.v_ * b.v_);
  if (a.n_ == 0 || b.n_ == 0) {
    const Jet2& s = a.n_ ? a : b;
    const cplx c = a.n_ ? b.v_ : a.v_;
    for (int i = 0; i < n; ++i) r.g_[i] = c * s.g_[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.h_[i * kMaxDim + j] = c * s.h_[i * kMaxDim + j];
    return r;
  }
  for (int i = 0; i < n; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx h = a.v_ * b.h_[i * kMaxDim + j] + b.v_ * a.h_[i * kMaxDim + j] +
                     a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
      r.h_[i * kMaxDim + j] = h;
      r.h_[j * kMaxDim + i] = h;
    }
  }
  return r;
}

Jet2 chain(const Jet2& u, cplx f0, cplx f1, cplx f2) {
  const int n = u.n_;
  Jet2 r(n, f0);
  for (int i = 0; i < n; ++i) r.g_[i] = f1 * u.g_[i];
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx h = f1 * u.h_[i * kMaxDim + j] + f2 * u.g_[i] * u.g_[j];
      r.h_[i * kMaxDim + j] = h;
      r.h_[j * kMaxDim + i] = h;
    }
  }
  return r;
}

Jet2 divide(const Jet2& a, const Jet2& b, double epsilon) {
  const cplx b0 = b.value();
  if (std::abs(b0) < epsilon) throw SingularEvaluation("division by near-zero value");
  const cplx inv = 1.0 / b0;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return divide(a, b, kSingularEpsilon); }

cplx principal_sqrt(cplx z) { return std::sqrt(on_upper_side(z)); }

Jet2 sqrt(const Jet2& u) {
  const cplx z = u.value();
  if (std::abs(z) < kSingularEpsilon) throw SingularEvaluation("square root of near-zero value");
  const cplx s = principal_sqrt(z);
  return chain(u, s, 0.5 / s, -0.25 / (s * z));
}

Jet2 pow(const Jet2& u, double r) {
  const cplx z = on_upper_side(u.value());
  if (r == std::floor(r) && std::abs(r) <= 64) return pow(u, static_cast<int>(r));
  if (std::abs(z) < kSingularEpsilon) throw SingularEvaluation("fractional power of near-zero value");
  const cplx f0 = std::pow(z, r);
  return chain(u, f0, r * f0 / z, r * (r - 1.0) * f0 / (z * z));
}

Jet2 pow(const Jet2& u, int k) {
  if (k < 0) return Jet2(1.0) / pow(u, -k);
  Jet2 result(1.0);
  Jet2 base = u;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Jet2 exp(const Jet2& u) {
  const cplx e = std::exp(u.value());
  return chain(u, e, e, e);
}

Jet2 log(const Jet2& u) {
  const cplx z = on_upper_side(u.value());
  if (std::abs(z) < kSingularEpsilon) throw SingularEvaluation("logarithm of near-zero value");
  return chain(u, std::log(z), 1.0 / z, -1.0 / (z * z));
}

Jet2 sin(const Jet2& u) {
  const cplx z = u.value();
  return chain(u, std::sin(z), std::cos(z), -std::sin(z));
}

Jet2 cos(const Jet2& u) {
  const cplx z = u.value();
  return chain(u, std::cos(z), -std::sin(z), -std::cos(z));
}

Jet2 lift_coordinate(int i, const Point& p) {
  if (i < 0 || i >= p.dim()) throw std::out_of_range("coordinate index out of range");
  return Jet2::variable(p.dim(), i, p.coords[i]);
}

std::vector<Jet2> lift_coordinates(const Point& p) {
  std::vector<Jet2> x;
  x.reserve(p.coords.size());
  for (int i = 0; i < p.dim(); ++i) x.push_back(lift_coordinate(i, p));
  return x;
}

namespace {

using Mat = Eigen::MatrixXcd;

struct Slices {
  Mat value;
  std::vector<Mat> d;   // d[i] = ∂_i A
  std::vector<Mat> dd;  // dd[i*n+j] = ∂_i∂_j A
};

Slices slice(const JetMatrix& a, int n) {
  const int r = a.rows();
  Slices s{Mat(r, r), std::vector<Mat>(n, Mat(r, r)), std::vector<Mat>(n * n, Mat(r, r))};
  for (int p = 0; p < r; ++p) {
    for (int q = 0; q < r; ++q) {
      const Jet2& e = a(p, q);
      s.value(p, q) = e.value();
      for (int i = 0; i < n; ++i) {
        s.d[i](p, q) = e.grad(i);
        for (int j = 0; j < n; ++j) s.dd[i * n + j](p, q) = e.hess(i, j);
      }
    }
  }
  return s;
}

}  // namespace

JetMatrix inverse(const JetMatrix& a, int n) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square jet matrix");
  const int r = a.rows();
  const Slices s = slice(a, n);
  Eigen::PartialPivLU<Mat> lu(s.value);
  const cplx det = lu.determinant();
  if (std::abs(det) < kSingularEpsilon) throw SingularEvaluation("singular matrix inverse");
  const Mat b = lu.inverse();
  std::vector<Mat> db(n), bdab(n);
  for (int i = 0; i < n; ++i) {
    bdab[i] = b * s.d[i];
    db[i] = -bdab[i] * b;
  }
  JetMatrix out(r, r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) out(p, q) = Jet2(n, b(p, q));
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) out(p, q).set_grad(i, db[i](p, q));
    for (int j = i; j < n; ++j) {
      // ∂_i∂_j B = B(∂_iA B ∂_jA + ∂_jA B ∂_iA − ∂_i∂_jA)B
      const Mat h = (bdab[i] * bdab[j] + bdab[j] * bdab[i] - b * s.dd[i * n + j]) * b;
      for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) out(p, q).set_hess(i, j, h(p, q));
    }
  }
  return out;
}

Jet2 determinant(const JetMatrix& a, int n) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square jet matrix");
  const Slices s = slice(a, n);
  Eigen::PartialPivLU<Mat> lu(s.value);
  const cplx det = lu.determinant();
  if (std::abs(det) < kSingularEpsilon) throw SingularEvaluation("singular matrix in determinant");
  const Mat b = lu.inverse();
  std::vector<Mat> bda(n);
  std::vector<cplx> tr(n);
  for (int i = 0; i < n; ++i) {
    bda[i] = b * s.d[i];
    tr[i] = bda[i].trace();
  }
  Jet2 out(n, det);
  for (int i = 0; i < n; ++i) {
    out.set_grad(i, det * tr[i]);
    for (int j = i; j < n; ++j) {
      const cplx h = det * (tr[i] * tr[j] - (bda[i] * bda[j]).trace() + (b * s.dd[i * n + j]).trace());
      out.set_hess(i, j, h);
    }
  }
  return out;
}

}  // namespace yano
