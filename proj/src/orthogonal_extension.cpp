#include "udesign/orthogonal_extension.hpp"

#include <algorithm>

namespace udesign {

OrthogonalCandidate OrthogonalCandidate::identity(unsigned t) {
  if (t == 0) throw ConfigError("orthogonal matrix needs positive dimension");
  OrthogonalCandidate o;
  o.t_ = t;
  o.m_.assign(static_cast<size_t>(t) * t, BigRat(0));
  for (unsigned r = 0; r < t; ++r) o.m_[r * t + r] = 1;
  return o;
}

OrthogonalCandidate OrthogonalCandidate::from_permutation(const Perm& perm) {
  if (!is_valid_perm(perm)) throw ConfigError("invalid permutation");
  const unsigned t = static_cast<unsigned>(perm.size());
  OrthogonalCandidate o;
  o.t_ = t;
  o.m_.assign(static_cast<size_t>(t) * t, BigRat(0));
  for (unsigned r = 0; r < t; ++r) o.m_[r * t + perm[r]] = 1;
  return o;
}

bool OrthogonalCandidate::is_orthogonal() const {
  for (unsigned i = 0; i < t_; ++i)
    for (unsigned j = i; j < t_; ++j) {
      BigRat dot(0);
      for (unsigned r = 0; r < t_; ++r) dot += at(r, i) * at(r, j);
      if (dot != BigRat(i == j ? 1 : 0)) return false;
    }
  return true;
}

bool OrthogonalCandidate::is_permutation() const {
  for (unsigned c = 0; c < t_; ++c) {
    unsigned ones = 0;
    for (unsigned r = 0; r < t_; ++r) {
      const BigRat& v = at(r, c);
      if (v == 1)
        ++ones;
      else if (v != 0)
        return false;
    }
    if (ones != 1) return false;
  }
  // Columns are standard basis vectors; orthogonality makes them distinct.
  return is_orthogonal();
}

std::vector<BigRat> OrthogonalCandidate::apply_to_vertex(std::uint32_t bits) const {
  std::vector<BigRat> out(t_, BigRat(0));
  for (unsigned c = 0; c < t_; ++c) {
    if (!((bits >> (t_ - 1 - c)) & 1u)) continue;
    for (unsigned r = 0; r < t_; ++r) out[r] += at(r, c);
  }
  return out;
}

RMat OrthogonalCandidate::to_double() const {
  RMat out(t_, t_);
  for (unsigned r = 0; r < t_; ++r)
    for (unsigned c = 0; c < t_; ++c) out(r, c) = at(r, c).convert_to<double>();
  return out;
}

std::optional<OrthogonalCandidate> partial_isometry(const BinaryMatrix& k,
                                                    const BinaryMatrix& kp) {
  if (k.rows() != kp.rows() || k.cols() != kp.cols())
    throw ConfigError("matrix dimensions do not match");
  const unsigned t = k.rows(), n = k.cols();

  // Column Gram matrices over the integers; a mismatch rules out any
  // isometry between the column systems.
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i; j <= n; ++j) {
      int a = 0, b = 0;
      for (unsigned s = 0; s < t; ++s) {
        a += (k.bit(s, i) && k.bit(s, j)) ? 1 : 0;
        b += (kp.bit(s, i) && kp.bit(s, j)) ? 1 : 0;
      }
      if (a != b) return std::nullopt;
    }

  // Householder chain: after step i the running product maps columns 1..i of
  // k onto those of kp.  Gram equality keeps each new target at the right
  // distance, so one reflection through the difference vector fixes all
  // previously matched columns (their inner products against the difference
  // vanish) while sending the current image onto its target.
  OrthogonalCandidate o = OrthogonalCandidate::identity(t);
  std::vector<BigRat>& m = o.m_;
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<BigRat> x(t, BigRat(0)), u(t);
    for (unsigned r = 0; r < t; ++r)
      for (unsigned c = 0; c < t; ++c)
        if (k.bit(c, i)) x[r] += m[r * t + c];
    BigRat uu(0);
    for (unsigned r = 0; r < t; ++r) {
      u[r] = x[r] - BigRat(kp.bit(r, i) ? 1 : 0);
      uu += u[r] * u[r];
    }
    if (uu == 0) continue;  // column already matched
    // m <- (I - (2/uu) u u^T) m
    std::vector<BigRat> w(t, BigRat(0));
    for (unsigned c = 0; c < t; ++c)
      for (unsigned r = 0; r < t; ++r) w[c] += u[r] * m[r * t + c];
    const BigRat scale = BigRat(2) / uu;
    for (unsigned r = 0; r < t; ++r) {
      const BigRat ur = scale * u[r];
      for (unsigned c = 0; c < t; ++c) m[r * t + c] -= ur * w[c];
    }
  }
  return o;
}

std::uint64_t hypercube_preserved_count(const OrthogonalCandidate& o) {
  const unsigned t = o.t();
  if (t > 20) throw BudgetError("hypercube enumeration exceeds the budget");
  std::uint64_t count = 0;
  const std::uint32_t total = 1u << t;
  for (std::uint32_t v = 0; v < total; ++v) {
    const std::vector<BigRat> img = o.apply_to_vertex(v);
    bool in = true;
    for (const BigRat& x : img)
      if (x != 0 && x != 1) {
        in = false;
        break;
      }
    if (in) ++count;
  }
  return count;
}

}  // namespace udesign
