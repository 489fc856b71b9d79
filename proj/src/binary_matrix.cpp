#include "udesign/binary_matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "udesign/linalg.hpp"

namespace udesign {

namespace {
constexpr unsigned kMaxCols = 26;  // keeps every enumeration code in 64 bits

void check_shape(unsigned rows, unsigned cols) {
  if (rows == 0 || cols == 0) throw ConfigError("binary matrix needs at least one row and column");
  if (cols > kMaxCols) throw ConfigError("binary matrix wider than supported");
  if (rows > 32) throw ConfigError("binary matrix taller than supported");
}
}  // namespace

BinaryMatrix::BinaryMatrix(unsigned rows, unsigned cols) : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  row_.assign(rows, 0u);
}

BinaryMatrix BinaryMatrix::from_rows(unsigned cols, const std::vector<std::uint32_t>& rows) {
  BinaryMatrix m(static_cast<unsigned>(rows.size()), cols);
  for (unsigned s = 0; s < m.rows_; ++s) {
    if (rows[s] >> cols) throw ConfigError("row value wider than the column count");
    m.row_[s] = rows[s];
  }
  return m;
}

BinaryMatrix BinaryMatrix::from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ConfigError("binary matrix needs at least one row and column");
  const unsigned cols = static_cast<unsigned>(rows.front().size());
  BinaryMatrix m(static_cast<unsigned>(rows.size()), cols);
  for (unsigned s = 0; s < m.rows_; ++s) {
    if (rows[s].size() != cols) throw ConfigError("ragged rows in binary matrix literal");
    std::uint32_t bits = 0;
    for (char c : rows[s]) {
      if (c != '0' && c != '1') throw ConfigError("binary matrix literal must be 0/1");
      bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
    }
    m.row_[s] = bits;
  }
  return m;
}

BinaryMatrix BinaryMatrix::from_code(unsigned rows, unsigned cols, std::uint64_t code) {
  BinaryMatrix m(rows, cols);
  if (static_cast<std::uint64_t>(rows) * cols > 64)
    throw ConfigError("matrix code wider than 64 bits");
  const std::uint32_t mask = (cols == 32) ? ~0u : ((1u << cols) - 1u);
  for (unsigned s = 0; s < rows; ++s)
    m.row_[s] = static_cast<std::uint32_t>(code >> ((rows - 1 - s) * cols)) & mask;
  if (rows * cols < 64 && (code >> (rows * cols)) != 0)
    throw ConfigError("matrix code has bits beyond the declared shape");
  return m;
}

bool BinaryMatrix::bit(unsigned row, unsigned pos) const {
  if (row >= rows_ || pos == 0 || pos > cols_) throw ConfigError("matrix index out of range");
  return (row_[row] >> (cols_ - pos)) & 1u;
}

void BinaryMatrix::set_bit(unsigned row, unsigned pos, bool value) {
  if (row >= rows_ || pos == 0 || pos > cols_) throw ConfigError("matrix index out of range");
  const std::uint32_t m = 1u << (cols_ - pos);
  if (value)
    row_[row] |= m;
  else
    row_[row] &= ~m;
}

std::uint32_t BinaryMatrix::column_bits(unsigned pos) const {
  if (pos == 0 || pos > cols_) throw ConfigError("matrix index out of range");
  std::uint32_t out = 0;
  for (unsigned s = 0; s < rows_; ++s) out = (out << 1) | (bit(s, pos) ? 1u : 0u);
  return out;
}

std::uint32_t BinaryMatrix::row_restricted(unsigned row,
                                           const std::vector<unsigned>& positions) const {
  if (row >= rows_) throw ConfigError("matrix index out of range");
  std::uint32_t out = 0;
  for (unsigned pos : positions) out = (out << 1) | (bit(row, pos) ? 1u : 0u);
  return out;
}

std::uint64_t BinaryMatrix::code() const {
  std::uint64_t out = 0;
  for (unsigned s = 0; s < rows_; ++s) out = (out << cols_) | row_[s];
  return out;
}

std::string BinaryMatrix::to_string() const {
  std::string out;
  for (unsigned s = 0; s < rows_; ++s) {
    if (s) out.push_back('/');
    for (unsigned pos = 1; pos <= cols_; ++pos) out.push_back(bit(s, pos) ? '1' : '0');
  }
  return out;
}

IndexFamily::IndexFamily(unsigned n, std::vector<std::vector<unsigned>> sets)
    : n_(n), sets_(std::move(sets)) {
  if (n_ == 0 || n_ > kMaxCols) throw ConfigError("index family width out of range");
  if (sets_.empty()) throw ConfigError("index family must contain at least one set");
  for (auto& set : sets_) {
    if (set.empty()) throw ConfigError("index sets must be nonempty");
    std::sort(set.begin(), set.end());
    for (size_t i = 0; i < set.size(); ++i) {
      if (set[i] == 0 || set[i] > n_) throw ConfigError("index position out of range");
      if (i && set[i] == set[i - 1]) throw ConfigError("duplicate position in index set");
    }
  }
  std::sort(sets_.begin(), sets_.end());
  for (size_t i = 1; i < sets_.size(); ++i)
    if (sets_[i] == sets_[i - 1]) throw ConfigError("duplicate set in index family");
}

IndexFamily IndexFamily::all_subsets_of_size(unsigned n, unsigned r) {
  if (r == 0 || r > n) throw ConfigError("subset size out of range for index family");
  std::vector<std::vector<unsigned>> sets;
  std::vector<unsigned> current;
  // Depth-first generation emits the subsets directly in lexicographic order.
  auto rec = [&](auto&& self, unsigned next) -> void {
    if (current.size() == r) {
      sets.push_back(current);
      return;
    }
    for (unsigned pos = next; pos + (r - static_cast<unsigned>(current.size())) <= n + 1; ++pos) {
      current.push_back(pos);
      self(self, pos + 1);
      current.pop_back();
    }
  };
  rec(rec, 1);
  return IndexFamily(n, std::move(sets));
}

IndexFamily IndexFamily::full_width(unsigned n) {
  std::vector<unsigned> all(n);
  for (unsigned i = 0; i < n; ++i) all[i] = i + 1;
  return IndexFamily(n, {all});
}

bool IndexFamily::is_subfamily_of(const IndexFamily& other) const {
  if (n_ != other.n_) return false;
  for (const auto& set : sets_)
    if (!std::binary_search(other.sets_.begin(), other.sets_.end(), set)) return false;
  return true;
}

std::string IndexFamily::label() const {
  std::string out;
  for (const auto& set : sets_) {
    out.push_back('{');
    for (size_t i = 0; i < set.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(set[i]);
    }
    out.push_back('}');
  }
  return out;
}

std::vector<std::uint32_t> canonical_omega(const BinaryMatrix& k,
                                           const std::vector<unsigned>& positions) {
  if (positions.empty()) throw ConfigError("canonical key needs a nonempty position set");
  for (size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] == 0 || positions[i] > k.cols())
      throw ConfigError("index position out of range");
    if (i && positions[i] <= positions[i - 1])
      throw ConfigError("positions must be strictly ascending");
  }
  std::vector<std::uint32_t> key(k.rows());
  for (unsigned s = 0; s < k.rows(); ++s) key[s] = k.row_restricted(s, positions);
  std::sort(key.begin(), key.end());
  return key;
}

std::vector<std::uint32_t> canonical_key(const BinaryMatrix& k, const IndexFamily& fam) {
  if (fam.n() != k.cols()) throw ConfigError("index family width does not match the matrix");
  std::vector<std::uint32_t> key;
  key.reserve(fam.sets().size() * k.rows());
  for (const auto& set : fam.sets()) {
    auto part = canonical_omega(k, set);
    key.insert(key.end(), part.begin(), part.end());
  }
  return key;
}

bool is_local_permutation(const BinaryMatrix& k, const BinaryMatrix& kp,
                          const IndexFamily& fam) {
  if (k.rows() != kp.rows() || k.cols() != kp.cols())
    throw ConfigError("matrix dimensions do not match");
  return canonical_key(k, fam) == canonical_key(kp, fam);
}

bool is_row_permutation(const BinaryMatrix& k, const BinaryMatrix& kp) {
  if (k.rows() != kp.rows() || k.cols() != kp.cols())
    throw ConfigError("matrix dimensions do not match");
  std::vector<std::uint32_t> a(k.rows()), b(k.rows());
  for (unsigned s = 0; s < k.rows(); ++s) {
    a[s] = k.row(s);
    b[s] = kp.row(s);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace udesign
