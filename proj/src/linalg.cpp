#include "germ/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace germ {

Vec zero_vec(const Field& f, std::size_t dim) { return Vec(dim, f.zero()); }

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const FieldElem& e) { return e.is_zero(); });
}

Vec add_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::Mismatch, "vector dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::Mismatch, "vector dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale_vec(const Vec& a, const FieldElem& c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].is_zero() ? a[i] : a[i] * c;
  return r;
}

void axpy(Vec& a, const FieldElem& c, const Vec& b) {
  if (c.is_zero()) return;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += c * b[i];
}

namespace {

std::size_t first_nonzero(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return i;
  return v.size();
}

}  // namespace

SubspaceBasis::SubspaceBasis(Field f, std::size_t dim) : field_(std::move(f)), dim_(dim) {}

SubspaceBasis SubspaceBasis::span(const Field& f, std::size_t dim, const std::vector<Vec>& gens) {
  SubspaceBasis b(f, dim);
  for (auto& g : gens) b.add(g);
  return b;
}

Vec SubspaceBasis::reduce(const Vec& v) const {
  if (v.size() != dim_) throw Error(ErrorCode::Mismatch, "vector dimension mismatch");
  Vec r = v;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (r[pivots_[i]].is_zero()) continue;
    axpy(r, -r[pivots_[i]], rows_[i]);
  }
  return r;
}

bool SubspaceBasis::add(const Vec& v) {
  Vec r = reduce(v);
  std::size_t p = first_nonzero(r);
  if (p == dim_) return false;
  r = scale_vec(r, r[p].inverse());
  for (auto& row : rows_)
    if (!row[p].is_zero()) axpy(row, -row[p], r);
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, p);
  rows_.insert(rows_.begin() + pos, std::move(r));
  return true;
}

bool SubspaceBasis::contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

std::optional<Vec> SubspaceBasis::membership(const Vec& v) const {
  if (!contains(v)) return std::nullopt;
  Vec c(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = v[pivots_[i]];
  return c;
}

bool SubspaceBasis::contains(const SubspaceBasis& other) const {
  for (auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

bool SubspaceBasis::operator==(const SubspaceBasis& other) const {
  return dim_ == other.dim_ && pivots_ == other.pivots_ && rows_ == other.rows_;
}

SubspaceBasis SubspaceBasis::sum(const SubspaceBasis& other) const {
  SubspaceBasis s = *this;
  for (auto& r : other.rows_) s.add(r);
  return s;
}

SubspaceBasis SubspaceBasis::intersect(const SubspaceBasis& other) const {
  // Relations sum a_i u_i - sum b_j w_j = 0 give the intersection sum a_i u_i.
  std::vector<Vec> gens;
  for (auto& r : rows_) gens.push_back(r);
  for (auto& r : other.rows_) gens.push_back(scale_vec(r, -field_.one()));
  SubspaceBasis out(field_, dim_);
  for (auto& rel : kernel(field_, dim_, gens)) {
    Vec v = zero_vec(field_, dim_);
    for (std::size_t i = 0; i < rows_.size(); ++i) axpy(v, rel[i], rows_[i]);
    out.add(v);
  }
  return out;
}

SubspaceBasis SubspaceBasis::base_change(const Extension& ext) const {
  SubspaceBasis out(ext.top(), dim_);
  out.pivots_ = pivots_;
  for (auto& r : rows_) {
    Vec e(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) e[i] = ext.embed(r[i]);
    out.rows_.push_back(std::move(e));
  }
  return out;
}

TrackedElimination::TrackedElimination(Field f, std::size_t dim, std::size_t generators)
    : field_(std::move(f)), dim_(dim), ngen_(generators) {}

std::optional<Vec> TrackedElimination::insert(std::size_t index, const Vec& v) {
  if (v.size() != dim_) throw Error(ErrorCode::Mismatch, "vector dimension mismatch");
  Vec r = v;
  Vec c = zero_vec(field_, ngen_);
  c[index] = field_.one();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (r[pivots_[i]].is_zero()) continue;
    FieldElem m = -r[pivots_[i]];
    axpy(r, m, rows_[i]);
    axpy(c, m, combos_[i]);
  }
  std::size_t p = first_nonzero(r);
  if (p == dim_) return c;
  FieldElem inv = r[p].inverse();
  r = scale_vec(r, inv);
  c = scale_vec(c, inv);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i][p].is_zero()) continue;
    FieldElem m = -rows_[i][p];
    axpy(rows_[i], m, r);
    axpy(combos_[i], m, c);
  }
  rows_.push_back(std::move(r));
  combos_.push_back(std::move(c));
  pivots_.push_back(p);
  return std::nullopt;
}

std::optional<Vec> TrackedElimination::solve(const Vec& target) const {
  if (target.size() != dim_) throw Error(ErrorCode::Mismatch, "vector dimension mismatch");
  Vec r = target;
  Vec c = zero_vec(field_, ngen_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (r[pivots_[i]].is_zero()) continue;
    FieldElem m = r[pivots_[i]];
    axpy(r, -m, rows_[i]);
    axpy(c, m, combos_[i]);
  }
  if (!is_zero_vec(r)) return std::nullopt;
  return c;
}

std::vector<Vec> kernel(const Field& f, std::size_t dim, const std::vector<Vec>& gens) {
  TrackedElimination el(f, dim, gens.size());
  std::vector<Vec> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (auto rel = el.insert(i, gens[i])) out.push_back(std::move(*rel));
  return out;
}

std::optional<Vec> solve_combination(const Field& f, std::size_t dim, const std::vector<Vec>& gens,
                                     const Vec& target) {
  TrackedElimination el(f, dim, gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) el.insert(i, gens[i]);
  return el.solve(target);
}

}  // namespace germ
