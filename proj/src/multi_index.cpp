#include "sgcol/multi_index.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <unordered_set>

#include "sgcol/errors.hpp"
#include "sgcol/hermite.hpp"

namespace sgcol {

namespace {

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::string to_string(const MultiIndex& nu) {
  std::string s = "{";
  for (const auto& [m, l] : nu.entries()) {
    if (s.size() > 1) s += ",";
    s += std::to_string(m) + ":" + std::to_string(l);
  }
  return s + "}";
}

}  // namespace

MultiIndex MultiIndex::dense(std::initializer_list<int> levels) {
  return dense(std::span<const int>(levels.begin(), levels.size()));
}

MultiIndex MultiIndex::dense(std::span<const int> levels) {
  MultiIndex nu;
  for (std::size_t m = 0; m < levels.size(); ++m) {
    if (levels[m] < 0) throw ContractError("MultiIndex: negative level");
    if (levels[m] > 0) nu.entries_.emplace_back(int(m) + 1, levels[m]);
  }
  return nu;
}

MultiIndex MultiIndex::unit(int dim, int level) {
  MultiIndex nu;
  nu.set(dim, level);
  return nu;
}

int MultiIndex::operator[](int dim) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const Entry& e, int d) { return e.first < d; });
  return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

void MultiIndex::set(int dim, int level) {
  if (dim < 1) throw ContractError("MultiIndex: dimensions are 1-based, got " + std::to_string(dim));
  if (level < 0) throw ContractError("MultiIndex: negative level");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const Entry& e, int d) { return e.first < d; });
  if (it != entries_.end() && it->first == dim) {
    if (level == 0) {
      entries_.erase(it);
    } else {
      it->second = level;
    }
  } else if (level > 0) {
    entries_.insert(it, Entry{dim, level});
  }
}

MultiIndex MultiIndex::plus_unit(int dim) const {
  MultiIndex r = *this;
  r.set(dim, (*this)[dim] + 1);
  return r;
}

MultiIndex MultiIndex::minus_unit(int dim) const {
  const int l = (*this)[dim];
  if (l == 0) throw ContractError("MultiIndex::minus_unit: level already 0 in dimension " + std::to_string(dim));
  MultiIndex r = *this;
  r.set(dim, l - 1);
  return r;
}

int MultiIndex::l1() const noexcept {
  int s = 0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

std::size_t MultiIndex::tensor_size() const noexcept {
  std::size_t s = 1;
  for (const auto& e : entries_) s *= std::size_t(e.second) + 1;
  return s;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& nu) const noexcept {
  std::size_t seed = nu.entries().size();
  for (const auto& [m, l] : nu.entries()) {
    hash_combine(seed, std::hash<int>{}(m));
    hash_combine(seed, std::hash<int>{}(l));
  }
  return seed;
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (const auto& [m, l] : a.entries()) {
    if (l > b[m]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

MonotoneSet MonotoneSet::from(std::vector<MultiIndex> members) {
  // Inserting by increasing |nu|_1 guarantees predecessors come first.
  std::stable_sort(members.begin(), members.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return a.l1() < b.l1(); });
  MonotoneSet s;
  for (const auto& nu : members) {
    if (s.contains(nu)) continue;
    s.insert(nu);
  }
  return s;
}

MonotoneSet MonotoneSet::origin() {
  MonotoneSet s;
  s.insert(MultiIndex{});
  return s;
}

bool MonotoneSet::admissible(const MultiIndex& nu) const {
  if (contains(nu)) return false;
  for (const auto& [m, l] : nu.entries()) {
    if (!contains(nu.minus_unit(m))) return false;
  }
  return true;
}

void MonotoneSet::insert(const MultiIndex& nu) {
  if (!admissible(nu)) {
    throw ContractError("MonotoneSet::insert: " + to_string(nu) +
                        (contains(nu) ? " already present" : " would break downward closure"));
  }
  index_.emplace(nu, members_.size());
  members_.push_back(nu);
  max_dim_ = std::max(max_dim_, nu.max_dim());
}

std::vector<MultiIndex> MonotoneSet::sorted() const {
  std::vector<MultiIndex> s = members_;
  std::sort(s.begin(), s.end());
  return s;
}

int MonotoneSet::active_dims() const {
  std::set<int> dims;
  for (const auto& nu : members_) {
    for (const auto& e : nu.entries()) dims.insert(e.first);
  }
  return static_cast<int>(dims.size());
}

MonotoneSet envelope(const MultiIndex& nu) {
  std::vector<MultiIndex> members;
  members.reserve(nu.tensor_size());
  const auto& e = nu.entries();
  MultiIndex cur;
  std::function<void(std::size_t)> rec = [&](std::size_t d) {
    if (d == e.size()) {
      members.push_back(cur);
      return;
    }
    for (int l = 0; l <= e[d].second; ++l) {
      cur.set(e[d].first, l);
      rec(d + 1);
    }
    cur.set(e[d].first, 0);
  };
  rec(0);
  return MonotoneSet::from(std::move(members));
}

std::vector<MultiIndex> neighbors(const MonotoneSet& lambda, int m_buffer, int dim_cap) {
  if (lambda.empty()) throw ContractError("neighbors: empty set");
  int limit = lambda.max_dim() + m_buffer;
  if (dim_cap > 0) limit = std::min(limit, dim_cap);
  std::set<MultiIndex> found;
  for (const auto& nu : lambda.members()) {
    for (int m = 1; m <= limit; ++m) {
      MultiIndex cand = nu.plus_unit(m);
      if (!found.contains(cand) && lambda.admissible(cand)) found.insert(std::move(cand));
    }
  }
  return {found.begin(), found.end()};
}

MonotoneSet td_set(int w, int M) {
  if (w < 0 || M < 1) throw ContractError("td_set: need w >= 0 and M >= 1");
  std::vector<MultiIndex> members;
  MultiIndex cur;
  std::function<void(int, int)> rec = [&](int dim, int budget) {
    if (dim > M) {
      members.push_back(cur);
      return;
    }
    for (int l = 0; l <= budget; ++l) {
      cur.set(dim, l);
      rec(dim + 1, budget - l);
    }
    cur.set(dim, 0);
  };
  rec(1, w);
  return MonotoneSet::from(std::move(members));
}

MonotoneSet hc_set(int w, int M) {
  if (w < 1 || M < 1) throw ContractError("hc_set: need w >= 1 and M >= 1");
  std::vector<MultiIndex> members;
  MultiIndex cur;
  std::function<void(int, int)> rec = [&](int dim, int prod) {
    if (dim > M) {
      members.push_back(cur);
      return;
    }
    for (int l = 0; prod * (l + 1) <= w; ++l) {
      cur.set(dim, l);
      rec(dim + 1, prod * (l + 1));
    }
    cur.set(dim, 0);
  };
  rec(1, 1);
  return MonotoneSet::from(std::move(members));
}

CombinationCoefficients combination_coefficients(const MonotoneSet& lambda) {
  if (lambda.empty()) throw ContractError("combination_coefficients: empty set");
  CombinationCoefficients out;
  for (const auto& k : lambda.sorted()) {
    // Only dimensions with k + e_m in Lambda can contribute; by monotonicity
    // a subset z contributes only if every smaller subset does, so a pruned
    // depth-first walk visits exactly the members k + z of Lambda.
    std::vector<int> dims;
    for (int m = 1; m <= lambda.max_dim(); ++m) {
      if (lambda.contains(k.plus_unit(m))) dims.push_back(m);
    }
    int c = 0;
    std::function<void(std::size_t, const MultiIndex&, int)> rec = [&](std::size_t from, const MultiIndex& kz,
                                                                       int sign) {
      c += sign;
      for (std::size_t d = from; d < dims.size(); ++d) {
        MultiIndex next = kz.plus_unit(dims[d]);
        if (lambda.contains(next)) rec(d + 1, next, -sign);
      }
    };
    rec(0, k, 1);
    if (c != 0) out.emplace_back(k, c);
  }
  return out;
}

CombinationCoefficients detail_terms(const MultiIndex& nu) {
  CombinationCoefficients out;
  const auto& e = nu.entries();
  const std::size_t s = e.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
    MultiIndex k = nu;
    int sign = 1;
    for (std::size_t d = 0; d < s; ++d) {
      if (mask & (std::size_t{1} << d)) {
        k = k.minus_unit(e[d].first);
        sign = -sign;
      }
    }
    out.emplace_back(std::move(k), sign);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> GridPoint::coordinates(int dims) const {
  int need = coords.empty() ? 0 : coords.back().dim;
  std::vector<double> x(std::max(dims, need), 0.0);
  for (const auto& c : coords) x[c.dim - 1] = gauss_hermite(c.rule_size).nodes[c.index];
  return x;
}

std::size_t GridPointHash::operator()(const GridPoint& p) const noexcept {
  std::size_t seed = p.coords.size();
  for (const auto& c : p.coords) {
    hash_combine(seed, std::hash<int>{}(c.dim));
    hash_combine(seed, std::hash<int>{}(c.rule_size));
    hash_combine(seed, std::hash<int>{}(c.index));
  }
  return seed;
}

std::vector<GridPoint> tensor_grid(const MultiIndex& k) {
  std::vector<GridPoint> out;
  out.reserve(k.tensor_size());
  const auto& e = k.entries();
  std::vector<NodeCoord> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t d) {
    if (d == e.size()) {
      out.push_back(GridPoint{cur});
      return;
    }
    const int n = e[d].second + 1;
    const int centre = n % 2 == 1 ? (n - 1) / 2 : -1;
    for (int j = 0; j < n; ++j) {
      if (j == centre) {
        rec(d + 1);
      } else {
        cur.push_back(NodeCoord{e[d].first, n, j});
        rec(d + 1);
        cur.pop_back();
      }
    }
  };
  rec(0);
  return out;
}

std::vector<GridPoint> sparse_grid_points(const MonotoneSet& lambda) {
  std::unordered_set<GridPoint, GridPointHash> seen;
  for (const auto& k : lambda.members()) {
    for (auto& p : tensor_grid(k)) seen.insert(std::move(p));
  }
  std::vector<GridPoint> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

PointCount count_points(const MonotoneSet& lambda) {
  std::unordered_set<GridPoint, GridPointHash> seen;
  for (const auto& k : lambda.members()) {
    for (auto& p : tensor_grid(k)) seen.insert(std::move(p));
  }
  const std::size_t n = lambda.size();
  return {seen.size(), n * (n + 1) / 2};
}

}  // namespace sgcol
