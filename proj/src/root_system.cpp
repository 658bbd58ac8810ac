#include "hallwalk/root_system.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace hallwalk {

namespace {

CartanMatrix chain_matrix(int rank) {
  CartanMatrix c(rank, std::vector<std::int64_t>(rank, 0));
  for (int i = 0; i < rank; ++i) {
    c[i][i] = 2;
    if (i + 1 < rank) {
      c[i][i + 1] = -1;
      c[i + 1][i] = -1;
    }
  }
  return c;
}

}  // namespace

CartanMatrix cartan_for_family(const std::string& family, int rank) {
  if (family.size() != 1)
    throw CartanError("unknown family '" + family + "'");
  const char f = family[0];
  auto need = [&](bool ok, const char* msg) {
    if (!ok) throw CartanError(std::string("family ") + f + ": " + msg);
  };
  switch (f) {
    case 'A':
      need(rank >= 1, "rank must be >= 1");
      return chain_matrix(rank);
    case 'B': {
      need(rank >= 2, "rank must be >= 2");
      auto c = chain_matrix(rank);
      c[rank - 2][rank - 1] = -2;  // last simple root short
      return c;
    }
    case 'C': {
      need(rank >= 2, "rank must be >= 2");
      auto c = chain_matrix(rank);
      c[rank - 1][rank - 2] = -2;  // last simple root long
      return c;
    }
    case 'D': {
      need(rank >= 3, "rank must be >= 3");
      auto c = chain_matrix(rank);
      c[rank - 2][rank - 1] = 0;
      c[rank - 1][rank - 2] = 0;
      c[rank - 3][rank - 1] = -1;
      c[rank - 1][rank - 3] = -1;
      return c;
    }
    case 'E': {
      need(rank >= 6 && rank <= 8, "rank must be 6, 7 or 8");
      // Bourbaki numbering: a chain 1-3-4-...-rank with node 2 hung off node 4.
      CartanMatrix c(rank, std::vector<std::int64_t>(rank, 0));
      for (int i = 0; i < rank; ++i) c[i][i] = 2;
      auto link = [&](int i, int j) { c[i][j] = -1; c[j][i] = -1; };
      link(0, 2);
      for (int i = 2; i + 1 < rank; ++i) link(i, i + 1);
      link(1, 3);
      return c;
    }
    case 'F': {
      need(rank == 4, "rank must be 4");
      auto c = chain_matrix(4);
      c[1][2] = -2;  // middle double bond, first two roots long
      return c;
    }
    case 'G': {
      need(rank == 2, "rank must be 2");
      // First simple root long; dominance of a coweight (a,b) then reads
      // 2a-3b >= 0 and -a+2b >= 0.
      return CartanMatrix{{2, -3}, {-1, 2}};
    }
    default:
      throw CartanError("unknown family '" + family + "'");
  }
}

RootSystem::RootSystem(CartanMatrix cartan, std::size_t cap)
    : n_(cartan.size()), cartan_(std::move(cartan)) {
  validate_cartan();
  compute_symmetrizer();
  close_roots(cap);
  close_weyl(cap);
}

void RootSystem::validate_cartan() const {
  if (n_ == 0) throw CartanError("Cartan matrix is empty");
  for (const auto& row : cartan_)
    if (row.size() != n_) throw CartanError("Cartan matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) {
    if (cartan_[i][i] != 2) throw CartanError("diagonal entries must equal 2");
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      if (cartan_[i][j] > 0)
        throw CartanError("off-diagonal entries must be <= 0");
      if ((cartan_[i][j] == 0) != (cartan_[j][i] == 0))
        throw CartanError("zero pattern must be symmetric");
    }
  }
}

void RootSystem::compute_symmetrizer() {
  // Spread d along the Coxeter graph, one component at a time.
  sym_d_.assign(n_, QQ(0));
  std::vector<int> comp(n_, -1);
  int ncomp = 0;
  for (std::size_t start = 0; start < n_; ++start) {
    if (comp[start] >= 0) continue;
    const int id = ncomp++;
    comp[start] = id;
    sym_d_[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j || cartan_[i][j] == 0) continue;
        const QQ dj = sym_d_[i] * QQ(cartan_[j][i]) / QQ(cartan_[i][j]);
        if (comp[j] < 0) {
          comp[j] = id;
          sym_d_[j] = dj;
          queue.push_back(j);
        } else if (sym_d_[j] != dj) {
          throw CartanError("matrix is not symmetrizable");
        }
      }
    }
  }

  // Finite type iff the symmetrized matrix B(i,j) = C(i,j)*d(j) is positive
  // definite; test via the pivots of an exact LDL elimination.
  std::vector<std::vector<QQ>> b(n_, std::vector<QQ>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      b[i][j] = QQ(cartan_[i][j]) * sym_d_[j];
  for (std::size_t k = 0; k < n_; ++k) {
    if (b[k][k] <= 0) throw CartanError("matrix is not of finite type");
    for (std::size_t i = k + 1; i < n_; ++i) {
      const QQ f = b[i][k] / b[k][k];
      for (std::size_t j = k; j < n_; ++j) b[i][j] -= f * b[k][j];
    }
  }

  // Normalize so the longest root in each component has squared length 2.
  std::vector<QQ> cmax(ncomp, QQ(0));
  for (std::size_t i = 0; i < n_; ++i)
    cmax[comp[i]] = std::max(cmax[comp[i]], sym_d_[i]);
  for (std::size_t i = 0; i < n_; ++i) sym_d_[i] /= cmax[comp[i]];
}

void RootSystem::close_roots(std::size_t cap) {
  // Walk the orbit of the simple roots, tracking root and coroot
  // coordinates together (they transform by transposed actions).
  std::unordered_set<Coweight, CoweightHash> seen;
  std::deque<RootDatum> queue;
  std::vector<RootDatum> all;
  for (std::size_t i = 0; i < n_; ++i) {
    RootDatum d;
    d.root.assign(n_, 0);
    d.root[i] = 1;
    d.coroot = cw_zero(n_);
    d.coroot[i] = 1;
    seen.insert(d.root);
    queue.push_back(d);
    all.push_back(std::move(d));
  }
  while (!queue.empty()) {
    RootDatum cur = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < n_; ++j) {
      RootDatum img = cur;
      // s_j on root coords subtracts (C^T a)_j, on coroot coords (C b)_j.
      std::int64_t ra = 0, cb = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        ra += cartan_[k][j] * cur.root[k];
        cb += cartan_[j][k] * cur.coroot[k];
      }
      img.root[j] -= ra;
      img.coroot[j] -= cb;
      if (seen.insert(img.root).second) {
        if (seen.size() > cap)
          throw CapExceeded("root enumeration exceeded cap");
        queue.push_back(img);
        all.push_back(std::move(img));
      }
    }
  }
  for (auto& d : all) {
    const bool pos = std::all_of(d.root.begin(), d.root.end(),
                                 [](std::int64_t v) { return v >= 0; });
    const bool neg = std::all_of(d.root.begin(), d.root.end(),
                                 [](std::int64_t v) { return v <= 0; });
    if (!pos && !neg) throw CartanError("root with mixed signs, input rejected");
    if (pos) positive_.push_back(std::move(d));
  }
  std::sort(positive_.begin(), positive_.end(),
            [](const RootDatum& a, const RootDatum& b) {
              return GradedLess{}(a.coroot, b.coroot);
            });
  two_rho_check_ = cw_zero(n_);
  for (const auto& d : positive_) two_rho_check_ = cw_add(two_rho_check_, d.coroot);
}

void RootSystem::close_weyl(std::size_t cap) {
  // Generator matrices on coroot coordinates: s_j = I - e_j * (row j of C).
  std::vector<std::vector<std::int64_t>> gens(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    std::vector<std::int64_t> m(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) m[i * n_ + i] = 1;
    for (std::size_t k = 0; k < n_; ++k) m[j * n_ + k] -= cartan_[j][k];
    gens[j] = std::move(m);
  }

  std::vector<std::int64_t> id(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) id[i * n_ + i] = 1;

  std::unordered_set<Coweight, CoweightHash> seen;  // matrices as flat vectors
  seen.insert(id);
  weyl_.push_back(WeylElement{id, 0, 1});
  // Breadth-first search in the Cayley graph: first visit happens at the
  // Coxeter length, so BFS depth is n(w).
  for (std::size_t head = 0; head < weyl_.size(); ++head) {
    const WeylElement cur = weyl_[head];  // copy, push_back below reallocates
    for (std::size_t j = 0; j < n_; ++j) {
      std::vector<std::int64_t> prod(n_ * n_, 0);
      for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = 0; k < n_; ++k) {
          const std::int64_t v = cur.mat[r * n_ + k];
          if (v == 0) continue;
          for (std::size_t c = 0; c < n_; ++c)
            prod[r * n_ + c] += v * gens[j][k * n_ + c];
        }
      if (seen.insert(prod).second) {
        if (seen.size() > cap)
          throw CapExceeded("Weyl enumeration exceeded cap");
        weyl_.push_back(
            WeylElement{std::move(prod), cur.length + 1, -cur.sign});
      }
    }
  }

  std::vector<ZZ> counts(positive_.size() + 1, ZZ(0));
  for (const auto& w : weyl_) counts[w.length] += 1;
  poincare_ = TPoly(std::move(counts));
}

Coweight RootSystem::apply(const WeylElement& w, const Coweight& x) const {
  Coweight r = cw_zero(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::int64_t acc = 0;
    for (std::size_t k = 0; k < n_; ++k) acc += w.mat[i * n_ + k] * x[k];
    r[i] = acc;
  }
  return r;
}

std::int64_t RootSystem::pairing_simple(const Coweight& x, std::size_t i) const {
  std::int64_t acc = 0;
  for (std::size_t j = 0; j < n_; ++j) acc += cartan_[i][j] * x[j];
  return acc;
}

std::int64_t RootSystem::pairing_root(const Coweight& x,
                                      const std::vector<std::int64_t>& root) const {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < n_; ++i)
    if (root[i] != 0) acc += root[i] * pairing_simple(x, i);
  return acc;
}

bool RootSystem::is_dominant(const Coweight& x) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (pairing_simple(x, i) < 0) return false;
  return true;
}

void RootSystem::require_dominant(const Coweight& x, const char* who) const {
  if (x.size() != n_)
    throw InvariantViolation(std::string(who) + ": coweight rank mismatch");
  if (!is_dominant(x))
    throw InvariantViolation(std::string(who) + ": coweight " + cw_str(x) +
                             " is not dominant");
}

void RootSystem::reflect_simple(Coweight& x, std::size_t i) const {
  x[i] -= pairing_simple(x, i);
}

std::pair<Coweight, std::vector<std::size_t>> RootSystem::dominant_representative(
    const Coweight& x) const {
  Coweight cur = x;
  std::vector<std::size_t> word;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i < n_; ++i) {
      if (pairing_simple(cur, i) < 0) {
        reflect_simple(cur, i);  // strictly raises height, so this terminates
        word.push_back(i);
        moved = true;
        break;
      }
    }
  }
  return {cur, word};
}

std::vector<Coweight> RootSystem::orbit(const Coweight& x) const {
  std::unordered_set<Coweight, CoweightHash> seen;
  std::vector<Coweight> out;
  std::deque<Coweight> queue;
  seen.insert(x);
  queue.push_back(x);
  out.push_back(x);
  while (!queue.empty()) {
    Coweight cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n_; ++i) {
      Coweight img = cur;
      reflect_simple(img, i);
      if (seen.insert(img).second) {
        queue.push_back(img);
        out.push_back(std::move(img));
      }
    }
  }
  std::sort(out.begin(), out.end(), GradedLess{});
  return out;
}

TPoly RootSystem::stabilizer_poincare(const Coweight& x) const {
  std::vector<ZZ> counts(positive_.size() + 1, ZZ(0));
  for (const auto& w : weyl_)
    if (apply(w, x) == x) counts[w.length] += 1;
  return TPoly(std::move(counts));
}

QQ RootSystem::coroot_pairing_eucl(const Coweight& x, const Coweight& y) const {
  // <alpha_i-check, alpha_j-check> = C(i,j)/d(i)
  QQ acc(0);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (y[j] == 0 || cartan_[i][j] == 0) continue;
      acc += QQ(x[i]) * QQ(y[j]) * QQ(cartan_[i][j]) / sym_d_[i];
    }
  }
  return acc;
}

ZZ RootSystem::weyl_dimension(const Coweight& x) const {
  require_dominant(x, "weyl_dimension");
  // Each factor <x+rho-check, beta-check> / <rho-check, beta-check> is a
  // ratio of values of the same bilinear form, so the symmetrizer
  // normalization cancels factor by factor. Doubling both sides keeps the
  // arithmetic over integer vectors.
  const Coweight num_vec = cw_add(cw_scale(2, x), two_rho_check_);
  QQ prod(1);
  for (const auto& d : positive_)
    prod *= coroot_pairing_eucl(num_vec, d.coroot) /
            coroot_pairing_eucl(two_rho_check_, d.coroot);
  prod.canonicalize();
  if (prod.get_den() != 1)
    throw InvariantViolation("weyl_dimension: non-integral product");
  return prod.get_num();
}

}  // namespace hallwalk
