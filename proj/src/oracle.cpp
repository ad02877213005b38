#include "kantgap/oracle.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace kantgap::oracle {

namespace {

constexpr int kMaxNodes = 2 * BrutePrimal::kMaxSide + 2;
using Int = __int128;

long long lcmOfDenominators(const std::vector<Rational>& values) {
  long long l = 1;
  for (const auto& v : values) {
    const auto d = denominator(v);
    if (d > 1'000'000) throw Error(ErrorCode::InstanceTooLarge, "denominators too large for the oracle");
    l = std::lcm(l, d.convert_to<long long>());
    if (l > (1LL << 40)) throw Error(ErrorCode::InstanceTooLarge, "common denominator too large for the oracle");
  }
  return l;
}

long long scaled(const Rational& v, long long scale) {
  const Rational s = v * scale;
  if (denominator(s) != 1) throw std::logic_error("scaling did not clear denominators");
  return numerator(s).convert_to<long long>();
}

struct Edge {
  int a;  // supply side node
  int b;  // demand side node
  long long cost;
};

struct UnionFind {
  std::array<int, kMaxNodes> parent{};
  explicit UnionFind(int n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[x] = y;
    return true;
  }
};

/// Enumerates maximal spanning forests by include/exclude recursion. An edge
/// is excluded only if the remaining edges still reach the full rank, so
/// every branch ends in at least one forest.
class ForestEnumerator {
 public:
  ForestEnumerator(int nodes, std::vector<Edge> edges, int rank)
      : nodes_(nodes), edges_(std::move(edges)), rank_(rank) {}

  template <class Visit>
  void run(Visit&& visit) {
    chosen_.clear();
    recurse(0, UnionFind(nodes_), visit);
  }

 private:
  template <class Visit>
  void recurse(std::size_t e, const UnionFind& uf, Visit& visit) {
    if (static_cast<int>(chosen_.size()) == rank_) {
      visit(chosen_);
      return;
    }
    if (e == edges_.size()) return;
    UnionFind with = uf;
    if (with.unite(edges_[e].a, edges_[e].b)) {
      chosen_.push_back(static_cast<int>(e));
      recurse(e + 1, with, visit);
      chosen_.pop_back();
    }
    UnionFind without = uf;
    int merges = static_cast<int>(chosen_.size());
    for (std::size_t f = e + 1; f < edges_.size(); ++f)
      if (without.unite(edges_[f].a, edges_[f].b)) ++merges;
    if (merges >= rank_) recurse(e + 1, uf, visit);
  }

  int nodes_;
  std::vector<Edge> edges_;
  int rank_;
  std::vector<int> chosen_;
};

}  // namespace

// Scaled units: with L = massScale and K = costScale, every supply is an
// integer multiple of 1/L and every cost a multiple of 1/K. A shipped mass m
// is written t = m * L. On a basis, each edge flow is (alpha + beta * t) / L
// with integers alpha and beta in {-1, 0, 1}, so feasibility is an integer
// interval lo <= t <= hi and the cost is (base + slope * t) / (L * K).
BrutePrimal::BrutePrimal(const CostMatrix<Rational>& c, const Marginal<Rational>& mu, const Marginal<Rational>& nu) {
  const int nx = mu.size(), ny = nu.size();
  if (c.rows() != nx || c.cols() != ny) throw Error(ErrorCode::DimensionMismatch, "cost shape mismatch");
  if (nx > kMaxSide || ny > kMaxSide) throw Error(ErrorCode::InstanceTooLarge, "oracle is limited to 4 × 4");

  std::vector<Rational> masses, costs;
  for (int i = 0; i < nx; ++i) masses.push_back(mu(i));
  for (int j = 0; j < ny; ++j) masses.push_back(nu(j));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (c.isFinite(i, j)) costs.push_back(c.value(i, j));
  massScale_ = lcmOfDenominators(masses);
  costScale_ = lcmOfDenominators(costs);

  // Nodes: rows 0..nx-1, dummy row nx, columns nx+1..nx+ny, dummy column nx+ny+1.
  const int nodes = nx + ny + 2;
  const int dummyRow = nx, dummyCol = nx + ny + 1;
  auto colNode = [nx](int j) { return nx + 1 + j; };

  std::vector<Edge> edges;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j)
      if (c.isFinite(i, j)) edges.push_back({i, colNode(j), scaled(c.value(i, j), costScale_)});
    edges.push_back({i, dummyCol, 0});
  }
  for (int j = 0; j < ny; ++j) edges.push_back({dummyRow, colNode(j), 0});

  // Supplies (alpha, beta): positive on rows, negative on columns.
  std::array<long long, kMaxNodes> alpha{}, beta{};
  long long massMu = 0, massNu = 0;
  for (int i = 0; i < nx; ++i) {
    alpha[i] = scaled(mu(i), massScale_);
    massMu += alpha[i];
  }
  for (int j = 0; j < ny; ++j) {
    alpha[colNode(j)] = -scaled(nu(j), massScale_);
    massNu -= alpha[colNode(j)];
  }
  alpha[dummyRow] = massNu;
  beta[dummyRow] = -1;
  alpha[dummyCol] = -massMu;
  beta[dummyCol] = 1;

  UnionFind full(nodes);
  int rank = 0;
  for (const auto& e : edges)
    if (full.unite(e.a, e.b)) ++rank;

  const long long tMax = std::min(massMu, massNu);
  ForestEnumerator forests(nodes, edges, rank);
  forests.run([&](const std::vector<int>& chosen) {
    ++bases_;
    std::array<std::array<int, kMaxNodes>, kMaxNodes> adj{};
    std::array<int, kMaxNodes> degree{};
    for (int idx : chosen) {
      const Edge& e = edges[idx];
      adj[e.a][degree[e.a]++] = idx;
      adj[e.b][degree[e.b]++] = idx;
    }
    // BFS order per component, then peel leaves in reverse order.
    std::array<int, kMaxNodes> order{}, parentEdge{};
    std::array<bool, kMaxNodes> seen{};
    std::array<bool, kMaxNodes> isRoot{};
    int count = 0;
    for (int root = 0; root < nodes; ++root) {
      if (seen[root]) continue;
      seen[root] = true;
      isRoot[root] = true;
      parentEdge[root] = -1;
      int head = count;
      order[count++] = root;
      while (head < count) {
        const int u = order[head++];
        for (int k = 0; k < degree[u]; ++k) {
          const Edge& e = edges[adj[u][k]];
          const int v = e.a == u ? e.b : e.a;
          if (seen[v]) continue;
          seen[v] = true;
          parentEdge[v] = adj[u][k];
          order[count++] = v;
        }
      }
    }
    std::array<long long, kMaxNodes> resA = alpha, resB = beta;
    long long lo = 0, hi = tMax;
    Int base = 0, slope = 0;
    for (int k = nodes - 1; k >= 0; --k) {
      const int v = order[k];
      if (isRoot[v]) {
        // A component must balance: resA + resB * t = 0.
        if (resB[v] == 0) {
          if (resA[v] != 0) return;
        } else {
          const long long t = -resA[v] * resB[v];
          lo = std::max(lo, t);
          hi = std::min(hi, t);
        }
        continue;
      }
      const Edge& e = edges[parentEdge[v]];
      const int parent = e.a == v ? e.b : e.a;
      // Flow on e from supply side to demand side.
      const long long fa = (v == e.a) ? resA[v] : -resA[v];
      const long long fb = (v == e.a) ? resB[v] : -resB[v];
      if (fb == 0) {
        if (fa < 0) return;
      } else if (fb > 0) {
        lo = std::max(lo, -fa);
      } else {
        hi = std::min(hi, fa);
      }
      base += static_cast<Int>(e.cost) * fa;
      slope += static_cast<Int>(e.cost) * fb;
      resA[parent] += resA[v];
      resB[parent] += resB[v];
    }
    if (lo > hi) return;
    pieces_.push_back({lo, hi, static_cast<long long>(base), static_cast<long long>(slope)});
  });
  std::sort(pieces_.begin(), pieces_.end());
  pieces_.erase(std::unique(pieces_.begin(), pieces_.end()), pieces_.end());
}

ExtendedCost<Rational> BrutePrimal::at(const Rational& m) const {
  if (m < 0) throw Error(ErrorCode::NegativeMass, "mass must be >= 0");
  const Rational t = m * massScale_;
  std::optional<Rational> best;
  for (const auto& piece : pieces_) {
    if (t < piece.lo || t > piece.hi) continue;
    const Rational value = (Rational(piece.base) + Rational(piece.slope) * t) / (massScale_ * costScale_);
    if (!best || value < *best) best = value;
  }
  if (!best) return ExtendedCost<Rational>::infinity();
  return *best;
}

ExtendedCost<Rational> brute_primal(const CostMatrix<Rational>& c, const Marginal<Rational>& mu,
                                    const Marginal<Rational>& nu, const Rational& m) {
  return BrutePrimal(c, mu, nu).at(m);
}

Rational brute_cover(const CellSet& L, const Marginal<Rational>& mu, const Marginal<Rational>& nu) {
  const int nx = mu.size(), ny = nu.size();
  if (L.rows() != nx || L.cols() != ny) throw Error(ErrorCode::DimensionMismatch, "cell set shape mismatch");
  if (nx + ny > 20) throw Error(ErrorCode::InstanceTooLarge, "cover oracle needs nx + ny <= 20");
  const auto cells = L.cells();
  std::optional<Rational> best;
  for (unsigned a = 0; a < (1u << nx); ++a)
    for (unsigned b = 0; b < (1u << ny); ++b) {
      bool covers = true;
      for (const auto& [i, j] : cells)
        if (!(a >> i & 1u) && !(b >> j & 1u)) {
          covers = false;
          break;
        }
      if (!covers) continue;
      Rational value(0);
      for (int i = 0; i < nx; ++i)
        if (a >> i & 1u) value += mu(i);
      for (int j = 0; j < ny; ++j)
        if (b >> j & 1u) value += nu(j);
      if (!best || value < *best) best = value;
    }
  return *best;
}

Rational brute_capacity(const CellSet& L, const Marginal<Rational>& lambda) {
  const int n = lambda.size();
  if (L.rows() != n || L.cols() != n) throw Error(ErrorCode::NotSquare, "capacity is defined on X × X only");
  if (n > 12) throw Error(ErrorCode::InstanceTooLarge, "capacity oracle needs n <= 12");
  const auto cells = L.cells();
  std::vector<int> level(n, 0);  // f = level / 2
  std::optional<Rational> best;
  while (true) {
    bool ok = true;
    for (const auto& [x, y] : cells)
      if (level[x] + level[y] < 2) {
        ok = false;
        break;
      }
    if (ok) {
      Rational value(0);
      for (int x = 0; x < n; ++x) value += lambda(x) * Rational(level[x], 2);
      if (!best || value < *best) best = value;
    }
    int k = 0;
    while (k < n && level[k] == 2) level[k++] = 0;
    if (k == n) break;
    ++level[k];
  }
  return *best;
}

}  // namespace kantgap::oracle
