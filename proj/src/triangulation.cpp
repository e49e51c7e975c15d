#include <algorithm>
#include <functional>
#include <set>

#include "strata/combinat.hpp"

namespace strata::cb {

Diagonal normalize(int a, int c) { return a < c ? Diagonal{a, c} : Diagonal{c, a}; }

bool is_side(int n_plus_1, int a, int c) {
  int d = std::abs(a - c);
  return d == 1 || d == n_plus_1 - 1;
}

bool crosses(const Diagonal& d, const Diagonal& e) {
  auto [a, b] = normalize(d.first, d.second);
  auto [c, f] = normalize(e.first, e.second);
  if (a == c || a == f || b == c || b == f) return false;
  const bool c_in = a < c && c < b;
  const bool f_in = a < f && f < b;
  return c_in != f_in;
}

bool is_noncrossing(const std::vector<Diagonal>& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = i + 1; j < ds.size(); ++j)
      if (crosses(ds[i], ds[j])) return false;
  return true;
}

bool is_complete(int n_plus_1, const std::vector<Diagonal>& ds) {
  std::set<Diagonal> uniq;
  for (const auto& d : ds) uniq.insert(normalize(d.first, d.second));
  return is_noncrossing(ds) && static_cast<int>(uniq.size()) == n_plus_1 - 3;
}

std::vector<Diagonal> lexicographic_completion(int n_plus_1, std::vector<Diagonal> ds) {
  for (auto& d : ds) d = normalize(d.first, d.second);
  for (int a = 0; a < n_plus_1; ++a)
    for (int c = a + 2; c < n_plus_1; ++c) {
      if (is_side(n_plus_1, a, c)) continue;
      Diagonal cand{a, c};
      if (std::find(ds.begin(), ds.end(), cand) != ds.end()) continue;
      bool ok = true;
      for (const auto& d : ds)
        if (crosses(d, cand)) {
          ok = false;
          break;
        }
      if (ok) ds.push_back(cand);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<Triangulation> enumerate_triangulations(int n) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "enumerate_triangulations needs n >= 3");
  if (n > 12) fail(ErrorCode::BudgetExceeded, "enumeration limited to n <= 12");
  const int N = n + 1;
  // Triangulations of the sub-polygon i..j (base edge i-j), memoized by (i, j).
  std::vector<std::vector<std::vector<std::vector<Diagonal>>>> memo(N, std::vector<std::vector<std::vector<Diagonal>>>(N));
  std::vector<std::vector<char>> done(N, std::vector<char>(N, 0));
  std::function<const std::vector<std::vector<Diagonal>>&(int, int)> sub = [&](int i, int j)
      -> const std::vector<std::vector<Diagonal>>& {
    if (done[i][j]) return memo[i][j];
    auto& out = memo[i][j];
    if (j - i < 2) {
      out.push_back({});
    } else {
      for (int k = i + 1; k < j; ++k) {
        const auto& left = sub(i, k);
        const auto& right = sub(k, j);
        for (const auto& l : left)
          for (const auto& r : right) {
            std::vector<Diagonal> t = l;
            t.insert(t.end(), r.begin(), r.end());
            if (k - i > 1) t.push_back({i, k});
            if (j - k > 1) t.push_back({k, j});
            out.push_back(std::move(t));
          }
      }
    }
    done[i][j] = 1;
    return out;
  };
  std::vector<Triangulation> result;
  for (auto ds : sub(0, N - 1)) {
    std::sort(ds.begin(), ds.end());
    result.push_back({N, std::move(ds)});
  }
  std::sort(result.begin(), result.end());
  return result;
}

Triangulation flip(const Triangulation& t, Diagonal d) {
  d = normalize(d.first, d.second);
  if (std::find(t.diagonals.begin(), t.diagonals.end(), d) == t.diagonals.end())
    fail(ErrorCode::InvalidDiagonal, "diagonal not in triangulation");
  const int n = t.n_plus_1;
  std::set<Diagonal> edges(t.diagonals.begin(), t.diagonals.end());
  for (int i = 0; i < n; ++i) edges.insert(normalize(i, (i + 1) % n));
  auto has = [&](int a, int b) { return edges.count(normalize(a, b)) > 0; };
  const auto [a, c] = d;
  // apex on each side; unique in a triangulation
  int inner = -1, outer = -1;
  for (int b = 0; b < n; ++b) {
    if (b == a || b == c || !has(a, b) || !has(b, c)) continue;
    int& slot = (a < b && b < c) ? inner : outer;
    if (slot < 0) slot = b;
  }
  if (inner < 0 || outer < 0) fail(ErrorCode::InvalidDiagonal, "diagonal is not flippable");
  Triangulation out = t;
  std::replace(out.diagonals.begin(), out.diagonals.end(), d, normalize(inner, outer));
  std::sort(out.diagonals.begin(), out.diagonals.end());
  return out;
}

std::uint64_t catalan(int m) {
  if (m < 0) fail(ErrorCode::InvalidArgument, "catalan index must be >= 0");
  if (m > 30) fail(ErrorCode::Overflow, "catalan limited to m <= 30");
  std::uint64_t c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace strata::cb
