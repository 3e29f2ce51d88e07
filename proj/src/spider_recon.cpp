#include "treerec/spider_recon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treerec {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) fail("q must lie in [0, 1)");
}

// P[Bin(n, p) = k]. Exact integer binomials below 50, log-space above.
double binom_pmf(std::int64_t n, std::int64_t k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  if (n < 50) {
    double c = 1.0;
    for (std::int64_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
  }
  double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

std::vector<double> to_coeffs(const Labels& labels) {
  std::vector<double> a(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) a[i] = static_cast<double>(labels[i]);
  return a;
}

double sq_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double diff = x[i] - y[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

std::vector<double> expected_mean_coeffs(const std::vector<double>& a, std::int64_t d, double q) {
  check_q(q);
  if (d < 1) fail("expected_mean_coeffs: d must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t max_s = n == 0 ? 0 : (n - 1) / d;
  const double qd = std::pow(q, static_cast<double>(d));

  // pmf tables: within-path survival counts and whole-path survival counts.
  std::vector<std::vector<double>> p_node(d), p_path(max_s + 1);
  for (std::int64_t hi = 0; hi < d; ++hi) {
    p_node[hi].resize(hi + 1);
    for (std::int64_t lo = 0; lo <= hi; ++lo) p_node[hi][lo] = binom_pmf(hi, lo, 1.0 - q);
  }
  for (std::int64_t hi = 0; hi <= max_s; ++hi) {
    p_path[hi].resize(hi + 1);
    for (std::int64_t lo = 0; lo <= hi; ++lo) p_path[hi][lo] = binom_pmf(hi, lo, 1.0 - qd);
  }

  std::vector<double> out(n, 0.0);
  for (std::int64_t l = 0; l < n; ++l) {
    const std::int64_t rl = l % d, sl = l / d;
    double acc = 0.0;
    for (std::int64_t j = l; j < n; ++j) {
      const std::int64_t rj = j % d, sj = j / d;
      if (rj < rl || sj < sl || a[j] == 0.0) continue;
      acc += a[j] * p_node[rj][rl] * p_path[sj][sl];
    }
    out[l] = (1.0 - q) * acc;
  }
  return out;
}

std::vector<double> expected_trace_mean(const Labels& labels, const SpiderShape& s, double q) {
  validate(s);
  if (static_cast<std::int64_t>(labels.size()) != s.n) fail("expected_trace_mean: wrong label count");
  return expected_mean_coeffs(to_coeffs(labels), s.d, q);
}

GeneratingValues eval_generating_coeffs(const std::vector<double>& a, std::int64_t d, double q,
                                        std::complex<double> w) {
  check_q(q);
  if (d < 1) fail("eval_generating_coeffs: d must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const double qd = std::pow(q, static_cast<double>(d));
  const std::complex<double> u = q + (1.0 - q) * w;
  const std::complex<double> big = qd + (1.0 - qd) * std::pow(w, static_cast<double>(d));

  GeneratingValues out;
  std::int64_t ell_star = -1;
  for (std::int64_t l = 0; l < n; ++l) {
    if (a[l] != 0.0) {
      ell_star = l;
      break;
    }
  }
  out.ell_star = ell_star;

  std::complex<double> acc_a = 0.0;
  std::complex<double> u_pow = 1.0;  // u^{r_l}, rebuilt at each path boundary
  std::complex<double> big_pow = 1.0;  // U^{s_l}
  for (std::int64_t l = 0; l < n; ++l) {
    if (l > 0) {
      if (l % d == 0) {
        u_pow = 1.0;
        big_pow *= big;
      } else {
        u_pow *= u;
      }
    }
    if (a[l] != 0.0) acc_a += a[l] * u_pow * big_pow;
  }
  out.a = (1.0 - q) * acc_a;

  if (ell_star >= 0) {
    // Factored form: the path-survival factor carries exponent s_l - s_{l*}.
    std::complex<double> acc_t = 0.0;
    u_pow = std::pow(u, static_cast<double>(ell_star % d));
    big_pow = 1.0;
    for (std::int64_t l = ell_star; l < n; ++l) {
      if (l > ell_star) {
        if (l % d == 0) {
          u_pow = 1.0;
          big_pow *= big;
        } else {
          u_pow *= u;
        }
      }
      if (a[l] != 0.0) acc_t += a[l] * u_pow * big_pow;
    }
    out.a_tilde = (1.0 - q) * acc_t;
  }
  return out;
}

GeneratingValues eval_generating(const Labels& labels, const SpiderShape& s, double q,
                                 std::complex<double> w) {
  validate(s);
  if (static_cast<std::int64_t>(labels.size()) != s.n) fail("eval_generating: wrong label count");
  return eval_generating_coeffs(to_coeffs(labels), s.d, q, w);
}

std::int64_t choose_L(std::int64_t n, std::int64_t d, double q, double C) {
  check_q(q);
  if (n < 1 || d < 1) fail("choose_L: n and d must be >= 1");
  if (!(C > 0.0)) fail("choose_L: C must be positive");
  const double qd = std::pow(q, static_cast<double>(d));
  const double raw = std::cbrt(4.0 * M_PI * M_PI * static_cast<double>(n) * qd / C);
  const std::int64_t lifted = static_cast<std::int64_t>(std::ceil(raw));
  return std::max<std::int64_t>(lifted, 20);
}

std::int64_t distinguishing_index(const std::vector<double>& e1, const std::vector<double>& e2) {
  if (e1.size() != e2.size()) fail("distinguishing_index: size mismatch");
  std::int64_t best = -1;
  double best_gap = -1.0;
  for (std::size_t j = 0; j < e1.size(); ++j) {
    double gap = std::abs(e1[j] - e2[j]);
    if (gap > best_gap) {
      best_gap = gap;
      best = static_cast<std::int64_t>(j);
    }
  }
  if (best < 0 || best_gap == 0.0)
    fail("distinguishing_index: expected means are identical");
  return best;
}

bool better_match(const std::vector<double>& empirical, const std::vector<double>& e_a,
                  const std::vector<double>& e_b) {
  std::int64_t j = distinguishing_index(e_a, e_b);
  return std::abs(empirical[j] - e_a[j]) <= std::abs(empirical[j] - e_b[j]);
}

std::vector<Labels> enumerate_labelings(std::int64_t n) {
  if (n < 0 || n > 24) fail("enumerate_labelings: n out of range");
  std::vector<Labels> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    Labels lab(n);
    for (std::int64_t j = 0; j < n; ++j) lab[j] = static_cast<std::uint8_t>((v >> (n - 1 - j)) & 1);
    out.push_back(std::move(lab));
  }
  return out;
}

BestMatchResult best_match(const std::vector<double>& empirical_mean,
                           const std::vector<Labels>& candidates, const SpiderShape& s, double q,
                           Rng& rng) {
  validate(s);
  check_q(q);
  if (candidates.empty()) fail("best_match: no candidates");
  if (static_cast<std::int64_t>(empirical_mean.size()) != s.n)
    fail("best_match: empirical mean has wrong length");

  const std::size_t count = candidates.size();
  std::vector<std::vector<double>> expected(count);
  for (std::size_t c = 0; c < count; ++c) {
    if (static_cast<std::int64_t>(candidates[c].size()) != s.n)
      fail("best_match: candidate has wrong length");
    expected[c] = expected_trace_mean(candidates[c], s, q);
  }

  // Scan order: lexicographic by labels, so the first qualifier found is the
  // lexicographically smallest one.
  std::vector<std::size_t> scan(count);
  std::iota(scan.begin(), scan.end(), 0);
  std::sort(scan.begin(), scan.end(),
            [&](std::size_t x, std::size_t y) { return candidates[x] < candidates[y]; });

  // Opponent order: closest expected means first. Non-qualifiers tend to
  // lose immediately against the best-fitting candidate, keeping the scan
  // near-linear; the order cannot change the outcome, only the exit point.
  std::vector<std::size_t> opponents(count);
  std::iota(opponents.begin(), opponents.end(), 0);
  std::vector<double> dist(count);
  for (std::size_t c = 0; c < count; ++c) dist[c] = sq_distance(expected[c], empirical_mean);
  std::sort(opponents.begin(), opponents.end(),
            [&](std::size_t x, std::size_t y) { return dist[x] < dist[y]; });

  for (std::size_t c : scan) {
    bool dominates = true;
    for (std::size_t o : opponents) {
      if (o == c) continue;
      if (!better_match(empirical_mean, expected[c], expected[o])) {
        dominates = false;
        break;
      }
    }
    if (dominates) {
      BestMatchResult r;
      r.labels = candidates[c];
      r.winner = static_cast<std::int64_t>(c);
      return r;
    }
  }

  BestMatchResult r;
  r.winner = static_cast<std::int64_t>(rng.uniform_below(count));
  r.labels = candidates[r.winner];
  r.random_fallback = true;
  return r;
}

namespace {

std::vector<double> normalized_mean(const std::vector<LabeledOrderedTree>& traces,
                                    const SpiderShape& s) {
  if (traces.empty()) fail("spider reconstruction: needs at least one trace");
  std::vector<double> mean(s.n, 0.0);
  for (const LabeledOrderedTree& y : traces) {
    LabeledOrderedTree full = normalize_spider_trace(y, s);
    for (std::int64_t i = 0; i < s.n; ++i) mean[i] += full.nodes[i + 1].label;
  }
  for (double& v : mean) v /= static_cast<double>(traces.size());
  return mean;
}

// Label strings of a spider trace's paths, left to right.
std::vector<StringTrace> path_strings(const LabeledOrderedTree& y) {
  std::vector<StringTrace> out;
  for (std::int32_t head : y.nodes[0].children) {
    StringTrace s;
    std::int32_t cur = head;
    for (;;) {
      s.push_back(y.nodes[cur].label);
      const auto& kids = y.nodes[cur].children;
      if (kids.empty()) break;
      if (kids.size() > 1) fail("spider reconstruction: input is not a spider trace");
      cur = kids.front();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SpiderMeanResult reconstruct_spider_meanbased(const std::vector<LabeledOrderedTree>& traces,
                                              const SpiderShape& s, double q, Rng& rng) {
  validate(s);
  check_q(q);
  if (s.n > 16) fail("reconstruct_spider_meanbased: exhaustive search capped at n <= 16");
  std::vector<double> mean = normalized_mean(traces, s);
  std::vector<Labels> candidates = enumerate_labelings(s.n);
  BestMatchResult m = best_match(mean, candidates, s, q, rng);
  return SpiderMeanResult{std::move(m.labels), m.random_fallback};
}

LargeDepthResult reconstruct_spider_large_depth(const std::vector<LabeledOrderedTree>& traces,
                                                const SpiderShape& s, double q,
                                                const StringReconstructor& inner) {
  validate(s);
  check_q(q);
  if (traces.empty()) fail("reconstruct_spider_large_depth: needs at least one trace");
  const std::int64_t paths = s.n / s.d;

  LargeDepthResult out;
  std::vector<std::vector<StringTrace>> per_path(paths);
  for (const LabeledOrderedTree& y : traces) {
    std::vector<StringTrace> ps = path_strings(y);
    if (static_cast<std::int64_t>(ps.size()) != paths) continue;  // some path fully deleted
    for (std::int64_t p = 0; p < paths; ++p) per_path[p].push_back(std::move(ps[p]));
    ++out.kept;
  }
  out.keep_rate = static_cast<double>(out.kept) / static_cast<double>(traces.size());
  if (out.kept == 0) return out;

  out.labels.assign(s.n, 0);
  for (std::int64_t p = 0; p < paths; ++p) {
    Labels bits = inner(per_path[p], s.d, q);
    for (std::int64_t j = 0; j < s.d; ++j) out.labels[p * s.d + j] = bits[j];
  }
  out.ok = true;
  return out;
}

RowsResult reconstruct_spider_rows(const std::vector<LabeledOrderedTree>& traces,
                                   const SpiderShape& s, double q,
                                   const StringReconstructor& inner) {
  validate(s);
  check_q(q);
  if (traces.empty()) fail("reconstruct_spider_rows: needs at least one trace");
  const std::int64_t paths = s.n / s.d;
  const double row_q = 1.0 - std::pow(1.0 - q, static_cast<double>(s.d));

  std::vector<std::vector<StringTrace>> rows(s.d);
  for (std::int64_t j = 0; j < s.d; ++j) rows[j].reserve(traces.size());
  for (const LabeledOrderedTree& y : traces) {
    std::vector<StringTrace> ps = path_strings(y);
    std::vector<StringTrace> row_bits(s.d);
    for (const StringTrace& path : ps) {
      if (static_cast<std::int64_t>(path.size()) != s.d) continue;  // path lost a node
      for (std::int64_t j = 0; j < s.d; ++j) row_bits[j].push_back(path[j]);
    }
    for (std::int64_t j = 0; j < s.d; ++j) rows[j].push_back(std::move(row_bits[j]));
  }

  RowsResult out;
  out.row_q = row_q;
  out.labels.assign(s.n, 0);
  for (std::int64_t j = 0; j < s.d; ++j) {
    Labels row = inner(rows[j], paths, row_q);
    for (std::int64_t p = 0; p < paths; ++p) out.labels[p * s.d + j] = row[p];
  }
  return out;
}

}  // namespace treerec
