#include <commonlines/cluster.hpp>
#include <commonlines/random.hpp>
#include <commonlines/rotations.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_set>

namespace clines {

AdmmConfig ClusterConfig::sample_admm_defaults() {
  AdmmConfig c;
  c.irls_max = 2;
  c.admm_max = 10;
  c.alt_max = 2;
  return c;
}

SinkhornConfig ClusterConfig::sample_sinkhorn_defaults() {
  SinkhornConfig c;
  c.max_iter = 20;
  c.stagnation_rel = 1e-10;
  c.stagnation_window = 3;
  return c;
}

std::string to_string(RejectCause c) {
  switch (c) {
  case RejectCause::none: return "accepted";
  case RejectCause::diverged: return "diverged";
  case RejectCause::not_converged: return "not_converged";
  case RejectCause::rank_gap_too_large: return "rank_gap_too_large";
  case RejectCause::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

long long choose(int n, int k) {
  if (k < 0 || k > n)
    return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

// Community bookkeeping for weighted LFM.
struct Community {
  std::vector<char> in;
  std::vector<double> link;  // Σ_{u∈G} w_vu for every v
  double k_in = 0.0;         // Σ over ordered internal pairs
  double k_tot = 0.0;        // Σ of member degrees
  int size = 0;
};

double fitness(double k_in, double k_tot, double alpha) {
  return k_tot > 0.0 ? k_in / std::pow(k_tot, alpha) : 0.0;
}

void add_node(Community &c, const Mat &g, const Vec &deg, int v) {
  c.in[v] = 1;
  ++c.size;
  c.k_in += 2.0 * c.link[v];
  c.k_tot += deg(v);
  for (Eigen::Index u = 0; u < g.rows(); ++u)
    c.link[u] += g(u, v);
}

void remove_node(Community &c, const Mat &g, const Vec &deg, int v) {
  c.in[v] = 0;
  --c.size;
  c.k_in -= 2.0 * c.link[v];
  c.k_tot -= deg(v);
  for (Eigen::Index u = 0; u < g.rows(); ++u)
    c.link[u] -= g(u, v);
}

double gain_add(const Community &c, const Vec &deg, int v, double alpha) {
  return fitness(c.k_in + 2.0 * c.link[v], c.k_tot + deg(v), alpha) -
         fitness(c.k_in, c.k_tot, alpha);
}

double member_fitness(const Community &c, const Vec &deg, int v, double alpha) {
  return fitness(c.k_in, c.k_tot, alpha) -
         fitness(c.k_in - 2.0 * c.link[v], c.k_tot - deg(v), alpha);
}

Community natural_community(const Mat &g, const Vec &deg, int seed, double alpha) {
  const int n = static_cast<int>(g.rows());
  Community c{std::vector<char>(n, 0), std::vector<double>(n, 0.0)};
  add_node(c, g, deg, seed);
  const long long max_steps = 10LL * n * n + 100;
  for (long long step = 0; step < max_steps; ++step) {
    int best = -1;
    double best_gain = 0.0;
    for (int v = 0; v < n; ++v)
      if (!c.in[v] && c.link[v] > 0.0) {
        double gn = gain_add(c, deg, v, alpha);
        if (gn > best_gain) {
          best_gain = gn;
          best = v;
        }
      }
    if (best < 0)
      break;
    add_node(c, g, deg, best);
    // Prune members whose removal raises the fitness, worst first.
    while (c.size > 1) {
      int worst = -1;
      double worst_fit = 0.0;
      for (int v = 0; v < n; ++v)
        if (c.in[v]) {
          double f = member_fitness(c, deg, v, alpha);
          if (f < worst_fit) {
            worst_fit = f;
            worst = v;
          }
        }
      if (worst < 0)
        break;
      remove_node(c, g, deg, worst);
    }
  }
  return c;
}

} // namespace

long long default_n_samples(int n) {
  long long by_pairs = (25LL * choose(n, 2) + 5) / 6;
  return std::min(std::max(500LL, by_pairs), choose(n, 4));
}

SampleOutcome sample_error(const CommonLinesMatrix &a, const Sample &s, const ClusterConfig &cfg) {
  for (int p = 0; p < 4; ++p) {
    if (s[p] < 0 || s[p] >= a.n())
      throw InvalidArgument("sample index out of range");
    for (int q = p + 1; q < 4; ++q)
      if (s[p] == s[q])
        throw InvalidArgument("sample indices must be distinct");
  }
  SampleOutcome out;
  out.record.S = s;
  CommonLinesMatrix sub;
  try {
    sub = normalize_blocks(submatrix(a, {s[0], s[1], s[2], s[3]}));
  } catch (const DegenerateBlock &) {
    out.cause = RejectCause::degenerate;
    return out;
  }
  AdmmResult ar = irls_admm(sub, cfg.admm);
  if (ar.diag.status == SolverStatus::diverged) {
    out.cause = RejectCause::diverged;
    return out;
  }
  if (ar.diag.status == SolverStatus::not_converged) {
    out.cause = RejectCause::not_converged;
    return out;
  }
  SinkhornResult sr;
  try {
    sr = sinkhorn(ar.A, cfg.sinkhorn);
  } catch (const Error &) {
    out.cause = RejectCause::diverged;
    return out;
  }
  if (sr.status == SolverStatus::diverged) {
    out.cause = RejectCause::diverged;
    return out;
  }
  if (rank_gap(sr.A.flat()) > cfg.rank_gap_max) {
    out.cause = RejectCause::rank_gap_too_large;
    return out;
  }
  // Score the data, not the fit: the robust fit can make an inconsistent
  // sample look consistent. Each observed direction gets the norm and sign
  // of the nearest pure block, so only the directions are judged.
  CommonLinesMatrix pure;
  try {
    // Either chirality gives the same block norms, and signs are taken from the data.
    pure = pure_common_lines(recover_candidate(sr.A).rotations);
  } catch (const Error &) {
    out.cause = RejectCause::degenerate;
    return out;
  }
  Mat m = Mat::Zero(8, 4);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      if (i != j) {
        const Vec2 x = sub.block(i, j);
        const Vec2 y = pure.block(i, j);
        const double b = y.norm();
        m.block<2, 1>(2 * i, j) = (x.dot(y) >= 0.0 ? b : -b) * x;
        lo = std::min(lo, b);
        hi = std::max(hi, b);
      }
  // Nearly parallel viewing directions shrink blocks towards zero, which
  // makes almost anything look consistent.
  if (lo < cfg.min_block_ratio * hi) {
    out.cause = RejectCause::degenerate;
    return out;
  }
  // The error is homogeneous of degree 4; fix the scale before scoring.
  m *= std::sqrt(4.0 * 3.0 / m.squaredNorm());
  out.record.e = std::max(cfg.error_floor, quadratic_error(CommonLinesMatrix(m)));
  return out;
}

Mat build_affinity(const std::vector<SampleRecord> &records, int n, double error_floor) {
  Mat g = Mat::Zero(n, n);
  for (const auto &r : records) {
    const double w = -std::log(std::max(r.e, error_floor));
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        if (r.S[p] != r.S[q])
          g(r.S[p], r.S[q]) = std::max(g(r.S[p], r.S[q]), w);
  }
  return g;
}

LfmResult lfm_communities(const Mat &g, double alpha, std::uint64_t seed) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n)
    throw InvalidArgument("affinity must be square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 0.0 || g.minCoeff() < 0.0 ||
      g.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("affinity must be symmetric, nonnegative, zero diagonal");
  const Vec deg = g.rowwise().sum();

  Rng rng(seed);
  std::vector<char> covered(n, 0);
  int n_covered = 0;
  std::vector<Community> comms;
  while (n_covered < n) {
    std::vector<int> open;
    for (int v = 0; v < n; ++v)
      if (!covered[v])
        open.push_back(v);
    const int start = open[static_cast<size_t>(uniform01(rng) * open.size())];
    Community c = natural_community(g, deg, start, alpha);
    if (!c.in[start]) {
      // The seed pruned itself out; it stands alone.
      c = Community{std::vector<char>(n, 0), std::vector<double>(n, 0.0)};
      add_node(c, g, deg, start);
    }
    for (int v = 0; v < n; ++v)
      if (c.in[v] && !covered[v]) {
        covered[v] = 1;
        ++n_covered;
      }
    comms.push_back(std::move(c));
  }

  LfmResult res;
  std::vector<int> label(n, -1);
  for (int v = 0; v < n; ++v) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < comms.size(); ++k)
      if (comms[k].in[v]) {
        double f = member_fitness(comms[k], deg, v, alpha);
        if (f > best) {
          best = f;
          label[v] = static_cast<int>(k);
        }
      }
  }
  for (const auto &c : comms) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (c.in[v])
        members.push_back(v);
    res.communities.push_back(std::move(members));
  }
  res.partition = Partition::canonical(label);
  return res;
}

std::vector<Sample> draw_samples(int n, long long count, std::uint64_t seed) {
  if (n < 4)
    throw InvalidArgument("need at least 4 images to sample");
  std::vector<Sample> out;
  const long long total = choose(n, 4);
  if (count >= total) {
    out.reserve(total);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c)
          for (int d = c + 1; d < n; ++d)
            out.push_back({a, b, c, d});
    return out;
  }
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  out.reserve(count);
  while (static_cast<long long>(out.size()) < count) {
    Sample s{};
    int filled = 0;
    while (filled < 4) {
      int v = static_cast<int>(uniform01(rng) * n);
      if (std::find(s.begin(), s.begin() + filled, v) == s.begin() + filled)
        s[filled++] = v;
    }
    std::sort(s.begin(), s.end());
    std::uint64_t key = 0;
    for (int v : s)
      key = key * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
    if (seen.insert(key).second)
      out.push_back(s);
  }
  return out;
}

ClusterResult clusters(const CommonLinesMatrix &a, const ClusterConfig &cfg) {
  const int n = a.n();
  if (n < 8)
    throw InvalidArgument("clusters needs n >= 8");
  if (cfg.n_samples < 0 || !(cfg.rank_gap_max > 0.0) || !(cfg.error_floor > 0.0))
    throw InvalidArgument("invalid cluster configuration");
  const long long requested = cfg.n_samples > 0
                                  ? std::min<long long>(cfg.n_samples, choose(n, 4))
                                  : default_n_samples(n);
  const std::vector<Sample> samples = draw_samples(n, requested, derive_seed(cfg.seed, 0));

  // Parallel map into fixed slots; the reduce below walks slots in order.
  std::vector<SampleOutcome> outcomes(samples.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < samples.size(); k = next++)
      outcomes[k] = sample_error(a, samples[k], cfg);
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }

  ClusterResult res;
  auto &d = res.diag;
  d.requested = static_cast<long long>(samples.size());
  d.error_histogram.assign(13, 0);
  std::vector<SampleRecord> records;
  for (const auto &o : outcomes) {
    switch (o.cause) {
    case RejectCause::none: {
      records.push_back(o.record);
      int bin = static_cast<int>(std::floor(std::log10(o.record.e))) + 12;
      ++d.error_histogram[std::clamp(bin, 0, 12)];
      break;
    }
    case RejectCause::diverged: ++d.rejected_diverged; break;
    case RejectCause::not_converged: ++d.rejected_not_converged; break;
    case RejectCause::rank_gap_too_large: ++d.rejected_rank_gap; break;
    case RejectCause::degenerate: ++d.rejected_degenerate; break;
    }
  }
  d.accepted = static_cast<long long>(records.size());
  d.acceptance_rate = d.requested ? static_cast<double>(d.accepted) / d.requested : 0.0;
  if (d.accepted * 10 < d.requested)
    throw InsufficientSamples("only " + std::to_string(d.accepted) + " of " +
                              std::to_string(d.requested) + " samples accepted");
  d.G = build_affinity(records, n, cfg.error_floor);
  LfmResult lfm = lfm_communities(d.G, cfg.lfm_alpha, derive_seed(cfg.seed, 1));
  d.communities = std::move(lfm.communities);
  res.partition = std::move(lfm.partition);
  return res;
}

} // namespace clines
