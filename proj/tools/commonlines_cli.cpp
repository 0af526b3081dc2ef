#include <commonlines/cluster.hpp>
#include <commonlines/core.hpp>
#include <commonlines/io.hpp>
#include <commonlines/metrics.hpp>
#include <commonlines/rotations.hpp>
#include <commonlines/scaler_admm.hpp>
#include <commonlines/scaler_sinkhorn.hpp>
#include <commonlines/synth.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace clines;

namespace {

enum Exit { ok = 0, usage = 2, runtime = 3, solver = 4 };

class UsageError : public Error {
public:
  using Error::Error;
};

enum class LogLevel { error, warn, info };
LogLevel g_log = LogLevel::warn;

void info(const std::string &msg) {
  if (g_log >= LogLevel::info)
    std::cerr << "info: " << msg << "\n";
}

struct Settings {
  AdmmConfig admm;
  SinkhornConfig sinkhorn;
  ClusterConfig cluster;
};

std::vector<double> parse_list(const std::string &s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    out.push_back(io::parse_double(tok));
  return out;
}

int as_int(const std::string &v) { return static_cast<int>(io::parse_int(v)); }

void apply_admm_key(AdmmConfig &c, const std::string &key, const std::string &v) {
  if (key == "delta") c.delta = io::parse_double(v);
  else if (key == "irls_max") c.irls_max = as_int(v);
  else if (key == "admm_max") c.admm_max = as_int(v);
  else if (key == "alt_max") c.alt_max = as_int(v);
  else if (key == "tol_rel") c.tol_rel = io::parse_double(v);
  else if (key == "primal_tol") c.primal_tol = io::parse_double(v);
  else if (key == "blowup") c.blowup = io::parse_double(v);
  else if (key == "vanish") c.vanish = io::parse_double(v);
  else if (key == "init") {
    if (v == "determinant") c.init = AdmmInit::determinant;
    else if (v == "ones") c.init = AdmmInit::ones;
    else throw io::SchemaError("admm init must be determinant or ones");
  } else
    throw io::SchemaError("unknown config key: admm." + key);
}

void apply_sinkhorn_key(SinkhornConfig &c, const std::string &key, const std::string &v) {
  if (key == "max_iter") c.max_iter = as_int(v);
  else if (key == "tol") c.tol = io::parse_double(v);
  else if (key == "blowup") c.blowup = io::parse_double(v);
  else if (key == "min_scale") c.min_scale = io::parse_double(v);
  else if (key == "stagnation_window") c.stagnation_window = as_int(v);
  else if (key == "stagnation_rel") c.stagnation_rel = io::parse_double(v);
  else if (key == "weights") {
    auto w = parse_list(v, ' ');
    if (w.size() != 4)
      throw io::SchemaError("sinkhorn.weights needs 4 numbers: row_norm row_det col_norm col_det");
    c.weights = {w[0], w[1], w[2], w[3]};
  } else
    throw io::SchemaError("unknown config key: sinkhorn." + key);
}

// Keys look like "admm.delta", "cluster.lfm_alpha" or "cluster.admm.irls_max".
Settings load_settings(const std::string &path) {
  Settings s;
  if (path.empty())
    return s;
  io::Document doc = io::read_document(path);
  io::expect_kind(doc, "config");
  for (const auto &[key, v] : doc.header) {
    if (key == "version" || key == "kind")
      continue;
    const auto dot = key.find('.');
    if (dot == std::string::npos)
      throw io::SchemaError("config keys must be qualified: " + key);
    const std::string group = key.substr(0, dot), rest = key.substr(dot + 1);
    if (group == "admm") {
      apply_admm_key(s.admm, rest, v);
    } else if (group == "sinkhorn") {
      apply_sinkhorn_key(s.sinkhorn, rest, v);
    } else if (group == "cluster") {
      if (rest.rfind("admm.", 0) == 0) apply_admm_key(s.cluster.admm, rest.substr(5), v);
      else if (rest.rfind("sinkhorn.", 0) == 0) apply_sinkhorn_key(s.cluster.sinkhorn, rest.substr(9), v);
      else if (rest == "n_samples") s.cluster.n_samples = as_int(v);
      else if (rest == "rank_gap_max") s.cluster.rank_gap_max = io::parse_double(v);
      else if (rest == "error_floor") s.cluster.error_floor = io::parse_double(v);
      else if (rest == "min_block_ratio") s.cluster.min_block_ratio = io::parse_double(v);
      else if (rest == "lfm_alpha") s.cluster.lfm_alpha = io::parse_double(v);
      else if (rest == "threads") s.cluster.threads = as_int(v);
      else throw io::SchemaError("unknown config key: " + key);
    } else {
      throw io::SchemaError("unknown config section: " + group);
    }
  }
  return s;
}

std::string out_path(const std::string &dir, const std::string &name) {
  return (fs::path(dir) / name).string();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw Error("cannot write " + path);
  f << text;
}

void add_report(io::Document &r, const std::string &prefix, const ConstraintReport &c) {
  r.set(prefix + ".sigma", io::join({c.sigma[0], c.sigma[1], c.sigma[2], c.sigma[3]}));
  r.set(prefix + ".rank_gap", io::format_double(c.rank_gap));
  r.set(prefix + ".norm_residual", io::format_double(c.norm_residual));
  r.set(prefix + ".det_residual", io::format_double(c.det_residual));
  r.set(prefix + ".quadratic_error", io::format_double(c.quadratic_error));
}

void add_trace(io::Document &r, const std::string &name, const std::vector<double> &v) {
  r.has_data = true;
  for (size_t k = 0; k < v.size(); ++k)
    r.rows.push_back(name + " " + std::to_string(k) + " " + io::format_double(v[k]));
}

io::Document new_report(const std::string &command) {
  io::Document r;
  r.set("kind", "report");
  r.set("command", command);
  return r;
}

bool solver_ok(SolverStatus s) {
  return s == SolverStatus::converged || s == SolverStatus::stagnated;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int n = 0;
  std::string scales;
  double angle_sigma = 0.0;
  double outlier_rate = 0.0;
  std::string hetero;
  std::string out = "synth";
};

int cmd_synth(const SynthArgs &a, std::uint64_t seed, const std::string &dir) {
  if (a.angle_sigma < 0.0 || !(a.outlier_rate >= 0.0 && a.outlier_rate <= 1.0))
    throw UsageError("--angle-sigma must be ≥ 0 and --outlier-rate in [0,1]");
  CommonLinesMatrix m;
  std::string kind = "pure";
  RotationSet truth_rot;
  bool have_partition = false;
  Partition truth_part;
  if (!a.hetero.empty()) {
    std::vector<int> sizes;
    for (double v : parse_list(a.hetero, ','))
      sizes.push_back(static_cast<int>(v));
    int total = 0;
    for (int s : sizes) {
      if (s < 3)
        throw UsageError("--hetero cluster sizes must be ≥ 3");
      total += s;
    }
    if (a.n != 0 && a.n != total)
      throw UsageError("--n disagrees with the --hetero sizes");
    HeteroResult h = heterogeneous(HeteroSpec{sizes, derive_seed(seed, 0), {}});
    m = h.matrix;
    truth_rot = h.image_rotations;
    truth_part = h.truth;
    have_partition = true;
    kind = "heterogeneous";
  } else {
    if (a.n < 3)
      throw UsageError("--n must be at least 3");
    truth_rot = random_rotations(a.n, derive_seed(seed, 0));
    m = pure_common_lines(truth_rot);
  }
  if (a.angle_sigma > 0.0 || a.outlier_rate > 0.0) {
    m = perturb(m, NoiseSpec{a.angle_sigma, a.outlier_rate, derive_seed(seed, 1)});
    if (kind == "pure")
      kind = "noisy";
  }
  const std::string base = out_path(dir, a.out);
  if (!a.scales.empty()) {
    auto lohi = parse_list(a.scales, ':');
    if (lohi.size() != 2 || !(lohi[0] > 0.0) || !(lohi[1] >= lohi[0]))
      throw UsageError("--scales expects lo:hi with 0 < lo ≤ hi");
    auto [scaled, lambda] = random_scales(m, derive_seed(seed, 2), lohi[0], lohi[1]);
    m = scaled;
    if (kind == "pure")
      kind = "scaled";
    io::write_document(base + ".scales", io::scales_document(lambda));
  }
  io::write_document(base + ".matrix", io::matrix_document(m, kind));
  io::write_document(base + ".rotations", io::rotations_document(truth_rot));
  if (have_partition)
    io::write_document(base + ".partition", io::partition_document(truth_part));
  info("wrote " + base + ".matrix (" + kind + ", n=" + std::to_string(m.n()) + ")");
  return ok;
}

// ---------------------------------------------------------------- denoise

struct DenoiseArgs {
  std::string in;
  std::string out = "denoised";
  bool skip_sinkhorn = false;
};

int cmd_denoise(const DenoiseArgs &a, const Settings &s, const std::string &dir) {
  const io::MatrixFile mf = io::matrix_from_document(io::read_document(a.in));
  const std::string base = out_path(dir, a.out);
  io::Document rep = new_report("denoise");
  rep.set("input", fs::path(a.in).filename().string());
  rep.set("n", std::to_string(mf.matrix.n()));
  add_report(rep, "before", constraint_report(mf.matrix));

  int code = ok;
  std::string cause = "none";
  CommonLinesMatrix result = mf.matrix;
  try {
    AdmmResult ar = irls_admm(mf.matrix, s.admm);
    rep.set("admm.status", to_string(ar.diag.status));
    rep.set("admm.irls_iterations", std::to_string(ar.diag.irls_iterations));
    rep.set("admm.admm_iterations", std::to_string(ar.diag.admm_iterations));
    rep.set("admm.rank_gap", io::format_double(ar.diag.rank_gap));
    if (!ar.diag.message.empty())
      rep.set("admm.message", ar.diag.message);
    add_trace(rep, "admm_objective", ar.diag.objective);
    result = ar.A;
    if (!solver_ok(ar.diag.status)) {
      code = solver;
      cause = "admm_" + to_string(ar.diag.status);
    } else {
      io::write_document(base + ".scales", io::scales_document(ar.Lambda));
      if (!a.skip_sinkhorn) {
        SinkhornResult sr = sinkhorn(ar.A, s.sinkhorn);
        rep.set("sinkhorn.status", to_string(sr.status));
        rep.set("sinkhorn.iterations", std::to_string(sr.iterations));
        rep.set("sinkhorn.increases", std::to_string(sr.increases));
        if (!sr.message.empty())
          rep.set("sinkhorn.message", sr.message);
        add_trace(rep, "sinkhorn_error", sr.error);
        if (!solver_ok(sr.status)) {
          code = solver;
          cause = "sinkhorn_" + to_string(sr.status);
        } else {
          result = sr.A;
        }
      } else {
        rep.set("sinkhorn.status", "skipped");
      }
    }
  } catch (const Error &e) {
    code = solver;
    cause = "error";
    rep.set("message", e.what());
  }
  if (code == ok) {
    add_report(rep, "after", constraint_report(result));
    io::write_document(base + ".matrix", io::matrix_document(result, "scaled"));
  }
  rep.set("status", code == ok ? "ok" : "failed");
  rep.set("cause", cause);
  io::write_document(base + ".report", rep);
  return code;
}

// ---------------------------------------------------------------- rotations

struct RotationsArgs {
  std::string in;
  std::string out = "recovered";
  bool both = false;
};

int cmd_rotations(const RotationsArgs &a, const std::string &dir) {
  const io::MatrixFile mf = io::matrix_from_document(io::read_document(a.in));
  const std::string base = out_path(dir, a.out);
  io::Document rep = new_report("rotations");
  rep.set("input", fs::path(a.in).filename().string());
  rep.set("n", std::to_string(mf.matrix.n()));
  RecoveryResult rr;
  try {
    rr = recover_rotations(mf.matrix);
  } catch (const Error &e) {
    rep.set("status", "failed");
    rep.set("cause", "error");
    rep.set("message", e.what());
    io::write_document(base + ".report", rep);
    return solver;
  }
  rep.set("status", "ok");
  rep.set("cause", "none");
  rep.set("chirality", to_string(rr.chirality));
  rep.set("residual", io::format_double(rr.residual));
  rep.set("residual.plus", io::format_double(rr.plus.residual));
  rep.set("residual.minus", io::format_double(rr.minus.residual));
  for (size_t k = 0; k < rr.warnings.size(); ++k)
    rep.set("warning." + std::to_string(k), rr.warnings[k]);
  io::write_document(base + ".rotations", io::rotations_document(rr.rotations));
  if (a.both) {
    io::write_document(base + ".plus.rotations", io::rotations_document(rr.plus.rotations));
    io::write_document(base + ".minus.rotations", io::rotations_document(rr.minus.rotations));
  }
  io::write_document(base + ".report", rep);
  return ok;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string in;
  std::string truth;
  std::string out = "clusters";
  long long n_samples = -1;
  double alpha = -1.0;
  int threads = -1;
};

int cmd_cluster(const ClusterArgs &a, const Settings &s, std::uint64_t seed,
                const std::string &dir) {
  const io::MatrixFile mf = io::matrix_from_document(io::read_document(a.in));
  ClusterConfig cfg = s.cluster;
  cfg.seed = seed;
  if (a.n_samples >= 0)
    cfg.n_samples = static_cast<int>(a.n_samples);
  if (a.alpha > 0.0)
    cfg.lfm_alpha = a.alpha;
  if (a.threads >= 0)
    cfg.threads = a.threads;
  const std::string base = out_path(dir, a.out);
  io::Document rep = new_report("cluster");
  rep.set("input", fs::path(a.in).filename().string());
  rep.set("n", std::to_string(mf.matrix.n()));
  rep.set("seed", std::to_string(seed));
  rep.set("lfm_alpha", io::format_double(cfg.lfm_alpha));

  ClusterResult cr;
  try {
    cr = clusters(mf.matrix, cfg);
  } catch (const InsufficientSamples &e) {
    rep.set("status", "failed");
    rep.set("cause", "insufficient_samples");
    rep.set("message", e.what());
    io::write_document(base + ".report", rep);
    return solver;
  }
  const auto &d = cr.diag;
  rep.set("status", "ok");
  rep.set("cause", "none");
  rep.set("samples.requested", std::to_string(d.requested));
  rep.set("samples.accepted", std::to_string(d.accepted));
  rep.set("samples.rejected_diverged", std::to_string(d.rejected_diverged));
  rep.set("samples.rejected_not_converged", std::to_string(d.rejected_not_converged));
  rep.set("samples.rejected_rank_gap", std::to_string(d.rejected_rank_gap));
  rep.set("samples.rejected_degenerate", std::to_string(d.rejected_degenerate));
  rep.set("samples.acceptance_rate", io::format_double(d.acceptance_rate));
  {
    std::vector<double> h(d.error_histogram.begin(), d.error_histogram.end());
    rep.set("error_histogram", io::join(h));
  }
  rep.set("clusters", std::to_string(cr.partition.num_clusters()));
  rep.set("communities", std::to_string(d.communities.size()));
  if (!a.truth.empty()) {
    Partition truth = io::partition_from_document(io::read_document(a.truth));
    if (truth.n() != cr.partition.n())
      throw UsageError("truth partition size does not match the matrix");
    rep.set("ari", io::format_double(adjusted_rand_index(truth, cr.partition)));
  }
  rep.has_data = true;
  for (size_t k = 0; k < d.communities.size(); ++k) {
    std::vector<double> members(d.communities[k].begin(), d.communities[k].end());
    rep.rows.push_back("community " + std::to_string(k) + " " + io::join(members));
  }
  io::write_document(base + ".partition", io::partition_document(cr.partition));
  std::ostringstream g;
  for (Eigen::Index i = 0; i < d.G.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.G.cols(); ++j)
      g << (j ? "," : "") << io::format_double(d.G(i, j));
    g << "\n";
  }
  write_text(base + ".affinity.csv", g.str());
  io::write_document(base + ".report", rep);
  return ok;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string rotations, truth_rotations;
  std::string matrix, truth_matrix;
  std::string partition, truth_partition;
  std::string out = "eval";
};

int cmd_eval(const EvalArgs &a, const std::string &dir) {
  const std::string base = out_path(dir, a.out);
  io::Document rep = new_report("eval");
  bool any = false;
  if (!a.rotations.empty() || !a.truth_rotations.empty()) {
    if (a.rotations.empty() || a.truth_rotations.empty())
      throw UsageError("--rotations and --truth-rotations go together");
    RotationSet est = io::rotations_from_document(io::read_document(a.rotations));
    RotationSet gt = io::rotations_from_document(io::read_document(a.truth_rotations));
    if (est.size() != gt.size())
      throw UsageError("rotation files differ in size");
    const ChiralProcrustesResult cp = procrustes_error_any_chirality(gt, est);
    const ProcrustesResult &pr = cp.alignment;
    est = cp.aligned_est;
    rep.set("procrustes_error", io::format_double(pr.error));
    rep.set("chirality", cp.flipped ? "flipped" : "as_given");
    std::ostringstream csv;
    csv << "image,angle_deg\n";
    std::vector<double> deg;
    for (size_t i = 0; i < gt.size(); ++i) {
      Mat3 aligned = est[i].matrix() * pr.Q;
      double ang = angular_error(aligned, gt[i].matrix()) * 180.0 / M_PI;
      deg.push_back(ang);
      csv << i << "," << io::format_double(ang) << "\n";
    }
    std::vector<double> sorted = deg;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : deg)
      mean += v;
    mean /= static_cast<double>(deg.size());
    rep.set("angle_deg.mean", io::format_double(mean));
    rep.set("angle_deg.median", io::format_double(sorted[sorted.size() / 2]));
    rep.set("angle_deg.max", io::format_double(sorted.back()));
    write_text(base + ".angles.csv", csv.str());
    any = true;
  }
  if (!a.matrix.empty()) {
    const io::MatrixFile mf = io::matrix_from_document(io::read_document(a.matrix));
    Vec sv = singular_values(mf.matrix.flat());
    std::ostringstream csv;
    csv << "index,singular_value\n";
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      csv << k + 1 << "," << io::format_double(sv(k)) << "\n";
    write_text(base + ".scree.csv", csv.str());
    add_report(rep, "matrix", constraint_report(mf.matrix));
    if (!a.truth_matrix.empty()) {
      const io::MatrixFile gt = io::matrix_from_document(io::read_document(a.truth_matrix));
      if (gt.matrix.n() != mf.matrix.n())
        throw UsageError("matrix files differ in size");
      rep.set("denoising_error", io::format_double(denoising_error(gt.matrix, mf.matrix)));
    }
    any = true;
  } else if (!a.truth_matrix.empty()) {
    throw UsageError("--truth-matrix needs --matrix");
  }
  if (!a.partition.empty() || !a.truth_partition.empty()) {
    if (a.partition.empty() || a.truth_partition.empty())
      throw UsageError("--partition and --truth-partition go together");
    Partition p = io::partition_from_document(io::read_document(a.partition));
    Partition t = io::partition_from_document(io::read_document(a.truth_partition));
    if (p.n() != t.n())
      throw UsageError("partition files differ in size");
    rep.set("ari", io::format_double(adjusted_rand_index(t, p)));
    any = true;
  }
  if (!any)
    throw UsageError("eval needs at least one pair of inputs");
  rep.set("status", "ok");
  io::write_document(base + ".report", rep);
  return ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Common-lines algebra for cryo-EM: synthesis, denoising, rotations, clustering"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string config;
  std::string log_level = "warn";
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--out-dir", out_dir, "Directory for output files");
  app.add_option("--config", config, "Config file overriding solver defaults")->check(CLI::ExistingFile);
  app.add_option("--log-level", log_level, "error | warn | info")
      ->check(CLI::IsMember({"error", "warn", "info"}));

  SynthArgs sa;
  auto *synth = app.add_subcommand("synth", "Generate a synthetic common-lines matrix");
  synth->add_option("--n", sa.n, "Number of images");
  synth->add_option("--scales", sa.scales, "Random block scales, lo:hi");
  synth->add_option("--angle-sigma", sa.angle_sigma, "Angular noise (radians)");
  synth->add_option("--outlier-rate", sa.outlier_rate, "Fraction of replaced blocks");
  synth->add_option("--hetero", sa.hetero, "Cluster sizes, e.g. 5,30,15");
  synth->add_option("--out", sa.out, "Output base name");

  DenoiseArgs da;
  auto *denoise = app.add_subcommand("denoise", "Recover block scales with IRLS-ADMM and Sinkhorn");
  denoise->add_option("--in", da.in, "Input matrix file")->required()->check(CLI::ExistingFile);
  denoise->add_option("--out", da.out, "Output base name");
  denoise->add_flag("--skip-sinkhorn", da.skip_sinkhorn, "Stop after IRLS-ADMM");

  RotationsArgs ra;
  auto *rotations = app.add_subcommand("rotations", "Recover rotations from a common-lines matrix");
  rotations->add_option("--in", ra.in, "Input matrix file")->required()->check(CLI::ExistingFile);
  rotations->add_option("--out", ra.out, "Output base name");
  rotations->add_flag("--both-chiralities", ra.both, "Also write both handedness candidates");

  ClusterArgs ca;
  auto *cluster = app.add_subcommand("cluster", "Cluster images into consistent subsets");
  cluster->add_option("--in", ca.in, "Input matrix file")->required()->check(CLI::ExistingFile);
  cluster->add_option("--truth", ca.truth, "Ground-truth partition for the report")
      ->check(CLI::ExistingFile);
  cluster->add_option("--out", ca.out, "Output base name");
  cluster->add_option("--n-samples", ca.n_samples, "Number of 4-subsets (0 = default)");
  cluster->add_option("--alpha", ca.alpha, "Community resolution");
  cluster->add_option("--threads", ca.threads, "Worker threads (0 = all cores)");

  EvalArgs ea;
  auto *eval = app.add_subcommand("eval", "Compare results against ground truth");
  eval->add_option("--rotations", ea.rotations, "Estimated rotations")->check(CLI::ExistingFile);
  eval->add_option("--truth-rotations", ea.truth_rotations, "Ground-truth rotations")
      ->check(CLI::ExistingFile);
  eval->add_option("--matrix", ea.matrix, "Matrix to evaluate")->check(CLI::ExistingFile);
  eval->add_option("--truth-matrix", ea.truth_matrix, "Ground-truth pure matrix")
      ->check(CLI::ExistingFile);
  eval->add_option("--partition", ea.partition, "Estimated partition")->check(CLI::ExistingFile);
  eval->add_option("--truth-partition", ea.truth_partition, "Ground-truth partition")
      ->check(CLI::ExistingFile);
  eval->add_option("--out", ea.out, "Output base name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  g_log = log_level == "error" ? LogLevel::error
          : log_level == "info" ? LogLevel::info
                                : LogLevel::warn;
  set_warning_sink([](const std::string &msg) {
    if (g_log >= LogLevel::warn)
      std::cerr << "warning: " << msg << "\n";
  });

  try {
    if (!fs::is_directory(out_dir))
      throw UsageError("--out-dir does not exist: " + out_dir);
    const Settings settings = load_settings(config);
    if (*synth)
      return cmd_synth(sa, seed, out_dir);
    if (*denoise)
      return cmd_denoise(da, settings, out_dir);
    if (*rotations)
      return cmd_rotations(ra, out_dir);
    if (*cluster)
      return cmd_cluster(ca, settings, seed, out_dir);
    if (*eval)
      return cmd_eval(ea, out_dir);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const io::SchemaError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const InvalidArgument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return runtime;
  }
  return usage;
}
