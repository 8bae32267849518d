#include "mmdim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mmdim/error.hpp"
#include "mmdim/irregular.hpp"
#include "mmdim/skew.hpp"
#include "mmdim/zoo.hpp"

namespace mmdim {

using json = nlohmann::ordered_json;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"boxdim", "mdim", "cp", "localent", "skew", "glue", "irregular",
                                              "verify"};
  return names;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "preset", "seed",
      "preset.depth", "preset.levels", "preset.grid", "preset.alphabet", "preset.rotation_a", "preset.rotation_b",
      "ladder.eps", "ladder.n", "ladder.N",
      "walk.weights",
      "budget.exact_words", "budget.mc_samples", "budget.max_evaluations",
      "boxdim.csv", "boxdim.metric",
      "cp.slack", "cp.exact_limit", "cp.tolerance", "cp.grid",
      "local.points", "local.word_mode",
      "skew.subset", "skew.tol", "skew.restrict", "skew.nu",
      "glue.instance", "glue.mode", "glue.candidates", "glue.closed", "glue.exhaust_limit", "glue.sampled_gap_words",
      "irregular.observable", "irregular.horizon", "irregular.threshold", "irregular.tol", "irregular.random_tails",
      "irregular.head_length",
      "verify.instances"};
  return keys;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV text with a fixed header; cells are written in row order.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) { row(header); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) fail(ErrorKind::Parameter, "csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::size_t cols_;
  std::ostringstream out_;
};

struct Ladders {
  std::vector<double> eps;
  std::vector<std::size_t> n;
  std::vector<std::size_t> N;
};

void check_eps_ladder(const Config& cfg, const std::string& key, const std::vector<double>& v) {
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::Config, cfg.source() + ": field '" + key + "': " + what);
  };
  if (v.size() < 2) bad("needs at least two scales");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) bad("scales must be positive");
    if (i > 0 && !(v[i] < v[i - 1])) bad("scales must be strictly decreasing");
  }
}

void check_time_ladder(const Config& cfg, const std::string& key, const std::vector<std::size_t>& v) {
  auto bad = [&](const std::string& what) {
    fail(ErrorKind::Config, cfg.source() + ": field '" + key + "': " + what);
  };
  if (v.empty()) bad("empty ladder");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) bad("entries must be >= 1");
    if (i > 0 && v[i] <= v[i - 1]) bad("entries must be strictly increasing");
  }
}

struct Context {
  const Config& cfg;
  std::string experiment;
  std::string preset;
  std::uint64_t seed = 0;
  ZooSystem zoo;
  Ladders ladders;
  RandomWalkSpec walk;
  AverageBudget budget;
};

struct Outcome {
  json results = json::object();
  std::string csv;
  std::vector<std::string> flags;
  bool violation = false;
  bool incomplete = false;
};

void add_flags(Outcome& o, const std::vector<std::string>& flags, const std::string& prefix = "") {
  for (const auto& f : flags) {
    const std::string g = prefix + f;
    if (std::find(o.flags.begin(), o.flags.end(), g) == o.flags.end()) o.flags.push_back(g);
  }
  for (const auto& f : flags)
    if (f == "partial") o.incomplete = true;
}

json report_json(const DimensionReport& rep) {
  json scales = json::array();
  for (const auto& s : rep.scales) {
    json j;
    j["eps"] = s.eps;
    j["value"] = s.value;
    j["upper"] = s.upper;
    j["lower"] = s.lower;
    j["ratio"] = s.ratio;
    j["values"] = s.values;
    j["resolution_limited"] = s.resolution_limited;
    scales.push_back(j);
  }
  json j;
  j["slope"] = rep.slope;
  j["scales"] = scales;
  j["flags"] = rep.flags;
  return j;
}

Point preset_point(const ZooSystem& zoo, std::size_t k) {
  if (zoo.sys) {
    if (k >= zoo.sys->phase().size()) fail(ErrorKind::Parameter, "point index " + std::to_string(k) + " outside the sample");
    return zoo.sys->phase().point(k);
  }
  Point p(zoo.coords.size());
  std::size_t rem = k;
  for (std::size_t j = zoo.coords.size(); j-- > 0;) {
    p[j] = zoo.coords[j][rem % zoo.coords[j].size()];
    rem /= zoo.coords[j].size();
  }
  if (rem != 0) fail(ErrorKind::Parameter, "point index " + std::to_string(k) + " outside the product grid");
  return p;
}

const SemigroupSystem& need_sample(const Context& ctx) {
  if (!ctx.zoo.sys)
    fail(ErrorKind::Unsupported, "preset '" + ctx.preset + "' has no materialized sample at these parameters");
  return *ctx.zoo.sys;
}

// ---------------------------------------------------------------- boxdim

Outcome run_boxdim(Context& ctx) {
  Outcome o;
  const std::string path = ctx.cfg.get_string("boxdim.csv", "");
  const std::string metric = ctx.cfg.get_string("boxdim.metric", "euclidean");
  DimensionReport rep;
  if (!path.empty()) {
    const auto base = std::filesystem::path(ctx.cfg.source()).parent_path();
    const auto full = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base / path;
    rep = upper_box_dimension(load_space_csv(full.string(), metric), ctx.ladders.eps);
  } else {
    rep = upper_box_dimension(need_sample(ctx).phase(), ctx.ladders.eps);
  }
  Csv csv({"epsilon", "count", "log_count", "ratio"});
  for (const auto& s : rep.scales)
    csv.row({num(s.eps), num(std::round(std::exp(s.value))), num(s.value), num(s.ratio)});
  o.csv = csv.str();
  o.results["box_dimension"] = report_json(rep);
  add_flags(o, rep.flags);
  return o;
}

// ---------------------------------------------------------------- mdim / cp

void mdim_rows(Csv& csv, const DimensionReport& rep, const char* kind) {
  for (const auto& s : rep.scales)
    for (std::size_t k = 0; k < s.ladder.size(); ++k)
      csv.row({num(s.eps), std::to_string(s.ladder[k]), kind, num(s.count_mean[k]), num(s.count_stderr[k]),
               num(s.values[k]), ""});
}

Outcome run_mdim(Context& ctx) {
  Outcome o;
  const auto& target = *ctx.zoo.whole;
  const auto up = mdim_whole(target, ctx.walk, ctx.ladders.eps, ctx.ladders.n, Variant::Upper, ctx.budget);
  const auto lo = mdim_whole(target, ctx.walk, ctx.ladders.eps, ctx.ladders.n, Variant::Lower, ctx.budget);
  const auto um = umdim_subset(target, ctx.walk, ctx.ladders.eps, ctx.ladders.N, ctx.budget);
  const auto lm = lmdim_subset(target, ctx.walk, ctx.ladders.eps, ctx.ladders.N, ctx.budget);
  Csv csv({"epsilon", "n", "kind", "count_mean", "count_stderr", "entropy", "exponent"});
  mdim_rows(csv, up, "separated");
  mdim_rows(csv, um, "spanning");
  o.csv = csv.str();
  o.results["slope"] = up.slope;
  o.results["mdim_upper"] = report_json(up);
  o.results["mdim_lower"] = report_json(lo);
  o.results["umdim"] = report_json(um);
  o.results["lmdim"] = report_json(lm);
  for (const auto* r : {&up, &lo, &um, &lm}) add_flags(o, r->flags);
  return o;
}

CPOptions cp_options(const Context& ctx) {
  CPOptions opts;
  opts.slack = ctx.cfg.get_size("cp.slack", opts.slack);
  opts.exact_limit = ctx.cfg.get_size("cp.exact_limit", opts.exact_limit);
  opts.tolerance = ctx.cfg.get_double("cp.tolerance", opts.tolerance);
  opts.grid = ctx.cfg.get_size("cp.grid", opts.grid);
  opts.budget = ctx.budget;
  return opts;
}

Outcome run_cp(Context& ctx) {
  Outcome o;
  const auto opts = cp_options(ctx);
  if (ctx.ladders.N.size() < 2) fail(ErrorKind::Config, ctx.cfg.source() + ": field 'ladder.N': cp needs two entries");
  const auto rep = cp_dimension(*ctx.zoo.whole, ctx.walk, ctx.ladders.eps, ctx.ladders.N, opts);
  Csv csv({"epsilon", "n", "kind", "count_mean", "count_stderr", "entropy", "exponent"});
  for (const auto& s : rep.scales) csv.row({num(s.eps), std::to_string(ctx.ladders.N.back()), "cp", "", "", "", num(s.value)});
  o.csv = csv.str();
  o.results["slope"] = rep.slope;
  o.results["cp"] = report_json(rep);
  add_flags(o, rep.flags);
  return o;
}

// ---------------------------------------------------------------- localent

Outcome run_localent(Context& ctx) {
  Outcome o;
  const auto points = ctx.cfg.get_sizes("local.points", {0});
  const std::string mode_name = ctx.cfg.get_string("local.word_mode", "exhaustive");
  WordMode mode;
  if (mode_name == "exhaustive") mode = WordMode::Exhaustive;
  else if (mode_name == "adversarial") mode = WordMode::Adversarial;
  else fail(ErrorKind::Config, ctx.cfg.source() + ": field 'local.word_mode': expected exhaustive or adversarial");
  if (!ctx.zoo.mass) fail(ErrorKind::Unsupported, "preset has no measure");
  Csv csv({"x_index", "epsilon", "n", "kind", "mass", "value"});
  json per_point = json::array();
  for (auto k : points) {
    const Point x = preset_point(ctx.zoo, k);
    for (double eps : ctx.ladders.eps)
      for (auto kind : {LocalKind::Plus, LocalKind::Minus}) {
        const auto est = local_entropy(*ctx.zoo.mass, x, eps, ctx.ladders.n, kind, mode, ctx.seed);
        for (std::size_t i = 0; i < est.ladder.size(); ++i)
          csv.row({std::to_string(k), num(eps), std::to_string(est.ladder[i]), kind == LocalKind::Plus ? "plus" : "minus",
                   num(est.masses[i]), num(est.values[i])});
      }
    const auto up = local_mdim(*ctx.zoo.mass, x, ctx.ladders.eps, ctx.ladders.n, Variant::Upper, mode, ctx.seed);
    const auto lo = local_mdim(*ctx.zoo.mass, x, ctx.ladders.eps, ctx.ladders.n, Variant::Lower, mode, ctx.seed);
    json j;
    j["x_index"] = k;
    j["upper_local_mdim"] = up.slope;
    j["lower_local_mdim"] = lo.slope;
    per_point.push_back(j);
    add_flags(o, up.flags);
    add_flags(o, lo.flags);
  }
  o.csv = csv.str();
  o.results["points"] = per_point;
  o.flags.push_back("sampled-points-only");
  return o;
}

// ---------------------------------------------------------------- skew

Outcome run_skew(Context& ctx) {
  Outcome o;
  const std::string subset = ctx.cfg.get_string("skew.subset", "full");
  const double tol = ctx.cfg.get_double("skew.tol", 0.15);
  const bool restrict = ctx.cfg.get_bool("skew.restrict", false);
  const auto nu_w = ctx.cfg.get_doubles("skew.nu", ctx.walk.weights);
  const RandomWalkSpec nu(nu_w, ctx.seed);
  std::shared_ptr<const CountTarget> Z;
  if (subset == "full") {
    Z = ctx.zoo.whole;
  } else if (subset == "half" || subset == "point") {
    const auto& sys = need_sample(ctx);
    std::vector<std::size_t> idx;
    if (subset == "point") idx.push_back(0);
    else
      for (std::size_t i = 0; i < sys.phase().size(); ++i)
        if (counter_hash(ctx.seed, 77, i) & 1u) idx.push_back(i);
    Z = std::make_shared<SampledTarget>(ctx.zoo.sys, idx);
  } else {
    fail(ErrorKind::Config, ctx.cfg.source() + ": field 'skew.subset': expected full, half or point");
  }
  const auto Y = symbol_space(ctx.zoo.family.alphabet);
  const auto rep = theorem4_harness(Z, *Y, nu, ctx.ladders.eps, ctx.ladders.N, tol, restrict);
  Csv csv({"side", "epsilon", "N", "entropy", "scale_value"});
  for (const auto& [side, r] : {std::pair<const char*, const DimensionReport*>{"G", &rep.lhs_report},
                                {"F", &rep.rhs_report}})
    for (const auto& s : r->scales)
      for (std::size_t k = 0; k < s.values.size(); ++k)
        csv.row({side, num(s.eps), std::to_string(s.ladder[k]), num(s.values[k]), num(s.value)});
  o.csv = csv.str();
  o.results["box_dim"] = rep.box_dim;
  o.results["umdim_G"] = rep.umdim_G;
  o.results["lhs"] = rep.lhs;
  o.results["rhs"] = rep.rhs;
  o.results["gap"] = rep.gap;
  o.results["homogeneity_L"] = rep.homogeneity_L;
  o.results["equality"] = rep.equality;
  o.results["holds"] = rep.holds;
  o.results["omega_depth"] = rep.omega_depth;
  add_flags(o, rep.flags);
  o.violation = !rep.holds;
  return o;
}

// ---------------------------------------------------------------- glue

std::vector<Point> glue_candidates(const Context& ctx, const std::string& spec) {
  if (spec == "sample") return need_sample(ctx).phase().points();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::size_t n = 0;
  if (colon != std::string::npos) {
    try {
      n = std::stoul(spec.substr(colon + 1));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (kind == "grid" && n >= 1) return circle_grid(n);
  if (kind == "sequences" && n >= 1 && !ctx.zoo.coords.empty()) return sequence_grid(ctx.zoo.coords[0], n);
  fail(ErrorKind::Config, ctx.cfg.source() + ": field 'glue.candidates': expected sample, grid:N or sequences:D");
}

Outcome run_glue(Context& ctx) {
  Outcome o;
  const std::string path = ctx.cfg.get_string("glue.instance", "");
  if (path.empty()) fail(ErrorKind::Config, ctx.cfg.source() + ": field 'glue.instance': required for glue");
  const auto base = std::filesystem::path(ctx.cfg.source()).parent_path();
  const auto full = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base / path;
  std::ifstream f(full);
  if (!f) fail(ErrorKind::Config, ctx.cfg.source() + ": field 'glue.instance': cannot open '" + full.string() + "'");
  json desc;
  try {
    desc = json::parse(f);
  } catch (const std::exception& e) {
    fail(ErrorKind::Config, full.string() + ": " + e.what());
  }
  GlueInstance inst;
  std::vector<std::size_t> gaps;
  std::size_t m_eps = 0;
  try {
    for (const auto& s : desc.at("segments"))
      inst.segments.push_back({s.at("x").get<std::vector<double>>(), Word::parse(s.at("w").get<std::string>())});
    inst.eps = desc.at("eps").get<double>();
    inst.p_max = desc.value("p_max", std::size_t{0});
    gaps = desc.value("gaps", std::vector<std::size_t>{});
    m_eps = desc.value("m_eps", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, full.string() + ": " + e.what());
  }
  const std::string mode = ctx.cfg.get_string("glue.mode", "gluing");
  GlueOptions opts;
  opts.seed = ctx.seed;
  opts.closed = ctx.cfg.get_bool("glue.closed", false);
  opts.exhaust_limit = ctx.cfg.get_size("glue.exhaust_limit", opts.exhaust_limit);
  opts.sampled_gap_words = ctx.cfg.get_size("glue.sampled_gap_words", opts.sampled_gap_words);
  const auto cands = glue_candidates(ctx, ctx.cfg.get_string("glue.candidates", "sample"));
  GlueResult res;
  if (mode == "gluing") res = gluing_search(ctx.zoo.family, cands, inst, opts);
  else if (mode == "specification") res = specification_search(ctx.zoo.family, cands, inst, gaps, m_eps, opts);
  else fail(ErrorKind::Config, ctx.cfg.source() + ": field 'glue.mode': expected gluing or specification");

  Csv csv({"segment", "start", "n", "max_distance"});
  o.results["found"] = res.found;
  if (res.found) {
    std::vector<Word> zero_words;
    for (auto p : res.gaps) zero_words.emplace_back(std::vector<std::uint32_t>(p, 0));
    const bool valid = glue_witness_valid(ctx.zoo.family, cands[res.y], inst, res.gaps, zero_words, opts.closed);
    // Replays the witness orbit against each target for the CSV detail.
    Point z = cands[res.y];
    std::size_t t = 0;
    for (std::size_t j = 0; j < inst.segments.size(); ++j) {
      const auto& seg = inst.segments[j];
      Point ref = seg.x, w = z;
      double worst = ctx.zoo.family.metric(w, ref);
      for (std::size_t k = 0; k < seg.w.size(); ++k) {
        w = ctx.zoo.family.apply(seg.w[k], w);
        ref = ctx.zoo.family.apply(seg.w[k], ref);
        worst = std::max(worst, ctx.zoo.family.metric(w, ref));
      }
      csv.row({std::to_string(j + 1), std::to_string(t), std::to_string(seg.w.size()), num(worst)});
      z = w;
      t += seg.w.size();
      if (j < res.gaps.size()) {
        for (std::size_t k = 0; k < res.gaps[j]; ++k) z = ctx.zoo.family.apply(0, z);
        t += res.gaps[j];
      }
    }
    o.results["gaps"] = res.gaps;
    o.results["y"] = cands[res.y];
    o.results["uniform"] = res.uniform;
    o.results["exhaustive"] = res.exhaustive;
    o.results["gap_words_checked"] = res.gap_words_checked;
    o.results["witness_valid"] = valid;
    if (!res.exhaustive) o.flags.push_back("gap-words-sampled");
    o.violation = !valid;
  }
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- irregular

Outcome run_irregular(Context& ctx) {
  Outcome o;
  const std::size_t coord = ctx.cfg.get_size("irregular.observable", 0);
  Theorem5Options opts;
  opts.horizon = ctx.cfg.get_size("irregular.horizon", opts.horizon);
  opts.threshold = ctx.cfg.get_double("irregular.threshold", opts.threshold);
  opts.tol = ctx.cfg.get_double("irregular.tol", opts.tol);
  opts.random_tails = ctx.cfg.get_size("irregular.random_tails", opts.random_tails);
  opts.head_length = ctx.cfg.get_size("irregular.head_length", opts.head_length);
  opts.seed = ctx.seed;
  opts.budget = ctx.budget;
  const auto phi = coordinate_observable(coord);
  const auto rep = theorem5_harness(ctx.zoo, ctx.walk, phi, ctx.ladders.eps, ctx.ladders.N, opts);

  Csv csv({"x_index", "n", "partial_average", "oscillation"});
  if (ctx.zoo.symbolic) {
    const auto ip = construct_irregular(ctx.zoo, phi, opts.horizon);
    for (std::size_t n = 1; n <= ip.trace.partials.size(); n *= 2) {
      std::vector<std::vector<double>> head(ip.trace.partials.begin(),
                                            ip.trace.partials.begin() + static_cast<std::ptrdiff_t>(n));
      csv.row({"0", std::to_string(n), num(ip.trace.partials[n - 1][0]), num(trace_oscillation(head))});
    }
  }
  o.csv = csv.str();
  o.results["empty"] = rep.empty;
  o.results["holds"] = rep.holds;
  o.results["umdim_irr"] = rep.umdim_irr;
  o.results["mdim_whole"] = rep.mdim_whole;
  o.results["gap"] = rep.gap;
  o.results["threshold"] = rep.threshold;
  o.results["margin"] = rep.margin;
  o.results["head_length"] = rep.head_length;
  o.results["tails_tested"] = rep.tails_tested;
  o.results["tails_irregular"] = rep.tails_irregular;
  o.results["tail_scores"] = rep.tail_scores;
  o.results["z_irr_size"] = rep.z_irr_size;
  o.results["reduction"] = rep.reduction;
  o.results["inclusion_pairs"] = rep.inclusion_pairs;
  o.results["inclusion_counterexamples"] = rep.inclusion_counterexamples;
  add_flags(o, rep.flags);
  o.violation = !rep.holds;
  return o;
}

// ---------------------------------------------------------------- verify

struct Property {
  explicit Property(std::string n) : name(std::move(n)) {}
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string detail;

  void check(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (violations++ == 0) detail = what;
  }
};

std::size_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k, std::size_t n) {
  return static_cast<std::size_t>(counter_hash(seed, stream, k) % n);
}

Word random_word(std::uint64_t seed, std::uint64_t stream, std::size_t len, std::size_t alphabet) {
  Word w;
  for (std::size_t t = 0; t < len; ++t) w.symbols.push_back(static_cast<std::uint32_t>(draw(seed, stream, 100 + t, alphabet)));
  return w;
}

Point family_word(const MapFamily& fam, const Word& w, const Point& x) {
  Point z = x;
  for (std::size_t t = w.size(); t-- > 0;) z = fam.apply(w[t], z);
  return z;
}

Outcome run_verify(Context& ctx) {
  Outcome o;
  const std::size_t instances = ctx.cfg.get_size("verify.instances", 20);
  const auto& zoo = ctx.zoo;
  const std::size_t A = zoo.family.alphabet;
  std::vector<Property> props;
  std::vector<Point> probe;
  for (std::size_t k = 0; k < instances; ++k) {
    const std::size_t total = zoo.sys ? zoo.sys->phase().size() : word_count(zoo.coords[0].size(), zoo.coords.size());
    probe.push_back(preset_point(zoo, draw(ctx.seed, 1, k, total)));
  }

  {
    Property p{"metric-audit"};
    if (zoo.sys) {
      const auto audit = metric_audit(zoo.sys->phase(), 200000, ctx.seed);
      p.checked = audit.triples_checked;
      p.violations = audit.violations.size();
      if (!audit.clean()) p.detail = audit.violations.front().kind;
    } else {
      const auto audit = metric_audit(SampledSpace(probe, zoo.family.metric), 200000, ctx.seed);
      p.checked = audit.triples_checked;
      p.violations = audit.violations.size();
      if (!audit.clean()) p.detail = audit.violations.front().kind;
    }
    props.push_back(p);
  }
  {
    Property p{"composition"};
    for (std::size_t k = 0; k < instances; ++k) {
      const Word a = random_word(ctx.seed, 2 * k + 10, 1 + draw(ctx.seed, 3, k, 3), A);
      const Word b = random_word(ctx.seed, 2 * k + 11, 1 + draw(ctx.seed, 4, k, 3), A);
      if (zoo.sys) {
        const std::size_t i = draw(ctx.seed, 5, k, zoo.sys->phase().size());
        p.check(apply_word_index(*zoo.sys, concat(a, b), i) == apply_word_index(*zoo.sys, a, apply_word_index(*zoo.sys, b, i)),
                "f_{ab} differs from f_a f_b at index " + std::to_string(i));
      } else {
        const Point& x = probe[k];
        p.check(family_word(zoo.family, concat(a, b), x) == family_word(zoo.family, a, family_word(zoo.family, b, x)),
                "f_{ab} differs from f_a f_b");
      }
    }
    props.push_back(p);
  }
  {
    Property p{"skew-unfolding"};
    SkewSpace space{zoo.family, symbol_space(A), 8, 0};
    for (std::size_t k = 0; k < instances; ++k) {
      const Word omega = random_word(ctx.seed, 500 + k, 8, A);
      const std::size_t n = 1 + draw(ctx.seed, 6, k, 8);
      SkewPoint s{omega, probe[k]};
      for (std::size_t t = 0; t < n; ++t) s = skew_apply(space, s);
      p.check(s.x == family_word(zoo.family, reverse(slice(omega, 1, n)), probe[k]), "skew orbit differs from f_w");
    }
    props.push_back(p);
  }
  if (zoo.sys) {
    const auto& sys = *zoo.sys;
    const std::size_t M = sys.phase().size();
    Property sand{"sandwich"};
    Property cover{"covering-lemma"};
    for (std::size_t k = 0; k < instances; ++k) {
      std::vector<std::size_t> Z;
      const std::size_t m = 1 + draw(ctx.seed, 7, k, std::min<std::size_t>(10, M));
      for (std::size_t a = 0; a < m; ++a) Z.push_back(draw(ctx.seed, 8 + k, a, M));
      std::sort(Z.begin(), Z.end());
      Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
      const Word w = random_word(ctx.seed, 900 + k, draw(ctx.seed, 9, k, 5), A);
      const double eps = ctx.ladders.eps[draw(ctx.seed, 10, k, ctx.ladders.eps.size())];
      const auto r = sandwich_check(sys, w, eps, Z);
      sand.check(r.holds, "r=" + std::to_string(r.r) + " s=" + std::to_string(r.s) + " r_half=" + std::to_string(r.r_half));

      const Word omega = random_word(ctx.seed, 1300 + k, 4, A);
      std::vector<BowenBall> balls;
      const std::size_t nb = 1 + draw(ctx.seed, 11, k, 8);
      for (std::size_t b = 0; b < nb; ++b)
        balls.push_back({slice(omega, 1, draw(ctx.seed, 12 + k, b, 5)), draw(ctx.seed, 40 + k, b, M), eps});
      const auto chosen = disjoint_subfamily(sys, balls);
      const auto chk = verify_subfamily(sys, balls, chosen);
      cover.check(chk.disjoint && chk.covers, "subfamily not disjoint or 3eps dilation misses points");
    }
    props.push_back(sand);
    props.push_back(cover);

    if (zoo.family.metric.name == "seq-sup" && !zoo.coords.empty()) {
      Property p{"product-counts"};
      const ProductShiftTarget analytic(zoo.coords, A);
      const SampledTarget sampled(zoo.sys, [&] {
        std::vector<std::size_t> all(M);
        for (std::size_t i = 0; i < M; ++i) all[i] = i;
        return all;
      }());
      for (double eps : ctx.ladders.eps)
        for (auto n : ctx.ladders.n) {
          const Word w(std::vector<std::uint32_t>(n, 0));
          const auto a = analytic.count(w, eps, CountKind::Separated);
          const auto b = sampled.count(w, eps, CountKind::Separated);
          if (b.exact) p.check(a.count == b.count, "separated count differs at eps " + num(eps));
        }
      props.push_back(p);
    }
    if (A <= 3 && M >= 2) {
      Property p{"cp-equivalence"};
      CPOptions opts;
      opts.exact_limit = 16;
      const std::size_t cases = std::min<std::size_t>(instances, 5);
      for (std::size_t k = 0; k < cases; ++k) {
        std::vector<std::size_t> Z;
        for (std::size_t a = 0; a < 3; ++a) Z.push_back(draw(ctx.seed, 60 + k, a, M));
        std::sort(Z.begin(), Z.end());
        Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
        const SampledTarget target(zoo.sys, Z, CountMode::Exact);
        const Word w = random_word(ctx.seed, 70 + k, draw(ctx.seed, 13, k, 3), A);
        const double eps = ctx.ladders.eps[draw(ctx.seed, 14, k, ctx.ladders.eps.size())];
        for (double lambda : {0.0, 0.5, 1.0}) {
          const double m_open = open_cover_oracle(sys, Z, w, lambda, eps, opts.slack);
          const double m_2 = cp_outer_measure(target, w, lambda, 2.0 * eps, opts).value;
          const double m_4 = cp_outer_measure(target, w, lambda, eps / 4.0, opts).value;
          p.check(m_open >= m_2 * (1.0 - 1e-12) && m_4 >= m_open * (1.0 - 1e-12),
                  "cover measures out of order at lambda " + num(lambda));
        }
      }
      props.push_back(p);
    }
    if (A * A * M <= 4096) {
      std::vector<std::size_t> symbols(A);
      for (std::size_t y = 0; y < A; ++y) symbols[y] = y;
      const auto skew = materialize_skew(sys, symbols, 2);
      const auto audit = metric_audit(skew->phase(), 200000, ctx.seed);
      Property p{"skew-metric"};
      p.checked = audit.triples_checked;
      p.violations = audit.violations.size();
      if (!audit.clean()) p.detail = audit.violations.front().kind;
      props.push_back(p);
    }
  }

  Csv csv({"property", "checked", "violations", "detail"});
  json arr = json::array();
  for (const auto& p : props) {
    csv.row({p.name, std::to_string(p.checked), std::to_string(p.violations), p.detail});
    json j;
    j["property"] = p.name;
    j["checked"] = p.checked;
    j["violations"] = p.violations;
    if (!p.detail.empty()) j["detail"] = p.detail;
    arr.push_back(j);
    if (p.violations > 0) o.violation = true;
  }
  o.csv = csv.str();
  o.results["properties"] = arr;
  return o;
}

}  // namespace

ExperimentOutput run_experiment(const Config& cfg, std::optional<std::uint64_t> seed_override) {
  ExperimentOutput out;
  json summary;
  std::optional<Context> holder;
  Context* ctx_ptr = nullptr;
  auto finish = [&](int code, const std::string& status, const std::string& message, const Outcome* o) {
    out.exit_code = code;
    out.message = message;
    summary["experiment"] = out.experiment;
    if (ctx_ptr) {
      summary["preset"] = ctx_ptr->preset;
      summary["seed"] = ctx_ptr->seed;
      summary["ladders"] = {{"eps", ctx_ptr->ladders.eps}, {"n", ctx_ptr->ladders.n}, {"N", ctx_ptr->ladders.N}};
    }
    summary["results"] = o ? o->results : json::object();
    json diag;
    diag["status"] = status;
    diag["flags"] = o ? o->flags : std::vector<std::string>{};
    if (!message.empty()) diag["message"] = message;
    diag["config"] = cfg.resolved();
    summary["diagnostics"] = diag;
    out.json = summary.dump(2) + "\n";
    if (o) out.csv = o->csv;
  };

  try {
    cfg.check_known(known_keys());
    out.experiment = cfg.get_string("experiment", "");
    if (std::find(experiment_names().begin(), experiment_names().end(), out.experiment) == experiment_names().end())
      fail(ErrorKind::Config, cfg.source() + ": field 'experiment': unknown experiment '" + out.experiment + "'");
    holder.emplace(Context{cfg, out.experiment, cfg.get_string("preset", "identity"), 0, {}, {}, {}, {}});
    Context& ctx = *holder;
    ctx_ptr = &ctx;
    ctx.seed = cfg.get_u64("seed", 0);
    if (seed_override) ctx.seed = *seed_override;

    PresetParams params;
    params.depth = cfg.get_size("preset.depth", params.depth);
    params.levels = cfg.get_size("preset.levels", params.levels);
    params.grid = cfg.get_size("preset.grid", params.grid);
    params.alphabet = cfg.get_size("preset.alphabet", params.alphabet);
    params.rotation_a = cfg.get_size("preset.rotation_a", params.rotation_a);
    params.rotation_b = cfg.get_size("preset.rotation_b", params.rotation_b);
    ctx.ladders.eps = cfg.get_doubles("ladder.eps", {0.25, 0.125, 0.0625});
    ctx.ladders.n = cfg.get_sizes("ladder.n", {1, 2, 3, 4});
    ctx.ladders.N = cfg.get_sizes("ladder.N", {1, 2, 3});
    check_eps_ladder(cfg, "ladder.eps", ctx.ladders.eps);
    check_time_ladder(cfg, "ladder.n", ctx.ladders.n);
    check_time_ladder(cfg, "ladder.N", ctx.ladders.N);
    ctx.budget.exact_words = cfg.get_size("budget.exact_words", ctx.budget.exact_words);
    ctx.budget.mc_samples = cfg.get_size("budget.mc_samples", ctx.budget.mc_samples);
    if (cfg.has("budget.max_evaluations"))
      ctx.budget.max_evaluations = cfg.get_size("budget.max_evaluations", ctx.budget.max_evaluations);

    try {
      ctx.zoo = instantiate(ctx.preset, params);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Budget) throw;
      fail(ErrorKind::Config, cfg.source() + ": preset '" + ctx.preset + "': " + e.what());
    }
    const std::size_t A = ctx.zoo.family.alphabet;
    std::vector<double> uniform(A, 1.0 / static_cast<double>(A));
    const auto weights = cfg.get_doubles("walk.weights", uniform);
    if (weights.size() != A)
      fail(ErrorKind::Config, cfg.source() + ": field 'walk.weights': need " + std::to_string(A) + " weights");
    try {
      ctx.walk = RandomWalkSpec(weights, ctx.seed);
    } catch (const Error& e) {
      fail(ErrorKind::Config, cfg.source() + ": field 'walk.weights': " + e.what());
    }

    static const std::map<std::string, std::function<Outcome(Context&)>> runners{
        {"boxdim", run_boxdim}, {"mdim", run_mdim},   {"cp", run_cp},               {"localent", run_localent},
        {"skew", run_skew},     {"glue", run_glue},   {"irregular", run_irregular}, {"verify", run_verify}};
    Outcome o = runners.at(ctx.experiment)(ctx);
    if (o.violation) finish(kExitViolation, "violation", "", &o);
    else if (o.incomplete) finish(kExitIncomplete, "incomplete", "budget exhausted before every cell finished", &o);
    else finish(kExitOk, "pass", "", &o);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Budget: finish(kExitIncomplete, "incomplete", e.what(), nullptr); break;
      case ErrorKind::Numerical: finish(kExitIncomplete, "numerical", e.what(), nullptr); break;
      default: finish(kExitConfig, "config-error", e.what(), nullptr); break;
    }
  }
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = out.experiment.empty() ? "run" : out.experiment;
  const auto dir = std::filesystem::path(out_dir);
  {
    std::ofstream f(dir / (stem + ".json"), std::ios::binary);
    if (!f) fail(ErrorKind::Config, "cannot write to output directory '" + out_dir + "'");
    f << out.json;
  }
  if (!out.csv.empty()) {
    std::ofstream f(dir / (stem + ".csv"), std::ios::binary);
    f << out.csv;
  }
}

}  // namespace mmdim
