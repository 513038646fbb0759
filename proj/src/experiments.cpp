#include "blochlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "blochlab/json_io.hpp"
#include "blochlab/map_spec.hpp"
#include "blochlab/norms.hpp"
#include "blochlab/test_functions.hpp"

namespace blochlab {

namespace {

constexpr double kDerivativeThreshold = 1e-4;
constexpr double kSupThreshold = 5e-2;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string point_text(std::span<const cplx> z) {
  std::string s = "(";
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (k) s += ", ";
    s += short_fmt(z[k].real()) + (z[k].imag() < 0 ? "-" : "+") + short_fmt(std::abs(z[k].imag())) + "i";
  }
  return s + ")";
}

nlohmann::json finite_or_string(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

nlohmann::json header(const ExperimentConfig& c, const std::string& command) {
  const auto& plan = c.criteria.plan;
  return {{"schema_version", 1},
          {"command", command},
          {"seed", plan.seed},
          {"plan",
           {{"radial_levels", plan.radial_levels},
            {"angular_count", plan.angular_count},
            {"max_rounds", plan.refinement.max_rounds},
            {"budget", plan.refinement.budget}}}};
}

LoadedSpec load(const ExperimentConfig& c) {
  if (!c.spec_path) throw std::invalid_argument("this command needs --spec");
  return load_spec(*c.spec_path, c.degree_cap);
}

std::vector<double> distinct_p(const ExperimentConfig& c) {
  std::vector<double> ps;
  for (const auto& e : c.exponents) {
    if (std::find(ps.begin(), ps.end(), e.p) == ps.end()) ps.push_back(e.p);
  }
  return ps;
}

std::vector<CorpusFunction> functions_of(const LoadedSpec& s) {
  std::vector<CorpusFunction> out;
  if (s.function) out.push_back({"f", *s.function});
  if (s.map) {
    for (std::size_t l = 0; l < s.map->dimension(); ++l) {
      out.push_back({"phi" + std::to_string(l + 1), s.map->component(l)});
    }
  }
  return out;
}

// Accumulates checks of one verification suite.
class RowBuilder {
 public:
  explicit RowBuilder(std::string suite) { row_.suite = std::move(suite); }

  // One inequality value <= bound.
  void check(double value, double bound, const std::string& witness) {
    const double slack = bound - value;
    ++row_.checks;
    const bool ok = value <= bound;
    if (!ok) ++row_.failures;
    if (row_.checks == 1 || slack < row_.worst_slack || (!ok && row_.witness.empty())) {
      if (row_.checks == 1 || slack < row_.worst_slack) row_.worst_slack = slack;
      row_.witness = witness;
    }
  }

  void note(std::string n) { row_.note = std::move(n); }

  void finish(std::vector<VerifyRow>& rows) {
    if (row_.checks == 0) return;
    row_.passed = row_.failures == 0;
    rows.push_back(row_);
  }

 private:
  VerifyRow row_;
};

double gradient_discrepancy(std::span<const cplx> a, std::span<const cplx> b, double floor) {
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff += std::norm(a[k] - b[k]);
    na += std::norm(a[k]);
    nb += std::norm(b[k]);
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

SupSearch schwarz_sup_search(const HoloSelfMap& phi, const SamplingPlan& plan) {
  return search_supremum(
      [&phi](std::span<const cplx> z) {
        try {
          return schwarz_expansion_sup(phi, z);
        } catch (const SingularEvaluation&) {
          return std::numeric_limits<double>::infinity();
        }
      },
      phi.dimension(), plan);
}

double schwarz_sampled_inf(const HoloSelfMap& phi, const SamplingPlan& plan) {
  const auto s = search_supremum(
      [&phi](std::span<const cplx> z) {
        try {
          return -schwarz_expansion_inf(phi, z);
        } catch (const SingularEvaluation&) {
          return 0.0;
        }
      },
      phi.dimension(), plan);
  return -s.value;
}

std::string verify_table(const std::vector<VerifyRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %8s %8s %14s  %s\n", "suite", "checks", "failures", "worst_slack", "status");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-28s %8zu %8zu %14.6g  %s\n", r.suite.c_str(), r.checks, r.failures,
                  r.worst_slack, r.passed ? "pass" : "FAIL");
    os << line;
    if (!r.passed) os << "    witness: " << r.witness << "\n";
    if (!r.note.empty()) os << "    " << r.note << "\n";
  }
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  for (const auto& e : exponents) {
    if (!(e.p > 0.0) || !(e.q > 0.0)) throw std::invalid_argument("exponents p and q must be positive");
  }
  for (double v : sweep_p) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep exponents must be positive");
  }
  for (double v : sweep_q) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep exponents must be positive");
  }
  if (n == 0 || n > kMaxDim) throw DimensionError("corpus dimension out of range");
  if (little_degree < 0) throw std::invalid_argument("little-space degree must be nonnegative");
  criteria.plan.validate(n);
}

void write_outputs(const ExperimentConfig& config, const CommandResult& result) {
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
  };
  if (config.out_json) write(*config.out_json, result.json.dump(2) + "\n");
  if (config.out_csv) write(*config.out_csv, result.csv);
}

CommandResult cmd_norm(const ExperimentConfig& config) {
  config.validate();
  const LoadedSpec spec = load(config);
  const auto functions = functions_of(spec);
  const std::size_t n = functions.front().f.dimension();
  CommandResult out;
  out.json = header(config, "norm");
  out.json["spec"] = spec.function ? function_spec_to_json(*spec.function) : map_to_json(*spec.map);
  nlohmann::json results = nlohmann::json::array();
  std::ostringstream csv;
  std::ostringstream text;
  csv << "function,kind,p,value,offset,converged,evaluations";
  for (std::size_t k = 1; k <= n; ++k) csv << ",w" << k << "_re,w" << k << "_im";
  csv << "\n";
  const char* kind = config.lipschitz ? "lipschitz" : "bloch";
  for (double p : distinct_p(config)) {
    for (const auto& cf : functions) {
      const NormEstimate e = config.lipschitz ? lipschitz_norm_estimate(cf.f, p, config.criteria.plan)
                                              : bloch_norm_estimate(cf.f, BlochParams(p), config.criteria.plan);
      nlohmann::json r{{"function", cf.id}, {"kind", kind}, {"p", p}, {"estimate", to_json(e)}};
      csv << cf.id << ',' << kind << ',' << fmt(p) << ',' << fmt(e.value) << ',' << fmt(e.offset) << ','
          << (e.converged ? "true" : "false") << ',' << e.evaluations;
      for (const cplx& c : e.witness) csv << ',' << fmt(c.real()) << ',' << fmt(c.imag());
      csv << "\n";
      text << cf.id << "  " << kind << " p=" << short_fmt(p) << "  value=" << fmt(e.value)
           << "  converged=" << (e.converged ? "yes" : "no") << "  witness=" << point_text(e.witness) << "\n";
      if (config.oracle && !config.lipschitz) {
        const double o = oracle_bloch_norm(cf.f, p, default_oracle_grid(n, config.criteria.plan.max_radius()));
        OracleResult orc{"norm:" + cf.id, e.value, o, relative_discrepancy(e.value, o), kSupThreshold, false};
        orc.passed = e.value >= o - 1e-12 && orc.discrepancy <= kSupThreshold;
        r["oracle"] = to_json(orc);
        text << "  oracle grid value=" << fmt(o) << (orc.passed ? "  agrees" : "  BREACH") << "\n";
        if (!orc.passed) out.exit_code = 1;
      }
      results.push_back(std::move(r));
    }
  }
  out.json["results"] = std::move(results);
  out.csv = csv.str();
  out.text = text.str();
  return out;
}

CommandResult cmd_classify(const ExperimentConfig& config) {
  config.validate();
  const LoadedSpec spec = load(config);
  if (!spec.map) throw std::invalid_argument("classify needs a map specification");
  HoloSelfMap phi = *spec.map;
  phi = phi.with_certificate(certify_self_map(phi, config.criteria.plan));
  if (!phi.certificate().certified()) {
    throw std::invalid_argument("the map could not be certified as a self-map of the polydisk");
  }
  CommandResult out;
  out.json = header(config, "classify");
  out.json["spec"] = map_to_json(phi);
  nlohmann::json reports = nlohmann::json::array();
  std::ostringstream csv;
  std::ostringstream text;
  bool csv_header = false;
  for (const auto& e : config.exponents) {
    const CriterionReport r = classify(phi, e.p, e.q, config.criteria);
    nlohmann::json j = to_json(r);
    text << "p=" << short_fmt(e.p) << " q=" << short_fmt(e.q) << "  certificate=" << r.certificate
         << "\n  bounded: " << verdict_name(r.bounded.verdict) << " (sup " << short_fmt(r.bounded.estimate.value)
         << ", " << r.bounded.reason << ")\n  compact: " << verdict_name(r.compact) << " via " << r.compact_route;
    if (r.profile) text << " (" << r.profile->reason << ")";
    text << "\n";

    nlohmann::json extra = nlohmann::json::object();
    if (config.theorems.count("schwarz")) {
      const SupSearch s = schwarz_sup_search(phi, config.criteria.plan);
      const Trend t = classify_trend(s.level_profile, config.criteria.trend);
      extra["schwarz"] = {{"sup", finite_or_string(s.value)},
                          {"plateau", t == Trend::Plateau},
                          {"witness", point_to_json(s.witness)},
                          {"sampled_inf", schwarz_sampled_inf(phi, config.criteria.plan)}};
      text << "  schwarz expansion: sup " << short_fmt(s.value) << (t == Trend::Plateau ? " (plateau)" : "") << "\n";
    }
    if (config.theorems.count("little_bloch")) {
      const LittleBlochResult lb = little_bloch_operator_check(phi, e.p, e.q, config.little_degree, config.criteria);
      nlohmann::json gaps = nlohmann::json::array();
      for (const auto& g : lb.gaps) {
        gaps.push_back({{"gamma", g.gamma.exponents()},
                        {"m", g.m},
                        {"gap", g.gap ? nlohmann::json(*g.gap) : nlohmann::json()},
                        {"decayed", g.decayed}});
      }
      extra["little_bloch"] = {{"verdict", verdict_name(lb.verdict)},
                               {"powers", verdict_name(lb.powers)},
                               {"bounded", verdict_name(lb.bounded.verdict)},
                               {"gaps", gaps},
                               {"note", lb.note}};
      text << "  little-space check: " << verdict_name(lb.verdict) << " (" << lb.note << ")\n";
    }
    if (config.theorems.count("lipschitz")) {
      const LipschitzCheck lc = lip1_boundedness_check(phi, config.criteria);
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& c : lc.components) comps.push_back(to_json(c));
      extra["lipschitz"] = {{"verdict", verdict_name(lc.verdict)}, {"components", comps}};
      text << "  L_1 components: " << verdict_name(lc.verdict) << "\n";
    }
    if (config.theorems.count("operator_norm")) {
      const std::vector<cplx> grid{0.0, 0.5, cplx(0.0, -0.5), 0.9};
      const OperatorNormBound b = operator_norm_lower_bound(phi, e.p, e.q, grid, config.criteria);
      nlohmann::json best;
      if (b.best) {
        best = {{"family", family_name(b.best->family)}, {"l", b.best->l + 1}, {"w", complex_to_json(b.best->w)}};
      }
      extra["operator_norm"] = {{"lower_bound", b.value}, {"probes", b.probes}, {"best", best}};
      text << "  operator norm >= " << short_fmt(b.value) << "\n";
    }
    if (!extra.empty()) j["extra"] = extra;
    reports.push_back(std::move(j));

    std::istringstream rows(to_csv(r));
    std::string line;
    bool first = true;
    while (std::getline(rows, line)) {
      if (first) {
        first = false;
        if (csv_header) continue;
        csv << "p,q," << line << "\n";
        csv_header = true;
        continue;
      }
      csv << fmt(e.p) << ',' << fmt(e.q) << ',' << line << "\n";
    }
  }
  out.json["reports"] = std::move(reports);
  out.csv = csv.str();
  out.text = text.str();
  return out;
}

std::vector<VerifyRow> verify_lemmas(const Corpus& corpus, const ExperimentConfig& config) {
  std::vector<VerifyRow> rows;
  if (corpus.empty()) return rows;
  const std::size_t n = corpus.n;
  const SamplingPlan& plan = config.criteria.plan;
  const std::uint64_t seed = plan.seed;
  const auto ps = distinct_p(config);
  const double q = config.exponents.front().q;
  const auto points = sample_points(n, 200, plan.max_radius(), seed);
  const auto inner_points = sample_points(n, 50, 0.95, seed + 1);

  // Norm estimates reused by several suites.
  std::map<std::pair<std::size_t, double>, double> norm_cache;
  auto norm_of = [&](std::size_t i, double p) {
    auto key = std::make_pair(i, p);
    auto it = norm_cache.find(key);
    if (it != norm_cache.end()) return it->second;
    const double v = bloch_norm_estimate(corpus.functions[i].f, BlochParams(p), plan).value;
    norm_cache.emplace(key, v);
    return v;
  };

  {
    RowBuilder row("pointeval_bound");
    for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
      const auto& cf = corpus.functions[i];
      for (double p : ps) {
        const double m = norm_of(i, p);
        for (const auto& z : points) {
          const double lhs = std::abs(cf.f.value(z));
          const double rhs = pointeval_bound(BlochParams(p), n, z) * m * (1.0 + 1e-3);
          row.check(lhs, rhs, cf.id + " p=" + short_fmt(p) + " z=" + point_text(z));
        }
      }
    }
    row.finish(rows);
  }

  {
    RowBuilder row("l1_l2_sandwich");
    const double root_n = std::sqrt(static_cast<double>(n));
    for (const auto& cf : corpus.functions) {
      for (const auto& z : points) {
        const double qf = timoney_q(cf.f, z);
        const double d = bloch_density(cf.f, BlochParams(1.0), z);
        const double tol = 1e-12 * std::max(1.0, d);
        row.check(qf, d + tol, cf.id + " lower z=" + point_text(z));
        row.check(d, root_n * qf + tol, cf.id + " upper z=" + point_text(z));
      }
    }
    row.finish(rows);
  }

  for (double p : ps) {
    if (!(p < 1.0)) continue;
    RowBuilder row("hardy_littlewood_band p=" + short_fmt(p));
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {0.0, 0.0};
    std::size_t count = 0;
    for (int d = 0; d < 2; ++d) {
      const SamplingPlan pl = d ? plan.doubled() : plan;
      for (const auto& cf : corpus.functions) {
        const Polynomial* poly = cf.f.as_polynomial();
        if (!poly || poly->degree() < 1) continue;
        const double lip = lipschitz_norm_estimate(cf.f, p, pl).value;
        const double bloch = bloch_norm_estimate(cf.f, BlochParams(1.0 - p), pl).value;
        const double r = lip / bloch;
        lo[d] = std::min(lo[d], r);
        hi[d] = std::max(hi[d], r);
        if (d == 0) ++count;
      }
    }
    if (count > 0) {
      const double move = std::max(std::abs(lo[1] - lo[0]) / lo[0], std::abs(hi[1] - hi[0]) / hi[0]);
      row.check(move, 0.1, "band [" + short_fmt(lo[0]) + ", " + short_fmt(hi[0]) + "] -> [" + short_fmt(lo[1]) +
                               ", " + short_fmt(hi[1]) + "]");
      row.check(0.0, lo[0], "band lower endpoint must be positive");
      row.note("band [" + short_fmt(lo[0]) + ", " + short_fmt(hi[0]) + "] over " + std::to_string(count) +
               " polynomials; doubled plan [" + short_fmt(lo[1]) + ", " + short_fmt(hi[1]) + "]");
    }
    row.finish(rows);
  }

  {
    RowBuilder bound_row("test_family_norm_bound");
    RowBuilder identity_row("f_family_density_identity");
    RowBuilder tail_row("truncation_tail");
    RowBuilder decay_row("truncation_decay");
    for (const auto& cf : corpus.functions) {
      const auto spec = test_spec_of(cf.f);
      if (!spec) continue;
      const double p = spec->p;
      const double est = bloch_norm_estimate(cf.f, BlochParams(p), plan).value;
      bound_row.check(est, family_norm_bound(spec->family, p) + 1e-9, cf.id + " p=" + short_fmt(p));
      if (spec->family == Family::F) {
        const std::vector<cplx> origin(n);
        for (const auto& z : points) {
          const double lhs = std::abs(cf.f.value(origin)) + bloch_density(cf.f, BlochParams(p), z);
          const cplx zl = z[spec->l];
          const double rhs = std::pow(1.0 - std::norm(zl), p) / std::pow(std::abs(1.0 - std::conj(spec->w) * zl), p);
          identity_row.check(relative_discrepancy(lhs, rhs), 1e-12, cf.id + " z=" + point_text(z));
        }
      }
      // The displayed tail bounds the residual exactly for F, and for G when p >= 1;
      // elsewhere only the decay in m is checked.
      const bool exact = spec->family == Family::F || (spec->family == Family::G && p >= 1.0);
      double prev = std::numeric_limits<double>::infinity();
      double first = 0.0;
      for (int m : {2, 4, 8, 16}) {
        const HoloFunction residual = cf.f - HoloFunction::polynomial(truncate_test(*spec, m));
        const double gap = bloch_norm_estimate(residual, BlochParams(p), plan).value;
        const std::string w = cf.id + " m=" + std::to_string(m);
        if (exact) {
          tail_row.check(gap, tail_bound(p, spec->w, m) + 1e-6, w);
        } else {
          decay_row.check(gap, prev, w + " (must not increase)");
        }
        if (m == 2) first = gap;
        prev = gap;
      }
      if (!exact) decay_row.check(prev, 0.5 * first, cf.id + " m=16 vs m=2");
    }
    bound_row.finish(rows);
    identity_row.finish(rows);
    tail_row.finish(rows);
    decay_row.note("residuals of G (p < 1) and H are only required to shrink as m grows");
    decay_row.finish(rows);
  }

  {
    RowBuilder row("schwarz_expansion_plateau");
    std::string plateaus;
    for (const auto& cm : corpus.maps) {
      const SupSearch s = schwarz_sup_search(cm.phi, plan);
      const Trend t = classify_trend(s.level_profile, config.criteria.trend);
      row.check(t == Trend::Plateau ? 0.0 : 1.0, 0.0, cm.id + " sup profile has no plateau");
      plateaus += (plateaus.empty() ? "" : ", ") + cm.id + "=" + short_fmt(s.value);
    }
    row.note("measured plateaus: " + plateaus);
    row.finish(rows);
  }

  {
    RowBuilder row("automorphism_metric_equality");
    for (const auto& cm : corpus.maps) {
      if (cm.phi.certificate().kind != Certificate::Kind::Automorphism) continue;
      for (const auto& z : points) {
        row.check(std::abs(schwarz_expansion_sup(cm.phi, z) - 1.0), 1e-9, cm.id + " sup z=" + point_text(z));
        row.check(std::abs(schwarz_expansion_inf(cm.phi, z) - 1.0), 1e-9, cm.id + " inf z=" + point_text(z));
      }
    }
    row.finish(rows);
  }

  {
    RowBuilder row("row_decomposition");
    for (const auto& cm : corpus.maps) {
      for (const auto& e : config.exponents) {
        for (const auto& z : points) {
          const double total = criterion_density(cm.phi, e.p, e.q, z);
          double sum = 0.0;
          for (std::size_t l = 0; l < n; ++l) sum += coordinate_density(cm.phi, e.p, e.q, l, z);
          row.check(std::abs(total - sum), 1e-12 * std::max(1.0, total), cm.id + " z=" + point_text(z));
        }
      }
    }
    row.finish(rows);
  }

  {
    RowBuilder row("chain_rule_domination");
    RowBuilder fd_row("chain_rule_consistency");
    const double p = ps.front();
    const std::vector<cplx> origin(n);
    for (std::size_t i = 0; i < corpus.functions.size(); ++i) {
      const auto& cf = corpus.functions[i];
      const double m = norm_of(i, p);
      const double f0 = std::abs(cf.f.value(origin));
      for (const auto& cm : corpus.maps) {
        const HoloFunction composed = compose(cf.f, cm.phi, config.degree_cap);
        std::vector<cplx> g(n);
        for (const auto& z : inner_points) {
          const std::vector<cplx> image = cm.phi(PolydiskPoint(z));
          const double pointwise = f0 + bloch_density(cf.f, BlochParams(p), image);
          const double lhs = bloch_density(composed, BlochParams(q), z);
          const double rhs = std::max(m, pointwise) * criterion_density(cm.phi, p, q, z) * (1.0 + 1e-3);
          const std::string w = cf.id + " o " + cm.id + " z=" + point_text(z);
          row.check(lhs, rhs, w);
          composed.gradient(z, g);
          fd_row.check(gradient_discrepancy(g, fd_gradient(composed, z), 1e-6), kDerivativeThreshold, w);
        }
      }
    }
    row.finish(rows);
    fd_row.finish(rows);
  }

  for (double p : ps) {
    if (!(p < 1.0)) continue;
    RowBuilder row("small_p_large_q_decay p=" + short_fmt(p));
    for (const auto& cm : corpus.maps) {
      for (double qq : {1.0, 2.0}) {
        std::vector<BoundaryPath> paths;
        for (std::size_t l = 0; l < n; ++l) {
          auto pl = default_paths(cm.phi, BoundaryPath::Mode::CoordinateToOne, l, config.criteria);
          paths.insert(paths.end(), pl.begin(), pl.end());
        }
        const auto prof = compactness_profile(cm.phi, p, qq, paths, ProfileMode::PerCoordinate, config.criteria);
        row.check(prof.verdict == Verdict::Holds ? 0.0 : 1.0, 0.0,
                  cm.id + " q=" + short_fmt(qq) + ": " + prof.reason);
      }
    }
    row.finish(rows);
  }

  {
    RowBuilder row("schwarz_floor_not_compact");
    for (const auto& cm : corpus.maps) {
      const double inf = schwarz_sampled_inf(cm.phi, plan);
      if (!(inf >= config.criteria.schwarz_floor)) continue;
      const auto paths = default_paths(cm.phi, BoundaryPath::Mode::ImageToBoundary, 0, config.criteria);
      const auto prof = compactness_profile(cm.phi, 1.0, 1.0, paths, ProfileMode::Global, config.criteria);
      row.check(prof.verdict == Verdict::Fails ? 0.0 : 1.0, 0.0,
                cm.id + " sampled inf " + short_fmt(inf) + " but profile " + verdict_name(prof.verdict));
    }
    row.finish(rows);
  }
  return rows;
}

CommandResult cmd_verify_lemmas(const ExperimentConfig& config) {
  config.validate();
  return cmd_verify_lemmas(config, default_corpus(config.n, distinct_p(config).front(), config.seed()));
}

CommandResult cmd_verify_lemmas(const ExperimentConfig& config, const Corpus& corpus) {
  const auto rows = verify_lemmas(corpus, config);
  CommandResult out;
  out.json = header(config, "verify-lemmas");
  out.json["n"] = corpus.n;
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "suite,checks,failures,worst_slack,passed\n";
  for (const auto& r : rows) {
    arr.push_back({{"suite", r.suite},
                   {"checks", r.checks},
                   {"failures", r.failures},
                   {"worst_slack", finite_or_string(r.worst_slack)},
                   {"witness", r.witness},
                   {"note", r.note},
                   {"passed", r.passed}});
    csv << r.suite << ',' << r.checks << ',' << r.failures << ',' << fmt(r.worst_slack) << ','
        << (r.passed ? "true" : "false") << "\n";
    if (!r.passed) out.exit_code = 1;
  }
  out.json["rows"] = std::move(arr);
  out.csv = csv.str();
  out.text = verify_table(rows);
  return out;
}

std::vector<OracleResult> run_oracle(const Corpus& corpus, const ExperimentConfig& config) {
  std::vector<OracleResult> out;
  const std::size_t n = corpus.n;
  const SamplingPlan& plan = config.criteria.plan;
  const auto points = sample_points(n, 50, 0.95, plan.seed + 2);
  const double p = config.exponents.front().p;
  const UniformGrid grid = default_oracle_grid(n, plan.max_radius());

  for (const auto& cf : corpus.functions) {
    OracleResult partial{"partial:" + cf.id, 0, 0, 0, kDerivativeThreshold, false};
    OracleResult density{"density:" + cf.id, 0, 0, 0, kDerivativeThreshold, false};
    std::vector<cplx> g(n);
    for (const auto& z : points) {
      cf.f.gradient(z, g);
      const auto fd = fd_gradient(cf.f, z);
      const double d = gradient_discrepancy(g, fd, 1e-300);
      if (d >= partial.discrepancy) {
        double a = 0.0;
        double b = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          a += std::norm(g[k]);
          b += std::norm(fd[k]);
        }
        partial.primary = std::sqrt(a);
        partial.oracle = std::sqrt(b);
        partial.discrepancy = d;
      }
      const double dp = bloch_density(cf.f, BlochParams(p), z);
      const double dor = oracle_bloch_density(cf.f, p, z);
      if (relative_discrepancy(dp, dor) >= density.discrepancy) {
        density.primary = dp;
        density.oracle = dor;
        density.discrepancy = relative_discrepancy(dp, dor);
      }
    }
    partial.passed = partial.discrepancy <= partial.threshold;
    density.passed = density.discrepancy <= density.threshold;
    out.push_back(partial);
    out.push_back(density);

    OracleResult norm{"norm:" + cf.id, 0, 0, 0, kSupThreshold, false};
    norm.primary = bloch_norm_estimate(cf.f, BlochParams(p), plan).value;
    norm.oracle = oracle_bloch_norm(cf.f, p, grid);
    norm.discrepancy = relative_discrepancy(norm.primary, norm.oracle);
    norm.passed = norm.primary >= norm.oracle - 1e-12 && norm.discrepancy <= norm.threshold;
    out.push_back(norm);

    OracleResult tq{"timoney:" + cf.id, 0, 0, 0, kSupThreshold, true};
    for (std::size_t i = 0; i < 8; ++i) {
      const double a = timoney_q(cf.f, points[i]);
      const double b = oracle_timoney_q(cf.f, points[i], 2000, plan.seed + i);
      const double d = relative_discrepancy(a, b);
      const bool ok = b <= a * (1.0 + 1e-6) + 1e-12 && d <= kSupThreshold;
      if (d >= tq.discrepancy || !ok) {
        tq.primary = a;
        tq.oracle = b;
        tq.discrepancy = d;
      }
      tq.passed = tq.passed && ok;
    }
    out.push_back(tq);

    if (const auto spec = test_spec_of(cf.f); spec && spec->family == Family::F) {
      OracleResult cfm{"f_closed_form:" + cf.id, 0, 0, 0, 1e-10, false};
      for (const auto& z : points) {
        const cplx a = cf.f.value(z);
        const cplx b = f_family_closed_form(spec->w, spec->p, z[spec->l]);
        const double d = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        if (d >= cfm.discrepancy) {
          cfm.primary = std::abs(a);
          cfm.oracle = std::abs(b);
          cfm.discrepancy = d;
        }
      }
      cfm.passed = cfm.discrepancy <= cfm.threshold;
      out.push_back(cfm);
    }
  }

  for (const auto& cm : corpus.maps) {
    OracleResult jac{"jacobian:" + cm.id, 0, 0, 0, kDerivativeThreshold, false};
    OracleResult dens{"criterion_density:" + cm.id, 0, 0, 0, kDerivativeThreshold, false};
    const double q = config.exponents.front().q;
    std::vector<cplx> g(n);
    for (const auto& z : points) {
      double oracle_density = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        const HoloFunction& f = cm.phi.component(l);
        f.gradient(z, g);
        const auto fd = fd_gradient(f, z);
        const double d = gradient_discrepancy(g, fd, 1e-300);
        if (d >= jac.discrepancy) {
          jac.discrepancy = d;
          jac.primary = std::abs(g[0]);
          jac.oracle = std::abs(fd[0]);
        }
        const double v = std::abs(f.value(z));
        double row = 0.0;
        for (std::size_t k = 0; k < n; ++k) row += std::abs(fd[k]) * std::pow(1.0 - std::norm(z[k]), q);
        if (row > 0.0) oracle_density += row / std::pow(1.0 - v * v, p);
      }
      const double primary = criterion_density(cm.phi, p, q, z);
      if (relative_discrepancy(primary, oracle_density) >= dens.discrepancy) {
        dens.primary = primary;
        dens.oracle = oracle_density;
        dens.discrepancy = relative_discrepancy(primary, oracle_density);
      }
    }
    jac.passed = jac.discrepancy <= jac.threshold;
    dens.passed = dens.discrepancy <= dens.threshold;
    out.push_back(jac);
    out.push_back(dens);
  }
  return out;
}

CommandResult cmd_oracle(const ExperimentConfig& config) {
  config.validate();
  if (config.spec_path) {
    const LoadedSpec spec = load(config);
    Corpus c;
    if (spec.function) {
      c.n = spec.function->dimension();
      c.functions.push_back({"f", *spec.function});
    } else {
      c.n = spec.map->dimension();
      HoloSelfMap phi = spec.map->with_certificate(certify_self_map(*spec.map, config.criteria.plan));
      if (!phi.certificate().certified()) {
        throw std::invalid_argument("the map could not be certified as a self-map of the polydisk");
      }
      for (std::size_t l = 0; l < c.n; ++l) c.functions.push_back({"phi" + std::to_string(l + 1), phi.component(l)});
      c.maps.push_back({"phi", phi});
    }
    return cmd_oracle(config, c);
  }
  return cmd_oracle(config, default_corpus(config.n, config.exponents.front().p, config.seed()));
}

CommandResult cmd_oracle(const ExperimentConfig& config, const Corpus& corpus) {
  const auto results = run_oracle(corpus, config);
  CommandResult out;
  out.json = header(config, "oracle");
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream csv;
  std::ostringstream text;
  csv << "quantity,primary,oracle,discrepancy,threshold,passed\n";
  std::size_t breaches = 0;
  for (const auto& r : results) {
    arr.push_back(to_json(r));
    csv << r.quantity << ',' << fmt(r.primary) << ',' << fmt(r.oracle) << ',' << fmt(r.discrepancy) << ','
        << fmt(r.threshold) << ',' << (r.passed ? "true" : "false") << "\n";
    if (!r.passed) {
      ++breaches;
      text << "BREACH " << r.quantity << ": primary " << fmt(r.primary) << " oracle " << fmt(r.oracle)
           << " discrepancy " << short_fmt(r.discrepancy) << " > " << short_fmt(r.threshold) << "\n";
    }
  }
  text << results.size() << " comparisons, " << breaches << " breaches\n";
  out.json["results"] = std::move(arr);
  out.json["breaches"] = breaches;
  out.csv = csv.str();
  out.text = text.str();
  out.exit_code = breaches ? 1 : 0;
  return out;
}

CommandResult cmd_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<CorpusMap> maps;
  if (config.spec_path) {
    const LoadedSpec spec = load(config);
    if (!spec.map) throw std::invalid_argument("sweep needs a map specification");
    maps.push_back({"spec", *spec.map});
  } else {
    maps.push_back({"identity", HoloSelfMap::identity(config.n)});
    std::vector<HoloFunction> half;
    for (std::size_t l = 0; l < config.n; ++l) half.push_back(0.5 * HoloFunction::coordinate(config.n, l));
    maps.push_back({"half", HoloSelfMap(std::move(half))});
  }
  return cmd_sweep(config, maps);
}

CommandResult cmd_sweep(const ExperimentConfig& config, const std::vector<CorpusMap>& maps) {
  CommandResult out;
  out.json = header(config, "sweep");
  std::ostringstream csv;
  std::ostringstream text;
  csv << kSweepHeader << "\n";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& cm : maps) {
    HoloSelfMap phi = cm.phi.with_certificate(certify_self_map(cm.phi, config.criteria.plan));
    if (!phi.certificate().certified()) throw std::invalid_argument("map '" + cm.id + "' could not be certified");
    const ImageBound ib = image_bound(phi, config.criteria);
    const double radius = *std::max_element(ib.sup.begin(), ib.sup.end());
    for (double p : config.sweep_p) {
      for (double q : config.sweep_q) {
        const CriterionReport r = classify(phi, p, q, config.criteria);
        csv << cm.id << ',' << fmt(p) << ',' << fmt(q) << ',' << fmt(radius) << ',' << verdict_name(r.bounded.verdict)
            << ',' << (std::isfinite(r.bounded.estimate.value) ? fmt(r.bounded.estimate.value) : "inf") << ','
            << verdict_name(r.compact) << ',' << r.compact_route << "\n";
        arr.push_back({{"map_id", cm.id},
                       {"p", p},
                       {"q", q},
                       {"image_radius", radius},
                       {"bounded_verdict", verdict_name(r.bounded.verdict)},
                       {"bounded_sup", finite_or_string(r.bounded.estimate.value)},
                       {"compact_verdict", verdict_name(r.compact)},
                       {"compact_route", r.compact_route}});
        text << cm.id << " p=" << short_fmt(p) << " q=" << short_fmt(q) << "  bounded " << verdict_name(r.bounded.verdict)
             << "  compact " << verdict_name(r.compact) << " (" << r.compact_route << ")\n";
      }
    }
  }
  out.json["rows"] = std::move(arr);
  out.csv = csv.str();
  out.text = text.str();
  return out;
}

}  // namespace blochlab
