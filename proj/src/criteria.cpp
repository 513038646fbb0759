#include "blochlab/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "blochlab/json_io.hpp"

namespace blochlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPathFinalDistance = 1e-4;
constexpr std::size_t kPathMinPoints = 8;

void check_exponents(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw std::invalid_argument("exponents p and q must be positive");
  }
}

void check_point(const HoloSelfMap& phi, std::span<const cplx> z) {
  if (z.size() != phi.dimension()) throw DimensionError("criterion: dimension mismatch");
  for (const cplx& c : z) {
    if (!(std::abs(c) < 1.0)) throw DomainError("criterion: point must lie in the open polydisk");
  }
}

double power(double x, double e) { return e == 1.0 ? x : std::pow(x, e); }

// Row sums of the criterion density for rows [first, last). Rows whose
// gradient vanishes contribute 0 without looking at the image; escaping rows
// either throw or make the result infinite.
double density_rows(const HoloSelfMap& phi, double p, double q, std::span<const cplx> z, std::size_t first,
                    std::size_t last, bool throw_on_escape) {
  const std::size_t n = phi.dimension();
  std::array<double, kMaxDim> wq{};
  for (std::size_t k = 0; k < n; ++k) wq[k] = power(one_minus_abs2(z[k]), q);
  std::array<cplx, kMaxDim> g{};
  double s = 0.0;
  for (std::size_t l = first; l < last; ++l) {
    const HoloFunction& f = phi.component(l);
    f.gradient(z, std::span<cplx>(g.data(), n));
    double row = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (g[k] != cplx{}) row += std::abs(g[k]) * wq[k];
    }
    if (row == 0.0) continue;
    const double gap = f.gap(z);
    if (!(gap > 0.0)) {
      if (throw_on_escape) throw SingularEvaluation("criterion: |phi_" + std::to_string(l + 1) + "(z)| >= 1");
      return kInf;
    }
    s += row / power(gap, p);
  }
  return s;
}

double density_or_inf(const HoloSelfMap& phi, double p, double q, std::span<const cplx> z) {
  return density_rows(phi, p, q, z, 0, phi.dimension(), false);
}

double row_or_inf(const HoloSelfMap& phi, double p, double q, std::size_t l, std::span<const cplx> z) {
  return density_rows(phi, p, q, z, l, l + 1, false);
}

// Boundary level of z: ceil(-log2(1 - max_k |z_k|)), clamped to [0, max_level].
std::size_t level_of_point(std::span<const cplx> z, int max_level) {
  double r = 0.0;
  for (const cplx& c : z) r = std::max(r, std::abs(c));
  if (r >= 1.0) return static_cast<std::size_t>(max_level);
  const double s = std::ceil(-std::log2(1.0 - r) - 1e-9);
  return static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(max_level)));
}

bool is_constant_map(const HoloSelfMap& phi) {
  return std::all_of(phi.components().begin(), phi.components().end(), [](const HoloFunction& f) {
    const Polynomial* p = f.as_polynomial();
    return p && p->degree() == 0;
  });
}

Eigen::MatrixXcd weighted_jacobian(const HoloSelfMap& phi, std::span<const cplx> z) {
  check_point(phi, z);
  const std::size_t n = phi.dimension();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<cplx> g(n);
  for (std::size_t l = 0; l < n; ++l) {
    const HoloFunction& f = phi.component(l);
    f.gradient(z, g);
    const double gap = f.gap(z);
    const bool flat = std::all_of(g.begin(), g.end(), [](cplx c) { return c == cplx{}; });
    if (!(gap > 0.0) && !flat) throw SingularEvaluation("weighted Jacobian: component left the disk");
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) =
          flat ? cplx{} : g[k] * (one_minus_abs2(z[k]) / gap);
    }
  }
  return m;
}

Eigen::VectorXd singular_values(const HoloSelfMap& phi, std::span<const cplx> z) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weighted_jacobian(phi, z));
  return svd.singularValues();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Verdict judge_tail(const std::vector<double>& v, const CriteriaConfig& c) {
  if (v.empty()) return Verdict::Inconclusive;
  const std::size_t len = std::min(c.tail_length, v.size());
  const std::size_t start = v.size() - len;
  double tail_min = kInf;
  bool nonincreasing = true;
  for (std::size_t i = start; i < v.size(); ++i) {
    tail_min = std::min(tail_min, v[i]);
    if (i > start && v[i] > v[i - 1] * (1.0 + 1e-12)) nonincreasing = false;
  }
  if (nonincreasing && v.back() < c.decay_tol) return Verdict::Holds;
  // Path points sit at dyadic distances, so a power law d^a shows up as a
  // constant ratio 2^-a between neighbours: slow, but still decay to zero.
  if (len >= 3 && tail_min > 0.0) {
    double lo = kInf;
    double hi = 0.0;
    for (std::size_t i = start + 1; i < v.size(); ++i) {
      lo = std::min(lo, v[i] / v[i - 1]);
      hi = std::max(hi, v[i] / v[i - 1]);
    }
    if (hi <= c.power_decay_ratio && hi <= lo * c.power_decay_spread) return Verdict::Holds;
  }
  if (tail_min >= c.persist_floor) return Verdict::Fails;
  return Verdict::Inconclusive;
}

nlohmann::json estimate_json(const NormEstimate& e) {
  nlohmann::json j = to_json(e);
  // Infinite sups (escaping images) are not representable in JSON numbers.
  if (!std::isfinite(e.value)) j["value"] = "inf";
  return j;
}

// Runs body(i) for i in [0, count) on OpenMP threads; the first exception is
// rethrown afterwards.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(blochlab_criteria_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "Holds";
    case Verdict::Fails:
      return "Fails";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::string mode_name(BoundaryPath::Mode m) {
  return m == BoundaryPath::Mode::ImageToBoundary ? "ImageToBoundary" : "CoordinateToOne";
}

double criterion_density(const HoloSelfMap& phi, double p, double q, std::span<const cplx> z) {
  check_exponents(p, q);
  check_point(phi, z);
  return density_rows(phi, p, q, z, 0, phi.dimension(), true);
}

double criterion_density(const HoloSelfMap& phi, double p, double q, const PolydiskPoint& z) {
  return criterion_density(phi, p, q, z.span());
}

double coordinate_density(const HoloSelfMap& phi, double p, double q, std::size_t l, std::span<const cplx> z) {
  check_exponents(p, q);
  check_point(phi, z);
  if (l >= phi.dimension()) throw std::out_of_range("coordinate_density: component index out of range");
  return density_rows(phi, p, q, z, l, l + 1, true);
}

double coordinate_density(const HoloSelfMap& phi, double p, double q, std::size_t l, const PolydiskPoint& z) {
  return coordinate_density(phi, p, q, l, z.span());
}

double approach_distance(const HoloSelfMap& phi, const BoundaryPath& path, std::span<const cplx> z) {
  auto distance = [&](std::size_t l) {
    const HoloFunction& f = phi.component(l);
    const double v = std::abs(f.value(z));
    return f.gap(z) / (1.0 + v);
  };
  if (path.mode == BoundaryPath::Mode::CoordinateToOne) return distance(path.l);
  double d = kInf;
  for (std::size_t l = 0; l < phi.dimension(); ++l) d = std::min(d, distance(l));
  return d;
}

void validate_path(const HoloSelfMap& phi, const BoundaryPath& path) {
  const std::string who = "path '" + path.id + "': ";
  if (path.mode == BoundaryPath::Mode::CoordinateToOne && path.l >= phi.dimension()) {
    throw std::invalid_argument(who + "component index out of range");
  }
  if (path.points.size() < kPathMinPoints) throw std::invalid_argument(who + "needs at least 8 points");
  double prev = kInf;
  for (const auto& z : path.points) {
    check_point(phi, z);
    const double d = approach_distance(phi, path, z);
    if (d > prev) throw std::invalid_argument(who + "approach is not monotone");
    prev = d;
  }
  if (prev > kPathFinalDistance) throw std::invalid_argument(who + "does not get within 1e-4 of the boundary");
}

std::vector<BoundaryPath> default_paths(const HoloSelfMap& phi, BoundaryPath::Mode mode, std::size_t l,
                                        const CriteriaConfig& config, const std::vector<cplx>& through) {
  const std::size_t n = phi.dimension();
  if (mode == BoundaryPath::Mode::CoordinateToOne && l >= n) {
    throw std::out_of_range("default_paths: component index out of range");
  }
  const std::string prefix = mode == BoundaryPath::Mode::CoordinateToOne ? "phi" + std::to_string(l + 1) + "_" : "";
  struct Ray {
    std::string id;
    std::vector<cplx> zeta;
  };
  std::vector<Ray> rays;
  const int r = config.rays_per_coordinate;
  for (std::size_t k = 0; k < n; ++k) {
    for (int j = 0; j < r; ++j) {
      std::vector<cplx> zeta(n);
      zeta[k] = std::polar(1.0, 2.0 * std::numbers::pi * j / r);
      rays.push_back({prefix + "coord" + std::to_string(k + 1) + "_ray" + std::to_string(j), std::move(zeta)});
    }
  }
  if (n > 1) {
    for (int j = 0; j < r; ++j) {
      rays.push_back({prefix + "diagonal_ray" + std::to_string(j),
                      std::vector<cplx>(n, std::polar(1.0, 2.0 * std::numbers::pi * j / r))});
    }
  }
  if (through.size() == n) {
    double m = 0.0;
    for (const cplx& c : through) m = std::max(m, std::abs(c));
    if (m > 0.0) {
      std::vector<cplx> zeta(through);
      for (cplx& c : zeta) c /= m;
      rays.push_back({prefix + "witness_ray", std::move(zeta)});
    }
  }

  const double t_max = 1.0 - std::ldexp(1.0, -45);
  std::vector<std::optional<BoundaryPath>> built(rays.size());
  parallel_for(rays.size(), [&](std::size_t i) {
    BoundaryPath path;
    path.id = rays[i].id;
    path.mode = mode;
    path.l = l;
    std::vector<cplx> z(n);
    auto at = [&](double t) {
      for (std::size_t k = 0; k < n; ++k) z[k] = t * rays[i].zeta[k];
      return approach_distance(phi, path, z);
    };
    try {
      const double d_end = at(t_max);
      if (!(d_end <= kPathFinalDistance)) return;
      double lo = 0.0;
      double d_lo = at(lo);
      for (int j = 1; j <= config.path_depth; ++j) {
        const double target = std::ldexp(1.0, -j);
        if (d_lo <= target) continue;
        if (d_end > target) break;
        double hi = t_max;
        double a = lo;
        for (int it = 0; it < 64 && hi - a > 0.0; ++it) {
          const double mid = 0.5 * (a + hi);
          if (mid == a || mid == hi) break;
          if (at(mid) > target) {
            a = mid;
          } else {
            hi = mid;
          }
        }
        d_lo = at(hi);
        lo = hi;
        path.points.push_back(z);
      }
      validate_path(phi, path);
      built[i] = std::move(path);
    } catch (const std::exception&) {
      // Rays along which the map cannot be evaluated or that fail validation
      // are not usable probes.
    }
  });
  std::vector<BoundaryPath> out;
  for (auto& b : built) {
    if (b) out.push_back(std::move(*b));
  }
  return out;
}

BoundednessResult boundedness_check(const HoloSelfMap& phi, double p, double q, const CriteriaConfig& config) {
  check_exponents(p, q);
  const std::size_t n = phi.dimension();
  BoundednessResult out;
  if (is_constant_map(phi)) {
    out.verdict = Verdict::Holds;
    out.trend = Trend::Plateau;
    out.estimate.witness.assign(n, cplx{});
    out.estimate.trace = {0.0};
    out.estimate.level_profile.assign(static_cast<std::size_t>(config.plan.radial_levels) + 1, 0.0);
    out.estimate.converged = true;
    out.reason = "constant map: the criterion density vanishes";
    return out;
  }

  auto sup = search_supremum([&](std::span<const cplx> z) { return density_or_inf(phi, p, q, z); }, n, config.plan);
  std::vector<double> profile = sup.level_profile;
  double best = sup.value;
  std::vector<cplx> witness = sup.witness;
  std::size_t evaluations = sup.evaluations;

  // Densities along rays whose images approach the boundary, binned by the
  // boundary level of the sample point (deeper points join the last level).
  const auto paths = default_paths(phi, BoundaryPath::Mode::ImageToBoundary, 0, config, sup.witness);
  const int max_level = config.plan.radial_levels;
  std::vector<double> per_level(profile.size(), -kInf);
  for (const auto& path : paths) {
    for (const auto& z : path.points) {
      const double d = density_or_inf(phi, p, q, z);
      ++evaluations;
      const std::size_t lvl = level_of_point(z, max_level);
      per_level[lvl] = std::max(per_level[lvl], d);
      if (d > best) {
        best = d;
        witness = z;
      }
    }
  }
  double running = -kInf;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    running = std::max({running, profile[i], per_level[i]});
    profile[i] = running;
  }

  out.estimate.value = best;
  out.estimate.witness = witness;
  out.estimate.trace = sup.trace;
  if (best > out.estimate.trace.back()) out.estimate.trace.push_back(best);
  out.estimate.level_profile = profile;
  out.estimate.converged = sup.converged;
  out.estimate.evaluations = evaluations;

  if (!std::isfinite(best)) {
    out.verdict = Verdict::Fails;
    out.trend = Trend::Divergent;
    out.reason = "some component reaches the unit circle where the map is not flat";
    return out;
  }
  out.trend = classify_trend(profile, config.trend);
  switch (out.trend) {
    case Trend::Plateau:
      out.verdict = Verdict::Holds;
      out.reason = "boundary-level profile reaches a plateau";
      break;
    case Trend::Divergent:
      out.verdict = Verdict::Fails;
      out.reason = "boundary-level profile keeps growing";
      break;
    case Trend::Undetermined:
      out.verdict = Verdict::Inconclusive;
      out.reason = "boundary-level profile neither settles nor diverges";
      break;
  }
  return out;
}

bool ImageBound::all_strict() const {
  return std::all_of(strict.begin(), strict.end(), [](bool b) { return b; });
}

ImageBound image_bound(const HoloSelfMap& phi, const CriteriaConfig& config) {
  const std::size_t n = phi.dimension();
  ImageBound out;
  out.sup.resize(n);
  out.strict.resize(n);
  const double limit = 1.0 - config.image_margin;
  for (std::size_t l = 0; l < n; ++l) {
    const HoloFunction& f = phi.component(l);
    if (const Polynomial* poly = f.as_polynomial()) {
      const double l1 = poly->coefficient_l1();
      if (l1 < limit) {
        out.sup[l] = l1;
        out.strict[l] = true;
        continue;
      }
    }
    auto s = search_supremum([&f](std::span<const cplx> z) { return std::abs(f.value(z)); }, n, config.plan);
    out.sup[l] = s.value;
    out.strict[l] = s.value < limit;
  }
  return out;
}

CompactnessResult compactness_profile(const HoloSelfMap& phi, double p, double q,
                                      const std::vector<BoundaryPath>& paths, ProfileMode mode,
                                      const CriteriaConfig& config) {
  check_exponents(p, q);
  const std::size_t n = phi.dimension();
  const auto wanted = mode == ProfileMode::Global ? BoundaryPath::Mode::ImageToBoundary
                                                  : BoundaryPath::Mode::CoordinateToOne;
  for (const auto& path : paths) {
    if (path.mode != wanted) {
      throw std::invalid_argument("path '" + path.id + "' does not match the profile mode");
    }
    validate_path(phi, path);
  }

  CompactnessResult out;
  out.tables.resize(paths.size());
  parallel_for(paths.size(), [&](std::size_t i) {
    PathTable& t = out.tables[i];
    t.path = paths[i];
    for (const auto& z : t.path.points) {
      t.distance.push_back(approach_distance(phi, t.path, z));
      t.density.push_back(mode == ProfileMode::Global ? density_or_inf(phi, p, q, z)
                                                      : row_or_inf(phi, p, q, t.path.l, z));
    }
    t.verdict = judge_tail(t.density, config);
  });

  // Components (or the whole map) with no probing path.
  std::vector<bool> covered(n, false);
  bool any_path = !paths.empty();
  for (const auto& path : paths) covered[path.l] = true;
  bool vacuous_ok = true;
  bool needs_vacuous = mode == ProfileMode::Global ? !any_path
                                                   : std::find(covered.begin(), covered.end(), false) != covered.end();
  if (needs_vacuous) {
    const ImageBound ib = image_bound(phi, config);
    for (std::size_t l = 0; l < n; ++l) {
      if (mode == ProfileMode::PerCoordinate && covered[l]) continue;
      if (!ib.strict[l]) vacuous_ok = false;
    }
  }

  const PathTable* failing = nullptr;
  bool all_hold = true;
  for (const auto& t : out.tables) {
    if (t.verdict == Verdict::Fails && !failing) failing = &t;
    if (t.verdict != Verdict::Holds) all_hold = false;
  }
  if (failing) {
    out.verdict = Verdict::Fails;
    out.reason = "density stays at " + fmt(failing->density.back()) + " along " + failing->path.id;
  } else if (!vacuous_ok) {
    out.verdict = Verdict::Inconclusive;
    out.reason = "no probing ray realizes the boundary approach although the image reaches the unit circle";
  } else if (all_hold) {
    out.verdict = Verdict::Holds;
    out.vacuous = needs_vacuous && paths.empty();
    out.reason = out.vacuous ? "every component stays inside the disk; the limit condition is vacuous"
                             : "density decays along every probing path";
  } else {
    out.verdict = Verdict::Inconclusive;
    out.reason = "some path tails neither decay nor persist";
  }
  return out;
}

double schwarz_expansion_sup(const HoloSelfMap& phi, std::span<const cplx> z) {
  const Eigen::VectorXd s = singular_values(phi, z);
  return s(0) * s(0);
}

double schwarz_expansion_inf(const HoloSelfMap& phi, std::span<const cplx> z) {
  const Eigen::VectorXd s = singular_values(phi, z);
  const double m = s(s.size() - 1);
  return m * m;
}

double schwarz_expansion_sup(const HoloSelfMap& phi, const PolydiskPoint& z) {
  return schwarz_expansion_sup(phi, z.span());
}

double schwarz_expansion_inf(const HoloSelfMap& phi, const PolydiskPoint& z) {
  return schwarz_expansion_inf(phi, z.span());
}

const VerdictEntry* CriterionReport::find(const std::string& id) const {
  for (const auto& v : verdicts) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

namespace {

nlohmann::json profile_summary(const CompactnessResult& c) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& t : c.tables) {
    const std::size_t len = std::min<std::size_t>(4, t.density.size());
    std::vector<double> tail(t.density.end() - static_cast<std::ptrdiff_t>(len), t.density.end());
    nlohmann::json tail_json = nlohmann::json::array();
    for (double v : tail) tail_json.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"));
    paths.push_back({{"id", t.path.id},
                     {"mode", mode_name(t.path.mode)},
                     {"l", t.path.l + 1},
                     {"verdict", verdict_name(t.verdict)},
                     {"points", t.path.points.size()},
                     {"final_distance", t.distance.empty() ? 0.0 : t.distance.back()},
                     {"tail", tail_json},
                     {"witness", t.path.points.empty() ? nlohmann::json() : point_to_json(t.path.points.back())}});
  }
  return {{"verdict", verdict_name(c.verdict)}, {"vacuous", c.vacuous}, {"reason", c.reason}, {"paths", paths}};
}

// Smallest squared singular value of the weighted Jacobian over the plan's
// grid and refinement (an upper estimate of the true infimum).
SupSearch schwarz_inf_search(const HoloSelfMap& phi, const CriteriaConfig& config) {
  SamplingPlan plan = config.plan;
  return search_supremum(
      [&phi](std::span<const cplx> z) {
        try {
          return -schwarz_expansion_inf(phi, z);
        } catch (const SingularEvaluation&) {
          return -kInf;
        }
      },
      phi.dimension(), plan);
}

}  // namespace

CriterionReport classify(const HoloSelfMap& phi_in, double p, double q, const CriteriaConfig& config) {
  check_exponents(p, q);
  HoloSelfMap phi = phi_in;
  if (!phi.certificate().certified()) phi = phi.with_certificate(certify_self_map(phi, config.plan));
  if (!phi.certificate().certified()) {
    throw std::invalid_argument("classify: the map could not be certified as a self-map of the polydisk");
  }
  const std::size_t n = phi.dimension();

  CriterionReport r;
  r.n = n;
  r.p = p;
  r.q = q;
  r.seed = config.plan.seed;
  r.certificate = phi.certificate().name();

  r.bounded = boundedness_check(phi, p, q, config);
  r.verdicts.push_back({"bounded_criterion", r.bounded.verdict,
                        {{"sup", std::isfinite(r.bounded.estimate.value) ? nlohmann::json(r.bounded.estimate.value)
                                                                         : nlohmann::json("inf")},
                         {"witness", point_to_json(r.bounded.estimate.witness)},
                         {"trend", r.bounded.reason}}});

  if (r.bounded.verdict == Verdict::Fails) {
    r.compact = Verdict::Fails;
    r.compact_route = "bounded_criterion";
    return r;
  }
  if (r.bounded.verdict == Verdict::Inconclusive) {
    r.compact = Verdict::Inconclusive;
    r.compact_route = "bounded_criterion";
    return r;
  }

  const ImageBound ib = image_bound(phi, config);
  if (ib.all_strict()) {
    r.compact = Verdict::Holds;
    r.compact_route = "compact_image_inside_polydisk";
    r.verdicts.push_back({"compact_image_inside_polydisk", Verdict::Holds, {{"image_sup", ib.sup}}});
    CompactnessResult vac;
    vac.verdict = Verdict::Holds;
    vac.vacuous = true;
    vac.reason = "every component stays inside the disk; the limit condition is vacuous";
    r.profile = vac;
    return r;
  }

  if (p < 1.0) {
    std::vector<BoundaryPath> paths;
    for (std::size_t l = 0; l < n; ++l) {
      auto pl = default_paths(phi, BoundaryPath::Mode::CoordinateToOne, l, config, r.bounded.estimate.witness);
      paths.insert(paths.end(), std::make_move_iterator(pl.begin()), std::make_move_iterator(pl.end()));
    }
    r.profile = compactness_profile(phi, p, q, paths, ProfileMode::PerCoordinate, config);
    if (q >= 1.0) {
      r.compact = Verdict::Holds;
      r.compact_route = "compact_small_p_large_q";
      r.verdicts.push_back({"compact_small_p_large_q", Verdict::Holds,
                            {{"per_coordinate_profile", verdict_name(r.profile->verdict)}}});
    } else {
      r.compact = r.profile->verdict;
      r.compact_route = "compact_per_coordinate_limit";
    }
    r.verdicts.push_back({"compact_per_coordinate_limit", r.profile->verdict, profile_summary(*r.profile)});
    return r;
  }

  const auto paths = default_paths(phi, BoundaryPath::Mode::ImageToBoundary, 0, config, r.bounded.estimate.witness);
  r.profile = compactness_profile(phi, p, q, paths, ProfileMode::Global, config);
  r.compact = r.profile->verdict;
  r.compact_route = "compact_global_limit";
  r.verdicts.push_back({"compact_global_limit", r.profile->verdict, profile_summary(*r.profile)});

  if (q <= 1.0) {
    const SupSearch s = schwarz_inf_search(phi, config);
    const double inf = -s.value;
    const Verdict v = inf >= config.schwarz_floor ? Verdict::Fails : Verdict::Inconclusive;
    r.verdicts.push_back({"schwarz_lower_bound", v,
                          {{"sampled_inf", std::isfinite(inf) ? nlohmann::json(inf) : nlohmann::json("inf")},
                           {"floor", config.schwarz_floor},
                           {"witness", point_to_json(s.witness)}}});
    if (v == Verdict::Fails) {
      if (r.compact == Verdict::Inconclusive) {
        r.compact = Verdict::Fails;
        r.compact_route = "schwarz_lower_bound";
      } else if (r.compact == Verdict::Holds) {
        r.compact = Verdict::Inconclusive;
        r.compact_route = "conflict:compact_global_limit/schwarz_lower_bound";
      }
    }
  }
  return r;
}

nlohmann::json to_json(const CriterionReport& r) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    verdicts.push_back({{"id", v.id}, {"verdict", verdict_name(v.verdict)}, {"evidence", v.evidence}});
  }
  nlohmann::json j{{"schema_version", 1},
                   {"n", r.n},
                   {"p", r.p},
                   {"q", r.q},
                   {"seed", r.seed},
                   {"certificate", r.certificate},
                   {"bounded",
                    {{"verdict", verdict_name(r.bounded.verdict)},
                     {"reason", r.bounded.reason},
                     {"estimate", estimate_json(r.bounded.estimate)}}},
                   {"compact", {{"verdict", verdict_name(r.compact)}, {"route", r.compact_route}}},
                   {"verdicts", verdicts}};
  if (r.profile) j["compact"]["profile"] = profile_summary(*r.profile);
  return j;
}

std::string to_csv(const CriterionReport& r) {
  std::ostringstream os;
  os << "path_id,mode,l,index";
  for (std::size_t k = 1; k <= r.n; ++k) os << ",z" << k << "_re,z" << k << "_im";
  os << ",distance,density,path_verdict\n";
  if (!r.profile) return os.str();
  for (const auto& t : r.profile->tables) {
    for (std::size_t i = 0; i < t.path.points.size(); ++i) {
      os << t.path.id << ',' << mode_name(t.path.mode) << ',' << t.path.l + 1 << ',' << i;
      for (const cplx& c : t.path.points[i]) os << ',' << fmt(c.real()) << ',' << fmt(c.imag());
      os << ',' << fmt(t.distance[i]) << ',' << fmt(t.density[i]) << ',' << verdict_name(t.verdict) << '\n';
    }
  }
  return os.str();
}

LittleBlochResult little_bloch_operator_check(const HoloSelfMap& phi, double p, double q, int degree_cap,
                                              const CriteriaConfig& config) {
  check_exponents(p, q);
  if (degree_cap < 0) throw std::invalid_argument("degree cap must be nonnegative");
  const std::size_t n = phi.dimension();
  LittleBlochResult out;
  out.note = "multi-indices of degree <= " + std::to_string(degree_cap) +
             " stand in for the condition on every multi-index";
  bool all_decayed = true;
  for (const MultiIndex& gamma : multi_indices_up_to(n, degree_cap)) {
    MonomialGap g;
    g.gamma = gamma;
    const HoloFunction power = compose(HoloFunction::monomial(gamma), phi);
    g.m = 4 * degree_cap;
    if (const Polynomial* poly = power.as_polynomial()) g.m = std::max(g.m, poly->degree());
    try {
      g.gap = little_bloch_gap(power, BlochParams(q), g.m, config.plan);
      if (*g.gap >= config.decay_tol) {
        // Allow one doubling of the truncation degree before giving up.
        g.m *= 2;
        g.gap = little_bloch_gap(power, BlochParams(q), g.m, config.plan);
      }
      g.decayed = *g.gap < config.decay_tol;
    } catch (const Unsupported&) {
      g.gap.reset();
    }
    all_decayed = all_decayed && g.decayed;
    out.gaps.push_back(std::move(g));
  }
  out.powers = all_decayed ? Verdict::Holds : Verdict::Inconclusive;
  out.bounded = boundedness_check(phi, p, q, config);
  if (out.bounded.verdict == Verdict::Fails) {
    out.verdict = Verdict::Fails;
  } else if (out.bounded.verdict == Verdict::Holds && out.powers == Verdict::Holds) {
    out.verdict = Verdict::Holds;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

LipschitzCheck lip1_boundedness_check(const HoloSelfMap& phi, const CriteriaConfig& config) {
  LipschitzCheck out;
  TrendThresholds th = config.trend;
  th.plateau_rel = config.lipschitz_plateau;
  bool all_plateau = true;
  bool any_divergent = false;
  for (const auto& f : phi.components()) {
    out.components.push_back(lipschitz_norm_estimate(f, 1.0, config.plan));
    const Trend t = classify_trend(out.components.back().level_profile, th);
    out.trends.push_back(t);
    all_plateau = all_plateau && t == Trend::Plateau;
    any_divergent = any_divergent || t == Trend::Divergent;
  }
  out.verdict = any_divergent ? Verdict::Fails : all_plateau ? Verdict::Holds : Verdict::Inconclusive;
  return out;
}

OperatorNormBound operator_norm_lower_bound(const HoloSelfMap& phi, double p, double q,
                                            const std::vector<cplx>& w_grid, const CriteriaConfig& config) {
  check_exponents(p, q);
  const std::size_t n = phi.dimension();
  OperatorNormBound out;
  for (Family fam : {Family::F, Family::G, Family::H}) {
    for (std::size_t l = 0; l < n; ++l) {
      if (fam == Family::H && (n < 2 || l == 0)) continue;
      for (const cplx& w : w_grid) {
        const TestSpec spec{fam, n, l, w, p};
        const HoloFunction nu = make_test(spec);
        const double denom = bloch_norm_estimate(nu, BlochParams(p), config.plan).value;
        if (!(denom > 1e-12)) continue;
        const double num = bloch_norm_estimate(compose(nu, phi), BlochParams(q), config.plan).value;
        ++out.probes;
        const double ratio = num / denom;
        if (ratio > out.value) {
          out.value = ratio;
          out.best = spec;
        }
      }
    }
  }
  return out;
}

}  // namespace blochlab
