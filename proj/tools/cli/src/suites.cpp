#include "sqg_cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "sqg/ensemble.hpp"
#include "sqg/parallel.hpp"

namespace sqg::cli {

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* SuiteResult::find_check(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const RatioReport* SuiteResult::find_report(const std::string& name) const {
  for (const RatioReport& r : reports) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Settings shared by every ensemble-driven suite.
struct EnsembleSettings {
  GridSpec grid;
  EnsembleSpec spec;
  unsigned threads = 0;
  PowerForm form = PowerForm::Signed;
};

EnsembleSettings read_ensemble(Config& cfg, int n, int count, int j_lo, int j_hi) {
  EnsembleSettings s;
  s.grid.n = static_cast<int>(cfg.get_int("n", n));
  s.grid.validate();
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 7));
  s.spec.seed = substream_seed(seed, "fields");
  s.spec.count = static_cast<int>(cfg.get_int("count", count));
  s.spec.j_lo = static_cast<int>(cfg.get_int("j_lo", j_lo));
  s.spec.j_hi = static_cast<int>(cfg.get_int("j_hi", j_hi));
  s.spec.shape = parse_spectrum_shape(cfg.get_string("shape", "flat"));
  s.spec.amplitude = cfg.get_double("amplitude", 1.0);
  s.spec.validate();
  s.threads = static_cast<unsigned>(cfg.get_int("threads", 0));
  return s;
}

Check make_check(std::string name, double value, double limit, std::string detail = {}) {
  Check c{std::move(name), value, limit, value <= limit, std::move(detail)};
  if (std::isnan(value)) c.pass = false;
  return c;
}

std::string describe(const std::vector<std::string>& names, const std::vector<double>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size() && i < values.size(); ++i) {
    if (i) os << ' ';
    os << names[i] << '=' << format_double(values[i]);
  }
  return os.str();
}

// --- bernstein / dissipation ------------------------------------------------

struct BernsteinRow {
  int field;
  int j;
  double p;
  double a;
  Triple triple;
  double gradient_middle = -1.0;  // set for p > 2, a = 1
};

struct BernsteinGrid {
  std::vector<double> ps;
  std::vector<double> as;
  int j_lo;
  int j_hi;
};

std::vector<BernsteinRow> bernstein_rows(const std::vector<RealField>& fields, const DyadicFamily& fam,
                                         const BernsteinGrid& g, PowerForm form, unsigned threads) {
  const std::size_t per_field = static_cast<std::size_t>(g.j_hi - g.j_lo + 1) * g.ps.size() * g.as.size();
  std::vector<BernsteinRow> rows(fields.size() * per_field);
  parallel_for(fields.size(), threads, [&](std::size_t i) {
    std::size_t k = i * per_field;
    for (int j = g.j_lo; j <= g.j_hi; ++j) {
      BernsteinProbe probe(fields[i], j, fam);
      for (double p : g.ps) {
        for (double a : g.as) {
          BernsteinRow row{static_cast<int>(i), j, p, a, probe.bernstein(p, a, form)};
          if (p > 2.0 && a == 1.0) row.gradient_middle = probe.gradient_form(p, form).middle;
          rows[k++] = row;
        }
      }
    }
  });
  return rows;
}

// Min and max ratio per (p, a) and per (p, a, j).
struct GroupStats {
  double c = kInf;
  double C = 0.0;
  std::map<int, std::pair<double, double>> per_j;
};

std::map<std::pair<double, double>, GroupStats> group_stats(const std::vector<BernsteinRow>& rows) {
  std::map<std::pair<double, double>, GroupStats> groups;
  for (const BernsteinRow& r : rows) {
    if (r.triple.lower == 0.0) continue;
    GroupStats& g = groups[{r.p, r.a}];
    const double ratio = r.triple.ratio();
    g.c = std::min(g.c, ratio);
    g.C = std::max(g.C, ratio);
    auto [it, fresh] = g.per_j.try_emplace(r.j, ratio, ratio);
    if (!fresh) {
      it->second.first = std::min(it->second.first, ratio);
      it->second.second = std::max(it->second.second, ratio);
    }
  }
  return groups;
}

BernsteinGrid read_bernstein_grid(Config& cfg, const DyadicFamily& fam, int j_lo, int j_hi) {
  BernsteinGrid g;
  g.ps = cfg.get_doubles("p", {2, 3, 4, 6, 8});
  g.as = cfg.get_doubles("alpha", {0, 0.1, 0.25, 0.5, 0.75, 1.0});
  g.j_lo = std::max(j_lo, fam.j_min());
  g.j_hi = std::min(j_hi, fam.j_max());
  for (double p : g.ps) {
    if (!(p >= 2.0) || std::isinf(p)) throw std::invalid_argument("bernstein: p values must lie in [2, inf)");
  }
  for (double a : g.as) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("bernstein: alpha values must lie in [0, 1]");
  }
  return g;
}

SuiteResult suite_bernstein(Config& cfg) {
  const EnsembleSettings es = read_ensemble(cfg, 256, 100, 1, 4);
  const PowerForm form = parse_power_form(cfg.get_string("form", "signed"));
  const DyadicFamily fam(es.grid);
  const BernsteinGrid g = read_bernstein_grid(cfg, fam, es.spec.j_lo, es.spec.j_hi);
  const double max_variation = cfg.get_double("max_j_variation", 4.0);
  cfg.require_all_used();

  const auto fields = generate_ensemble(es.spec, es.grid, es.threads);
  const auto rows = bernstein_rows(fields, fam, g, form, es.threads);

  SuiteResult res;
  res.suite = "bernstein";
  RatioReport rep{"bernstein", {"field", "j", "p", "a"}, {}};
  double worst_positive = 0.0;
  double worst_bracket = 0.0;
  double worst_identity = 0.0;
  double worst_gradient = 0.0;
  std::string bracket_detail, identity_detail, gradient_detail, positive_detail;
  for (const BernsteinRow& r : rows) {
    const std::vector<double> params{double(r.field), double(r.j), r.p, r.a};
    rep.add(params, r.triple.middle, r.triple.lower);
    const double ratio = r.triple.ratio();
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      worst_positive += 1.0;
      if (positive_detail.empty()) positive_detail = describe(rep.param_names, params);
    }
    const bool interior = r.j > fam.j_min() && r.j < fam.j_max();
    if (r.p == 2.0 && interior && r.triple.lower > 0.0) {
      const double lo = std::pow(0.75, r.a);
      const double hi = std::pow(8.0 / 3.0, r.a);
      const double v = std::max({lo - ratio, ratio - hi, 0.0});
      if (v >= worst_bracket) {
        worst_bracket = v;
        bracket_detail = describe(rep.param_names, params) + " ratio=" + format_double(ratio);
      }
    }
    if (r.a == 0.0 && r.triple.lower > 0.0) {
      const double v = std::abs(ratio - 1.0);
      if (v >= worst_identity) {
        worst_identity = v;
        identity_detail = describe(rep.param_names, params);
      }
    }
    if (r.gradient_middle >= 0.0 && r.triple.middle > 0.0) {
      const double v = std::abs(r.gradient_middle - r.triple.middle) / r.triple.middle;
      if (v >= worst_gradient) {
        worst_gradient = v;
        gradient_detail = describe(rep.param_names, params);
      }
    }
  }
  res.reports.push_back(std::move(rep));

  const auto groups = group_stats(rows);
  double worst_variation = 0.0;
  std::string variation_detail;
  Json group_json = Json::array();
  for (const auto& [key, st] : groups) {
    double c_lo = kInf, c_hi = 0.0, C_lo = kInf, C_hi = 0.0;
    Json per_j = Json::array();
    for (const auto& [j, mm] : st.per_j) {
      c_lo = std::min(c_lo, mm.first);
      c_hi = std::max(c_hi, mm.first);
      C_lo = std::min(C_lo, mm.second);
      C_hi = std::max(C_hi, mm.second);
      per_j.push_back({{"j", j}, {"c_emp", number(mm.first)}, {"C_emp", number(mm.second)}});
    }
    const double variation = std::max(c_hi / c_lo, C_hi / C_lo);
    if (variation >= worst_variation) {
      worst_variation = variation;
      variation_detail = "p=" + format_double(key.first) + " a=" + format_double(key.second);
    }
    group_json.push_back({{"p", key.first},
                          {"a", key.second},
                          {"c_emp", number(st.c)},
                          {"C_emp", number(st.C)},
                          {"j_variation", number(variation)},
                          {"per_j", per_j}});
  }
  res.summary["power_form"] = to_string(form);
  res.summary["groups"] = group_json;

  res.checks.push_back(make_check("ratios_positive_finite", worst_positive, 0.0, positive_detail));
  res.checks.push_back(make_check("p2_plancherel_bracket", worst_bracket, 1e-8, bracket_detail));
  res.checks.push_back(make_check("a0_identity", worst_identity, 1e-10, identity_detail));
  res.checks.push_back(make_check("gradient_form_agreement", worst_gradient, 1e-10, gradient_detail));
  res.checks.push_back(make_check("j_variation", worst_variation, max_variation, variation_detail));
  return res;
}

SuiteResult suite_dissipation(Config& cfg) {
  const EnsembleSettings es = read_ensemble(cfg, 256, 100, 1, 4);
  const PowerForm form = parse_power_form(cfg.get_string("form", "signed"));
  const DyadicFamily fam(es.grid);
  BernsteinGrid g = read_bernstein_grid(cfg, fam, es.spec.j_lo, es.spec.j_hi);
  const double tol = cfg.get_double("tolerance", 1e-8);
  cfg.require_all_used();
  g.as.erase(std::remove(g.as.begin(), g.as.end(), 0.0), g.as.end());
  if (g.as.empty()) throw std::invalid_argument("dissipation: needs at least one alpha in (0, 1]");

  const auto fields = generate_ensemble(es.spec, es.grid, es.threads);
  const auto groups = group_stats(bernstein_rows(fields, fam, g, form, es.threads));

  struct Row {
    std::vector<double> params;
    DissipationChain chain;
  };
  const std::size_t per_field = static_cast<std::size_t>(g.j_hi - g.j_lo + 1) * g.ps.size() * g.as.size();
  std::vector<Row> rows(fields.size() * per_field);
  parallel_for(fields.size(), es.threads, [&](std::size_t i) {
    std::size_t k = i * per_field;
    for (int j = g.j_lo; j <= g.j_hi; ++j) {
      BernsteinProbe probe(fields[i], j, fam);
      for (double p : g.ps) {
        for (double a : g.as) {
          const double c = groups.at({p, a}).c;
          rows[k++] = {{double(i), double(j), p, a, c}, probe.dissipation(p, a, c, form)};
        }
      }
    }
  });

  SuiteResult res;
  res.suite = "dissipation";
  RatioReport upper{"dissipation_B_over_A", {"field", "j", "p", "a", "c_bernstein"}, {}};
  RatioReport lower{"dissipation_C_over_B", {"field", "j", "p", "a", "c_bernstein"}, {}};
  double worst_ab = 0.0, worst_bc = 0.0, worst_p2 = 0.0;
  std::string ab_detail, bc_detail, p2_detail;
  for (const Row& r : rows) {
    upper.add(r.params, r.chain.b, r.chain.a);
    lower.add(r.params, r.chain.c, r.chain.b);
    const double scale_ab = std::max(std::abs(r.chain.a), std::abs(r.chain.b));
    const double scale_bc = std::max(std::abs(r.chain.b), std::abs(r.chain.c));
    if (scale_ab > 0.0) {
      const double v = (r.chain.b - r.chain.a) / scale_ab;
      if (v >= worst_ab) {
        worst_ab = v;
        ab_detail = describe(upper.param_names, r.params);
      }
      if (r.params[2] == 2.0) {
        const double e = std::abs(r.chain.b - r.chain.a) / scale_ab;
        if (e >= worst_p2) {
          worst_p2 = e;
          p2_detail = describe(upper.param_names, r.params);
        }
      }
    }
    if (scale_bc > 0.0) {
      const double v = (r.chain.c - r.chain.b) / scale_bc;
      if (v >= worst_bc) {
        worst_bc = v;
        bc_detail = describe(lower.param_names, r.params);
      }
    }
  }
  res.reports.push_back(std::move(upper));
  res.reports.push_back(std::move(lower));
  Json consts = Json::array();
  for (const auto& [key, st] : groups) consts.push_back({{"p", key.first}, {"a", key.second}, {"c_emp", number(st.c)}});
  res.summary["power_form"] = to_string(form);
  res.summary["bernstein_constants"] = consts;
  res.checks.push_back(make_check("A_ge_B", worst_ab, tol, ab_detail));
  res.checks.push_back(make_check("B_ge_C", worst_bc, tol, bc_detail));
  res.checks.push_back(make_check("p2_A_equals_B", worst_p2, 1e-10, p2_detail));
  return res;
}

// --- positivity ----------------------------------------------------------------

SuiteResult suite_positivity(Config& cfg) {
  const EnsembleSettings es = read_ensemble(cfg, 128, 100, 1, 4);
  const PowerForm form = parse_power_form(cfg.get_string("form", "signed"));
  const auto ss = cfg.get_doubles("s", {0, 0.5, 1, 2});
  const auto ps = cfg.get_doubles("p", {2, 3, 4, 8});
  const double tol = cfg.get_double("tolerance", 1e-8);
  cfg.require_all_used();

  const auto fields = generate_ensemble(es.spec, es.grid, es.threads);
  const std::size_t per_field = ss.size() * ps.size();
  std::vector<std::pair<std::vector<double>, PositivityGap>> rows(fields.size() * per_field);
  parallel_for(fields.size(), es.threads, [&](std::size_t i) {
    std::size_t k = i * per_field;
    for (double p : ps) {
      for (double s : ss) rows[k++] = {{double(i), s, p}, positivity_gap(fields[i], s, p, form)};
    }
  });

  SuiteResult res;
  res.suite = "positivity";
  RatioReport rep{"positivity", {"field", "s", "p"}, {}};
  double worst = 0.0, worst_p2 = 0.0, min_gap = kInf;
  std::string detail, p2_detail;
  for (const auto& [params, gap] : rows) {
    rep.add(params, gap.rhs, gap.lhs);
    const double scale = gap.scale();
    if (scale == 0.0) continue;
    min_gap = std::min(min_gap, gap.gap() / scale);
    const double v = -gap.gap() / scale;
    if (v >= worst) {
      worst = v;
      detail = describe(rep.param_names, params);
    }
    if (params[2] == 2.0) {
      const double e = std::abs(gap.gap()) / scale;
      if (e >= worst_p2) {
        worst_p2 = e;
        p2_detail = describe(rep.param_names, params);
      }
    }
  }
  res.reports.push_back(std::move(rep));
  res.summary["power_form"] = to_string(form);
  res.summary["min_relative_gap"] = number(min_gap);
  res.checks.push_back(make_check("gap_nonnegative", worst, tol, detail));
  res.checks.push_back(make_check("p2_gap_zero", worst_p2, 1e-10, p2_detail));
  return res;
}

// --- composition ---------------------------------------------------------------

SuiteResult suite_composition(Config& cfg) {
  const EnsembleSettings es = read_ensemble(cfg, 128, 20, 1, 4);
  const auto ps = cfg.get_doubles("p", {1.5, 2, 3});
  const auto ss = cfg.get_doubles("s", {0, 0.5, 1});
  const double ell = cfg.get_double("ell", 2.0);
  const double r = cfg.get_double("r", 4.0);
  cfg.require_all_used();
  if (!(1.0 / ell > 1.0 / r)) throw std::invalid_argument("composition: need ell < r");

  std::vector<CompositionParams> combos;
  for (double p : ps) {
    for (double s : ss) {
      if (!(s < std::min(p, 2.0))) continue;
      CompositionParams cp{p, s, ell, r, (p - 1.0) / (1.0 / ell - 1.0 / r)};
      if (p == 1.0) cp.m = r;  // the m term drops out
      cp.validate();
      combos.push_back(cp);
    }
  }
  const DyadicFamily fam(es.grid);
  const auto fields = generate_ensemble(es.spec, es.grid, es.threads);
  std::vector<std::pair<double, double>> values(fields.size() * combos.size());
  parallel_for(fields.size(), es.threads, [&](std::size_t i) {
    RealField doubled = fields[i];
    doubled *= 2.0;
    for (std::size_t c = 0; c < combos.size(); ++c) {
      values[i * combos.size() + c] = {composition_ratio(fields[i], combos[c], fam),
                                       composition_ratio(doubled, combos[c], fam)};
    }
  });

  SuiteResult res;
  res.suite = "composition";
  RatioReport rep{"composition", {"field", "p", "s", "ell", "r", "m"}, {}};
  double worst_h = 0.0, worst_finite = 0.0;
  std::string h_detail;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t c = 0; c < combos.size(); ++c) {
      const auto& cp = combos[c];
      const auto [ratio, ratio2] = values[i * combos.size() + c];
      std::vector<double> params{double(i), cp.p, cp.s, cp.ell, cp.r, cp.m};
      rep.add(params, ratio, 1.0);
      if (!std::isfinite(ratio)) worst_finite += 1.0;
      const double h = ratio > 0.0 ? std::abs(ratio2 - ratio) / ratio : 0.0;
      if (h >= worst_h) {
        worst_h = h;
        h_detail = describe(rep.param_names, params);
      }
    }
  }
  res.summary["max_ratio"] = number(rep.C_emp());
  res.reports.push_back(std::move(rep));
  res.checks.push_back(make_check("ratios_finite", worst_finite, 0.0));
  res.checks.push_back(make_check("homogeneity_z_to_2z", worst_h, 1e-10, h_detail));
  return res;
}

// --- product / commutator --------------------------------------------------------

// Max ratio over the ensemble at grid n and at 2n; the ensemble is band-limited so
// every product is alias-free at both resolutions.
struct Doubling {
  std::vector<double> coarse;
  std::vector<double> fine;
};

SuiteResult doubling_suite(Config& cfg, const std::string& name, int default_n, int default_count,
                           const std::vector<std::string>& extra_params,
                           const std::function<std::vector<double>(Config&)>& read_extra,
                           const std::function<double(const RealField&, const RealField&, const DyadicFamily&,
                                                      const std::vector<double>&)>& ratio_fn,
                           const std::function<void(SuiteResult&, const EnsembleSettings&,
                                                    const std::vector<RealField>&)>& extra_checks) {
  EnsembleSettings es = read_ensemble(cfg, default_n, default_count, 0, 8);
  const std::vector<double> extra = read_extra(cfg);
  const double tolerance = cfg.get_double("stability_tolerance", 0.2);
  cfg.require_all_used();
  // Keep fields and their products below 2^{j_max} * 3/4 on the coarse grid, where
  // the coarse top block still agrees with the fine family; otherwise the
  // comparison would measure the change of block layout, not of resolution.
  const DyadicFamily layout(es.grid);
  const double reach = std::ldexp(0.375, layout.j_max()) / es.grid.base_wavenumber();
  es.spec.max_index = std::min(dealias_cutoff(es.grid, DealiasRule::TwoThirds) / 2,
                               static_cast<int>(std::floor(reach / std::sqrt(2.0))));

  GridSpec fine_grid = es.grid;
  fine_grid.n *= 2;
  const DyadicFamily coarse_fam(es.grid);
  const DyadicFamily fine_fam(fine_grid);
  const int count = es.spec.count;
  EnsembleSpec doubled = es.spec;
  doubled.count = 2 * count;
  const auto coarse_fields = generate_ensemble(doubled, es.grid, es.threads);
  const auto fine_fields = generate_ensemble(doubled, fine_grid, es.threads);

  Doubling d{std::vector<double>(static_cast<std::size_t>(count)), std::vector<double>(static_cast<std::size_t>(count))};
  parallel_for(static_cast<std::size_t>(count), es.threads, [&](std::size_t i) {
    d.coarse[i] = ratio_fn(coarse_fields[i], coarse_fields[i + count], coarse_fam, extra);
    d.fine[i] = ratio_fn(fine_fields[i], fine_fields[i + count], fine_fam, extra);
  });

  SuiteResult res;
  res.suite = name;
  std::vector<std::string> names{"pair", "n"};
  names.insert(names.end(), extra_params.begin(), extra_params.end());
  RatioReport rep{name, names, {}};
  double c_coarse = 0.0, c_fine = 0.0, non_finite = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int level = 0; level < 2; ++level) {
      const double ratio = level == 0 ? d.coarse[static_cast<std::size_t>(i)] : d.fine[static_cast<std::size_t>(i)];
      std::vector<double> params{double(i), double(level == 0 ? es.grid.n : fine_grid.n)};
      params.insert(params.end(), extra.begin(), extra.end());
      rep.add(params, ratio, 1.0);
      if (!std::isfinite(ratio)) non_finite += 1.0;
      (level == 0 ? c_coarse : c_fine) = std::max(level == 0 ? c_coarse : c_fine, ratio);
    }
  }
  res.reports.push_back(std::move(rep));
  const double drift = c_coarse > 0.0 ? std::abs(c_fine / c_coarse - 1.0) : kInf;
  res.summary["constant_n"] = number(c_coarse);
  res.summary["constant_2n"] = number(c_fine);
  res.summary["relative_change"] = number(drift);
  res.checks.push_back(make_check("ratios_finite", non_finite, 0.0));
  res.checks.push_back(make_check("resolution_doubling_stability", drift, tolerance,
                                  "n=" + std::to_string(es.grid.n) + " C=" + format_double(c_coarse) +
                                      ", n=" + std::to_string(fine_grid.n) + " C=" + format_double(c_fine)));
  if (extra_checks) extra_checks(res, es, coarse_fields);
  return res;
}

SuiteResult suite_product(Config& cfg) {
  return doubling_suite(
      cfg, "product", 128, 20, {"s", "p", "q"},
      [](Config& c) {
        const double s = c.get_double("s", 1.0);
        const double p = c.get_double("p", 2.0);
        const double q = c.get_double("q", 2.0);
        if (!(p >= 2.0) || !(s > -2.0 / p) || !(q >= 1.0)) {
          throw std::invalid_argument("product: need p >= 2, q >= 1, s > -2/p");
        }
        return std::vector<double>{s, p, q};
      },
      [](const RealField& u, const RealField& v, const DyadicFamily& fam, const std::vector<double>& x) {
        return product_ratio_A1(u, v, x[0], x[1], x[2], fam);
      },
      nullptr);
}

SuiteResult suite_commutator(Config& cfg) {
  return doubling_suite(
      cfg, "commutator", 128, 12, {"alpha", "p", "q"},
      [](Config& c) {
        const double alpha = c.get_double("alpha", 0.5);
        const double p = c.get_double("p", 2.0);
        const double q = c.get_double("q", 2.0);
        (void)critical_sigma(alpha, p);
        if (!(q >= 1.0)) throw std::invalid_argument("commutator: q must be >= 1");
        return std::vector<double>{alpha, p, q};
      },
      [](const RealField& theta, const RealField& v, const DyadicFamily& fam, const std::vector<double>& x) {
        return commutator_ratio(theta, v, x[1], x[2], x[0], fam);
      },
      [](SuiteResult& res, const EnsembleSettings& es, const std::vector<RealField>& fields) {
        // A constant advecting field commutes with every block.
        const DyadicFamily fam(es.grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(fields.size(), 4); ++i) {
          VectorField u{RealField(es.grid), RealField(es.grid)};
          for (double& x : u.first.samples()) x = 0.75;
          for (double& x : u.second.samples()) x = -1.25;
          const VectorSpectral g = gradient(forward_transform(fields[i]));
          const double scale = 2.0 * std::max(lp_norm(inverse_transform(g.first), kInfinity),
                                              lp_norm(inverse_transform(g.second), kInfinity));
          for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
            worst = std::max(worst, lp_norm(commutator(u, fields[i], j, fam), kInfinity) / scale);
          }
        }
        res.checks.push_back(make_check("constant_field_commutes", worst, 1e-12));
      });
}

// --- Littlewood-Paley identities ---------------------------------------------------

SuiteResult suite_lp_identities(Config& cfg) {
  EnsembleSettings es = read_ensemble(cfg, 256, 100, 0, 8);
  const int pairs = static_cast<int>(cfg.get_int("pairs", 50));
  cfg.require_all_used();
  const GridSpec& grid = es.grid;
  const DyadicFamily fam(grid);

  SuiteResult res;
  res.suite = "lp-identities";

  // Partition of unity on every lattice radius, both localizations.
  double worst_partition = 0.0;
  for_each_mode(grid, [&](int, int, const Wavevector& xi) {
    const double r = xi.norm();
    double inhom = fam.low_symbol(0, r);
    for (int j = 0; j <= fam.j_max(); ++j) inhom += fam.block_symbol(j, r, Localization::Inhomogeneous);
    worst_partition = std::max(worst_partition, std::abs(inhom - 1.0));
    if (r > 0.0) {
      double hom = 0.0;
      for (int j = fam.j_min(); j <= fam.j_max(); ++j) hom += fam.block_symbol(j, r);
      worst_partition = std::max(worst_partition, std::abs(hom - 1.0));
    }
  });
  res.checks.push_back(make_check("partition_of_unity", worst_partition, 1e-10));

  const auto fields = generate_ensemble(es.spec, grid, es.threads);
  RatioReport recon{"reconstruction", {"field", "localization"}, {}};
  std::vector<double> errors(2 * fields.size());
  std::vector<double> overlap(fields.size());
  parallel_for(fields.size(), es.threads, [&](std::size_t i) {
    SpectralField f = forward_transform(fields[i]);
    f.at(0, 0) = 0.3;  // a nonzero mean exercises the low part
    for (int l = 0; l < 2; ++l) {
      const Localization loc = l == 0 ? Localization::Homogeneous : Localization::Inhomogeneous;
      errors[2 * i + l] = l2_norm(reconstruct(decompose(f, fam, loc)) - f) / l2_norm(f);
    }
    const BlockSet set = decompose(f, fam);
    double worst = 0.0;
    for (int j = set.first; j <= set.last(); ++j) {
      for (int k = j + 2; k <= set.last(); ++k) worst = std::max(worst, block(set[j], k, fam).max_abs());
    }
    overlap[i] = worst;
  });
  double worst_recon = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (int l = 0; l < 2; ++l) {
      recon.add({double(i), double(l)}, errors[2 * i + l], 1.0);
      worst_recon = std::max(worst_recon, errors[2 * i + l]);
    }
  }
  res.reports.push_back(std::move(recon));
  res.checks.push_back(make_check("reconstruction", worst_recon, 1e-10));
  res.checks.push_back(make_check("quasi_orthogonality", *std::max_element(overlap.begin(), overlap.end()), 0.0));

  // Bony pieces against the product evaluated exactly on a grid twice as fine.
  EnsembleSpec band = es.spec;
  band.seed = substream_seed(es.spec.seed, "bony");
  band.count = 2 * pairs;
  band.max_index = dealias_cutoff(grid, DealiasRule::TwoThirds) / 2;
  const auto bf = generate_ensemble(band, grid, es.threads);
  std::vector<double> bony(static_cast<std::size_t>(pairs));
  parallel_for(bony.size(), es.threads, [&](std::size_t i) {
    const RealField& u = bf[i];
    const RealField& v = bf[i + static_cast<std::size_t>(pairs)];
    const BonyParts parts = bony_decompose(u, v, fam);
    const RealField sum = parts.t_uv + parts.t_vu + parts.remainder;
    const RealField uf = inverse_transform(resample(forward_transform(u), 2 * grid.n));
    const RealField vf = inverse_transform(resample(forward_transform(v), 2 * grid.n));
    RealField prod(uf.grid());
    for (std::size_t k = 0; k < prod.samples().size(); ++k) prod.samples()[k] = uf.samples()[k] * vf.samples()[k];
    const SpectralField exact = resample(forward_transform(prod), grid.n);
    bony[i] = l2_norm(forward_transform(sum) - exact) / l2_norm(exact);
  });
  RatioReport bony_rep{"bony", {"pair"}, {}};
  for (std::size_t i = 0; i < bony.size(); ++i) bony_rep.add({double(i)}, bony[i], 1.0);
  res.reports.push_back(std::move(bony_rep));
  res.checks.push_back(make_check("bony_vs_fine_grid", *std::max_element(bony.begin(), bony.end()), 1e-9));
  return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bernstein",  "positivity", "dissipation",  "composition",
                                              "product",    "commutator", "lp-identities"};
  return names;
}

SuiteResult run_suite(const std::string& name, Config& cfg) {
  if (name == "bernstein") return suite_bernstein(cfg);
  if (name == "positivity") return suite_positivity(cfg);
  if (name == "dissipation") return suite_dissipation(cfg);
  if (name == "composition") return suite_composition(cfg);
  if (name == "product") return suite_product(cfg);
  if (name == "commutator") return suite_commutator(cfg);
  if (name == "lp-identities") return suite_lp_identities(cfg);
  throw UnknownSuite("unknown verify suite '" + name + "'");
}

// ---------------------------------------------------------------------------

Json to_json(const RatioReport& report) {
  Json rows = Json::array();
  for (const RatioSample& s : report.samples) {
    Json row = Json::array();
    for (double v : s.params) row.push_back(number(v));
    row.push_back(number(s.lhs));
    row.push_back(number(s.rhs));
    row.push_back(number(s.ratio));
    rows.push_back(std::move(row));
  }
  Json columns = report.param_names;
  columns.push_back("lhs");
  columns.push_back("rhs");
  columns.push_back("ratio");
  return {{"name", report.name},
          {"c_emp", number(report.c_emp())},
          {"C_emp", number(report.C_emp())},
          {"columns", columns},
          {"samples", rows}};
}

Json to_json(const SuiteResult& result) {
  Json checks = Json::array();
  for (const Check& c : result.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"limit", number(c.limit)},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  Json reports = Json::array();
  for (const RatioReport& r : result.reports) reports.push_back(to_json(r));
  return {{"format_version", kReportFormatVersion},
          {"suite", result.suite},
          {"pass", result.pass()},
          {"checks", checks},
          {"summary", result.summary},
          {"reports", reports}};
}

void write_suite_csv(std::ostream& os, const SuiteResult& result) {
  os << "# sqg ratio report,format_version=" << kReportFormatVersion << ",suite=" << result.suite << '\n';
  for (const RatioReport& r : result.reports) {
    std::ostringstream body;
    write_csv(body, r);
    std::istringstream lines(body.str());
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      os << (header ? "report," : r.name + ",") << line << '\n';
      header = false;
    }
  }
}

}  // namespace sqg::cli
