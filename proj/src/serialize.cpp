#include "latgauss/serialize.hpp"

#include <cinttypes>
#include <cstdio>

namespace lg {

Rat rat_from_json(const ojson& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
  if (j.is_number_float()) return rat_from_double(j.get<double>());
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  throw ParseError("expected a number or a numeric string");
}

ojson rat_to_json(const Rat& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) {
    return ojson(static_cast<int64_t>(r.get_num().get_si()));
  }
  return ojson(rat_to_string(r));
}

RatVec vec_from_json(const ojson& j) {
  if (!j.is_array()) throw ParseError("expected an array of numbers");
  RatVec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(rat_from_json(e));
  return v;
}

ojson vec_to_json(const RatVec& v) {
  ojson a = ojson::array();
  for (const Rat& r : v) a.push_back(rat_to_json(r));
  return a;
}

Lattice lattice_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("basis")) throw ParseError("expected {\"basis\": [[...], ...]}");
  const ojson& b = j.at("basis");
  if (!b.is_array() || b.empty()) throw ParseError("basis must be a nonempty array of rows");
  int n = static_cast<int>(b.size());
  RatMat rows(n, n);
  for (int i = 0; i < n; ++i) {
    const ojson& row = b.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError("basis must be square");
    for (int jj = 0; jj < n; ++jj) rows.at(i, jj) = rat_from_json(row.at(jj));
  }
  return make_lattice(rows);
}

ojson lattice_to_json(const Lattice& L) {
  ojson rows = ojson::array();
  for (int i = 0; i < L.dim(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < L.dim(); ++j) row.push_back(rat_to_json(L.basis().at(j, i)));
    rows.push_back(row);
  }
  return ojson{{"basis", rows}};
}

GaussianParam param_from_json(const ojson& j) {
  if (!j.is_object()) throw ParseError("param must be an object");
  if (j.contains("s")) {
    Rat s = rat_from_json(j.at("s"));
    if (!(s > 0)) throw ParseError("param s must be positive");
    return GaussianParam::scalar_s2(s * s);
  }
  if (j.contains("sigma")) {
    const ojson& m = j.at("sigma");
    if (!m.is_array() || m.empty()) throw ParseError("sigma must be a matrix");
    int n = static_cast<int>(m.size());
    RatMat sig(n, n);
    for (int i = 0; i < n; ++i) {
      if (!m.at(i).is_array() || static_cast<int>(m.at(i).size()) != n)
        throw ParseError("sigma must be square");
      for (int jj = 0; jj < n; ++jj) sig.at(i, jj) = rat_from_json(m.at(i).at(jj));
    }
    return GaussianParam::matrix(sig);
  }
  throw ParseError("param must contain \"s\" or \"sigma\"");
}

ojson param_to_json(const GaussianParam& p) {
  if (p.is_scalar()) {
    // s^2 is the exact stored quantity
    return ojson{{"s", p.s()}, {"s2", rat_to_json(p.s2())}};
  }
  ojson m = ojson::array();
  for (int i = 0; i < p.matrix_dim(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < p.matrix_dim(); ++j) row.push_back(rat_to_json(p.sigma().at(i, j)));
    m.push_back(row);
  }
  return ojson{{"sigma", m}};
}

ojson certified_to_json(const CertifiedValue& c) {
  ojson j{{"value", c.value}, {"err", c.err}, {"radius", c.radius}};
  if (c.warning) j["warning"] = true;
  return j;
}

namespace {

ojson mat_to_json(const Mat& m) {
  ojson rows = ojson::array();
  for (const auto& r : m) {
    ojson row = ojson::array();
    for (double v : r) row.push_back(v);
    rows.push_back(row);
  }
  return rows;
}

ojson dvec_to_json(const Vec& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

ojson moment_report_to_json(const MomentReport& r) {
  return ojson{{"mass", certified_to_json(r.normalizer)},
               {"mean", dvec_to_json(r.mean)},
               {"mean_err", dvec_to_json(r.mean_err)},
               {"second", mat_to_json(r.second)},
               {"second_err", mat_to_json(r.second_err)},
               {"covariance", mat_to_json(r.covariance)},
               {"covariance_err", mat_to_json(r.covariance_err)},
               {"mean_norm", r.mean_norm},
               {"mean_norm_err", r.mean_norm_err}};
}

ojson derivative_report_to_json(const DerivativeReport& r) {
  return ojson{{"f", certified_to_json(r.f)},
               {"grad", dvec_to_json(r.grad)},
               {"grad_err", dvec_to_json(r.grad_err)},
               {"hess", mat_to_json(r.hess)},
               {"hess_err", mat_to_json(r.hess_err)}};
}

ojson verdict_to_json(const Verdict& v) {
  ojson inst;
  try {
    inst = ojson::parse(v.instance);
  } catch (...) {
    inst = v.instance;
  }
  return ojson{{"name", v.name},
               {"status", status_name(v.status)},
               {"lhs", ojson{{"lo", v.lhs.lo}, {"hi", v.lhs.hi}}},
               {"rhs", ojson{{"lo", v.rhs.lo}, {"hi", v.rhs.hi}}},
               {"margin", v.margin},
               {"instance", inst}};
}

ojson split_report_to_json(const SplitReport& r) {
  ojson terms = ojson::array();
  for (const auto& [a, b] : r.per_coset) {
    terms.push_back(ojson{{"plus", certified_to_json(a)}, {"minus", certified_to_json(b)}});
  }
  return ojson{{"lhs", certified_to_json(r.lhs)},
               {"per_coset", terms},
               {"rhs", certified_to_json(r.rhs)},
               {"gap", std::fabs(r.lhs.value - r.rhs.value)},
               {"gap_budget", r.lhs.err + r.rhs.err}};
}

ojson campaign_to_json(const CampaignSummary& s) {
  ojson checks = ojson::object();
  for (const auto& [name, c] : s.per_check) {
    ojson one{{"holds", c.holds},
              {"inconclusive", c.inconclusive},
              {"violated", c.violated},
              {"worst_margin", c.worst_margin}};
    if (!c.non_holds.empty()) {
      ojson bad = ojson::array();
      for (const auto& d : c.non_holds) {
        try {
          bad.push_back(ojson::parse(d));
        } catch (...) {
          bad.push_back(d);
        }
      }
      one["non_holds"] = bad;
    }
    checks[name] = one;
  }
  return ojson{{"ensemble",
                ojson{{"kind", ensemble_kind_name(s.ensemble.kind)},
                      {"dim_max", s.ensemble.dim_max},
                      {"entry_bound", s.ensemble.entry_bound},
                      {"seed", s.ensemble.seed}}},
               {"trials", s.trials},
               {"eps", s.eps},
               {"checks", checks},
               {"violated_total", s.violated_total},
               {"inconclusive_total", s.inconclusive_total},
               {"verdict_total", s.verdict_total},
               {"inconclusive_rate", s.inconclusive_rate},
               {"elapsed_seconds", s.elapsed_seconds}};
}

std::string serialize_batch_csv(const SampleBatch& b) {
  ojson header{{"seed", b.seed},
               {"count", b.count},
               {"tv_bound", b.tv_bound},
               {"param", param_to_json(b.param)},
               {"lattice", lattice_to_json(b.coset.lattice)},
               {"shift", vec_to_json(b.coset.shift)}};
  std::string out = header.dump();
  out.push_back('\n');
  char buf[64];
  for (const auto& w : b.samples) {
    for (size_t i = 0; i < w.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", w[i]);
      if (i) out.push_back(',');
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace lg
