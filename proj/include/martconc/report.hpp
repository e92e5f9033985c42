#pragma once

/*
 * Deterministic machine-readable output.
 *
 * Doubles render as %.17g (lossless round trip); documents carry their keys
 * in insertion order; nothing time- or locale-dependent is ever emitted, so
 * a report is byte-identical across runs, thread counts and platforms.
 * Nonfinite doubles appear as the quoted strings "inf", "-inf", "nan" in
 * JSON and as bare tokens in CSV.
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "simulation.hpp"

namespace martconc {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/* An ordered flat document; nested parts are rendered eagerly to JSON. */
class Doc {
 public:
  void put(const std::string& key, double v) {
    entries_.push_back({key, format_double(v),
                        std::isfinite(v) ? Kind::number : Kind::string});
  }
  void put_int(const std::string& key, std::int64_t v) {
    entries_.push_back({key, std::to_string(v), Kind::number});
  }
  void put_str(const std::string& key, const std::string& v) {
    entries_.push_back({key, v, Kind::string});
  }
  void put_bool(const std::string& key, bool v) {
    entries_.push_back({key, v ? "true" : "false", Kind::literal});
  }
  void put_doc(const std::string& key, const Doc& d) {
    entries_.push_back({key, d.json(), Kind::raw});
  }
  void put_docs(const std::string& key, const std::vector<Doc>& docs) {
    std::string arr = "[";
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (i) arr += ",";
      arr += docs[i].json();
    }
    arr += "]";
    entries_.push_back({key, arr, Kind::raw});
  }

  std::string json() const {
    std::string out = "{";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ",";
      out += "\"" + detail::json_escape(entries_[i].key) + "\":";
      switch (entries_[i].kind) {
        case Kind::number:
        case Kind::literal:
        case Kind::raw:
          out += entries_[i].value;
          break;
        case Kind::string:
          out += "\"" + detail::json_escape(entries_[i].value) + "\"";
          break;
      }
    }
    out += "}";
    return out;
  }

  /* CSV over flat rows sharing the first row's keys, header included. */
  static std::string csv(const std::vector<Doc>& rows) {
    if (rows.empty()) return "";
    std::string out;
    for (std::size_t i = 0; i < rows[0].entries_.size(); ++i) {
      if (i) out += ",";
      out += rows[0].entries_[i].key;
    }
    out += "\n";
    for (const Doc& row : rows) {
      for (std::size_t i = 0; i < row.entries_.size(); ++i) {
        if (i) out += ",";
        out += row.entries_[i].value;
      }
      out += "\n";
    }
    return out;
  }

 private:
  enum class Kind { number, string, literal, raw };
  struct Entry {
    std::string key, value;
    Kind kind;
  };
  std::vector<Entry> entries_;
};

/* Scenario parameters relevant to the given kind, flattened. */
inline void put_scenario(Doc& doc, const ScenarioSpec& s) {
  doc.put_str("scenario", to_string(s.kind));
  doc.put_int("n", std::int64_t(s.n));
  switch (s.kind) {
    case ScenarioKind::iid_bernoulli:
      doc.put("b", s.b);
      break;
    case ScenarioKind::dependent_bounded:
      doc.put("b", s.b);
      doc.put("dependence", s.dependence);
      break;
    case ScenarioKind::mds_bounded:
      doc.put("alpha", s.alpha);
      doc.put("beta", s.beta);
      doc.put_str("shape", to_string(s.shape));
      break;
    case ScenarioKind::iw_sampling: {
      doc.put_int("num_arms", std::int64_t(s.num_arms));
      doc.put("p_min", s.p_min);
      doc.put_bool("adaptive", s.adaptive);
      std::string r;
      for (double v : s.arm_rewards()) {
        if (!r.empty()) r += " ";
        r += format_double(v);
      }
      doc.put_str("rewards", r);
      break;
    }
  }
}

inline Doc doc_of(const BoundOutcome& o) {
  Doc d;
  d.put_str("bound", to_string(o.id));
  d.put_int("violations", std::int64_t(o.violations));
  d.put("rate", o.rate);
  d.put("band", o.band);
  d.put_bool("within_band", o.within_band);
  d.put("mean_radius", o.mean_radius);
  d.put("mean_width", o.mean_width);
  d.put_int("grid_ok_count", std::int64_t(o.grid_ok_count));
  d.put_int("fallback_count", std::int64_t(o.fallback_count));
  d.put("mean_nu", o.mean_nu);
  d.put("mean_lambda", o.mean_lambda);
  d.put("crossover_fraction", o.crossover_fraction);
  return d;
}

inline Doc doc_of(const ExperimentReport& r) {
  Doc d;
  put_scenario(d, r.scenario);
  d.put("delta", r.params.delta);
  d.put("c", r.params.c);
  d.put("gibbs_gamma", r.params.gibbs_gamma);
  d.put_int("trials", std::int64_t(r.params.trials));
  d.put_int("seed", std::int64_t(r.params.master_seed));
  d.put_str("generator", r.generator);
  std::vector<Doc> rows;
  rows.reserve(r.outcomes.size());
  for (const auto& o : r.outcomes) rows.push_back(doc_of(o));
  d.put_docs("outcomes", rows);
  return d;
}

inline std::string report_json(const ExperimentReport& r) {
  return doc_of(r).json();
}

/* One CSV row per bound outcome, metadata repeated on every row. */
inline std::string report_csv(const ExperimentReport& r) {
  std::vector<Doc> rows;
  for (const auto& o : r.outcomes) {
    Doc d;
    put_scenario(d, r.scenario);
    d.put("delta", r.params.delta);
    d.put("c", r.params.c);
    d.put("gibbs_gamma", r.params.gibbs_gamma);
    d.put_int("trials", std::int64_t(r.params.trials));
    d.put_int("seed", std::int64_t(r.params.master_seed));
    d.put_str("generator", r.generator);
    d.put_str("bound", to_string(o.id));
    d.put_int("violations", std::int64_t(o.violations));
    d.put("rate", o.rate);
    d.put("band", o.band);
    d.put_bool("within_band", o.within_band);
    d.put("mean_radius", o.mean_radius);
    d.put("mean_width", o.mean_width);
    d.put_int("grid_ok_count", std::int64_t(o.grid_ok_count));
    d.put_int("fallback_count", std::int64_t(o.fallback_count));
    d.put("mean_nu", o.mean_nu);
    d.put("mean_lambda", o.mean_lambda);
    d.put("crossover_fraction", o.crossover_fraction);
    rows.push_back(d);
  }
  return Doc::csv(rows);
}

inline Doc doc_of(const TightnessRow& row) {
  Doc d;
  d.put("phat", row.phat);
  d.put("eps", row.eps);
  d.put("kl_lo", row.kl_lo);
  d.put("kl_hi", row.kl_hi);
  d.put("pinsker_lo", row.pinsker_lo);
  d.put("pinsker_hi", row.pinsker_hi);
  d.put("refined_hi", row.refined_hi);
  d.put("ha_lo", row.ha_lo);
  d.put("ha_hi", row.ha_hi);
  d.put("bern_lo", row.bern_lo);
  d.put("bern_hi", row.bern_hi);
  d.put_str("winner", row.winner);
  d.put_bool("refined_below_ha", row.refined_below_ha);
  return d;
}

}  // namespace martconc
