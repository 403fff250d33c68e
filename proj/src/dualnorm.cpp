#include "banach/dualnorm.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "banach/errors.hpp"
#include "banach/simplex.hpp"

namespace banach {

PolyhedralNormDescription PolyhedralNormDescription::from_norming_set(const NormingSet& set) {
  PolyhedralNormDescription d;
  d.lo = set.lo;
  d.N = set.N;
  d.generators = set.functionals;
  d.origin = "t";
  return d;
}

namespace {

void check_window(const FiniteVector& x, const PolyhedralNormDescription& d) {
  if (x.is_zero()) return;
  if (x.min_index() < d.lo || x.max_index() > d.N) {
    throw DimensionError("support of vector outside {" + std::to_string(d.lo) + ".." +
                         std::to_string(d.N) + "}");
  }
}

// LP columns: projections of generators onto the row set, each remembering
// one original generator it came from.
struct Column {
  Functional projected;
  const Functional* origin;
};

bool is_unit(const Functional& f) { return f.terms().size() == 1 && f.terms()[0].second == 0; }

std::vector<Column> build_columns(const PolyhedralNormDescription& d,
                                  const std::vector<Index>& rows, bool restrict,
                                  const GaugeOptions& options) {
  if (d.generators.size() > options.max_generators) {
    throw ResourceLimitError("polyhedral description has " +
                             std::to_string(d.generators.size()) +
                             " generators, above the configured limit");
  }
  std::map<Functional, const Functional*> distinct;
  for (const auto& g : d.generators) {
    Functional p = restrict ? g.project(rows) : g;
    if (p.terms().empty()) continue;
    auto it = distinct.find(p);
    if (it == distinct.end()) {
      distinct.emplace(std::move(p), &g);
    } else if (is_unit(g) && !is_unit(*it->second)) {
      it->second = &g;
    }
  }
  std::vector<Column> columns;
  columns.reserve(distinct.size());
  for (auto& [p, g] : distinct) columns.push_back({p, g});
  if (!restrict) return columns;

  // A dominated column never helps cover |y| at equal cost.
  auto weight = [](const Functional& f) {
    Scalar w = 0;
    for (const auto& [i, dep] : f.terms()) w += dyadic(dep);
    return w;
  };
  std::vector<std::pair<Scalar, std::size_t>> order;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    order.emplace_back(weight(columns[i].projected), i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Column> kept;
  for (const auto& [w, i] : order) {
    const auto& candidate = columns[i].projected;
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Column& k) {
      return k.projected.dominates(candidate);
    });
    if (!dominated) kept.push_back(columns[i]);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Column& a, const Column& b) { return a.projected < b.projected; });
  return kept;
}

Scalar signed_coefficient(const GaugeTerm& t, Index i) {
  const auto fterms = t.functional.terms();
  for (std::size_t k = 0; k < fterms.size(); ++k) {
    if (fterms[k].first != i) continue;
    const Scalar c = dyadic(fterms[k].second);
    return t.signs[k] < 0 ? Scalar(-c) : c;
  }
  return 0;
}

// Splits terms into sign patterns until sum_j w_j sigma_j f_j == target.
// Every coordinate starts with a nonnegative surplus over target.
void remove_slack(std::vector<GaugeTerm>& terms, const FiniteVector& target) {
  std::vector<Index> coords;
  for (const auto& t : terms) {
    for (const auto& [i, dep] : t.functional.terms()) coords.push_back(i);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  for (Index i : coords) {
    Scalar total = 0;
    for (const auto& t : terms) total += t.weight * signed_coefficient(t, i);
    Scalar surplus = total - target[i];
    if (surplus < 0) throw VerificationError("gauge LP solution does not cover the input");
    for (std::size_t k = 0; k < terms.size() && surplus > 0; ++k) {
      auto& t = terms[k];
      const auto& fterms = t.functional.terms();
      auto pos = std::find_if(fterms.begin(), fterms.end(),
                              [&](const Functional::Term& ft) { return ft.first == i; });
      if (pos == fterms.end()) continue;
      const std::size_t slot = static_cast<std::size_t>(pos - fterms.begin());
      if (t.signs[slot] < 0) continue;
      const Scalar c = dyadic(pos->second);
      // Moving weight a to the flipped pattern lowers coordinate i by 2ac.
      const Scalar full = 2 * t.weight * c;
      if (full <= surplus) {
        t.signs[slot] = -1;
        surplus -= full;
      } else {
        const Scalar a = surplus / (2 * c);
        GaugeTerm flipped = t;
        flipped.weight = a;
        flipped.signs[slot] = -1;
        t.weight -= a;
        terms.push_back(std::move(flipped));
        surplus = 0;
      }
    }
    if (surplus != 0) throw VerificationError("could not balance gauge decomposition");
  }
  std::erase_if(terms, [](const GaugeTerm& t) { return t.weight == 0; });
}

}  // namespace

FiniteVector GaugeTerm::signed_vector() const {
  std::vector<FiniteVector::Entry> entries;
  const auto fterms = functional.terms();
  for (std::size_t k = 0; k < fterms.size(); ++k) {
    Scalar c = dyadic(fterms[k].second);
    if (signs[k] < 0) c = -c;
    entries.emplace_back(fterms[k].first, std::move(c));
  }
  return FiniteVector(std::move(entries));
}

Scalar support_norm(const FiniteVector& x, const PolyhedralNormDescription& d) {
  check_window(x, d);
  const FiniteVector a = abs_vector(x);
  Scalar best = 0;
  for (const auto& f : d.generators) {
    Scalar value = f.apply(a);
    if (value > best) best = std::move(value);
  }
  return best;
}

GaugeResult gauge_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                       const GaugeOptions& options) {
  check_window(y, d);
  GaugeResult result;
  if (y.is_zero()) {
    if (options.verify) result.packing_value = Scalar(0);
    return result;
  }
  const FiniteVector target = abs_vector(y);
  std::vector<Index> rows;
  if (options.restrict_columns) {
    rows = target.support();
  } else {
    for (Index i = d.lo; i <= d.N; ++i) rows.push_back(i);
  }
  const auto columns = build_columns(d, rows, options.restrict_columns, options);
  result.columns = columns.size();

  // Covering LP  min 1'w  s.t.  F w - s = |y|,  started from the basis of
  // unit columns (w_i = |y_i|), which is feasible.
  const std::size_t m = columns.size();
  const std::size_t r = rows.size();
  std::vector<int> unit_column(r, -1);
  for (std::size_t j = 0; j < m; ++j) {
    if (!is_unit(columns[j].projected)) continue;
    const auto at = std::lower_bound(rows.begin(), rows.end(), columns[j].projected.min_index());
    unit_column[static_cast<std::size_t>(at - rows.begin())] = static_cast<int>(j);
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (unit_column[i] < 0) {
      throw VerificationError("generators do not contain e_" + std::to_string(rows[i]) +
                              "*; gauge LP has no starting basis");
    }
  }
  lp::Dictionary dict;
  const int surplus_base = static_cast<int>(m);
  for (std::size_t i = 0; i < r; ++i) {
    dict.basic.push_back(unit_column[i]);
    dict.b.push_back(target[rows[i]]);
  }
  std::vector<char> is_basic(m, 0);
  for (int u : unit_column) is_basic[static_cast<std::size_t>(u)] = 1;
  for (std::size_t j = 0; j < m; ++j) {
    if (!is_basic[j]) dict.nonbasic.push_back(static_cast<int>(j));
  }
  for (std::size_t i = 0; i < r; ++i) dict.nonbasic.push_back(surplus_base + static_cast<int>(i));
  dict.a.assign(r, std::vector<Scalar>(dict.cols(), Scalar(0)));
  dict.c.assign(dict.cols(), Scalar(0));
  for (std::size_t col = 0; col < dict.cols(); ++col) {
    const int id = dict.nonbasic[col];
    if (id >= surplus_base) {
      dict.a[static_cast<std::size_t>(id - surplus_base)][col] = -1;
      dict.c[col] = -1;
      continue;
    }
    Scalar colsum = 0;
    for (const auto& [i, dep] : columns[static_cast<std::size_t>(id)].projected.terms()) {
      const auto at = std::lower_bound(rows.begin(), rows.end(), i);
      const Scalar v = dyadic(dep);
      dict.a[static_cast<std::size_t>(at - rows.begin())][col] = v;
      colsum += v;
    }
    dict.c[col] = colsum - 1;
  }
  for (const auto& b : dict.b) dict.z0 -= b;

  const auto outcome = lp::maximize(dict);
  if (outcome.status != lp::Status::optimal) {
    throw VerificationError("covering LP reported unbounded");
  }
  result.pivots = outcome.pivots;
  result.value = -dict.z0;

  GaugeCertificate& cert = result.certificate;
  cert.value = result.value;
  for (std::size_t i = 0; i < r; ++i) {
    const int id = dict.basic[i];
    if (id >= surplus_base || dict.b[i] == 0) continue;
    const Functional& g = *columns[static_cast<std::size_t>(id)].origin;
    cert.decomposition.push_back({g, dict.b[i], std::vector<std::int8_t>(g.terms().size(), 1)});
  }
  std::sort(cert.decomposition.begin(), cert.decomposition.end(),
            [](const GaugeTerm& a, const GaugeTerm& b) { return a.functional < b.functional; });
  remove_slack(cert.decomposition, target);

  std::vector<FiniteVector::Entry> witness;
  for (std::size_t i = 0; i < r; ++i) {
    witness.emplace_back(rows[i], -lp::reduced_cost(dict, surplus_base + static_cast<int>(i)));
  }
  cert.dual_witness = FiniteVector(std::move(witness));

  // Decomposition and the witness against the LP columns.
  Scalar weight_sum = 0;
  FiniteVector rebuilt;
  for (const auto& t : cert.decomposition) {
    if (t.weight < 0) throw VerificationError("negative weight in gauge certificate");
    weight_sum += t.weight;
    rebuilt += t.signed_vector() * t.weight;
  }
  if (weight_sum != cert.value || rebuilt != target) {
    throw VerificationError("gauge certificate does not reproduce |y|");
  }
  if (inner_product(target, cert.dual_witness) != cert.value) {
    throw VerificationError("dual witness pairing differs from LP value");
  }
  for (const auto& col : columns) {
    if (col.projected.apply(cert.dual_witness) > 1) {
      throw VerificationError("dual witness violates a generator constraint");
    }
  }

  if (options.verify) {
    const auto packing = packing_norm(y, d, options);
    result.packing_value = packing.value;
    if (packing.value != result.value) {
      throw VerificationError("LP duality gap: covering " + format_scalar(result.value) +
                              " vs packing " + format_scalar(packing.value));
    }
  }
  return result;
}

PackingResult packing_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                           const GaugeOptions& options) {
  check_window(y, d);
  PackingResult result{0, {}};
  if (y.is_zero()) return result;
  const FiniteVector target = abs_vector(y);
  std::vector<Index> vars;
  if (options.restrict_columns) {
    vars = target.support();
  } else {
    for (Index i = d.lo; i <= d.N; ++i) vars.push_back(i);
  }
  const auto constraints = build_columns(d, vars, options.restrict_columns, options);

  // maximize <|y|, x>  s.t.  f(x) + slack_f = 1; the origin is feasible.
  lp::Dictionary dict;
  const int slack_base = static_cast<int>(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    dict.nonbasic.push_back(static_cast<int>(j));
    dict.c.push_back(target[vars[j]]);
  }
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    dict.basic.push_back(slack_base + static_cast<int>(k));
    dict.b.push_back(1);
    std::vector<Scalar> row(vars.size(), Scalar(0));
    for (const auto& [i, dep] : constraints[k].projected.terms()) {
      const auto at = std::lower_bound(vars.begin(), vars.end(), i);
      row[static_cast<std::size_t>(at - vars.begin())] = dyadic(dep);
    }
    dict.a.push_back(std::move(row));
  }
  const auto outcome = lp::maximize(dict);
  if (outcome.status != lp::Status::optimal) {
    throw VerificationError("packing LP unbounded: generators do not cover the support");
  }
  result.value = dict.z0;
  std::vector<FiniteVector::Entry> x;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    x.emplace_back(vars[j], lp::value_of(dict, static_cast<int>(j)));
  }
  result.maximizer = FiniteVector(std::move(x));
  return result;
}

void check_certificate(const FiniteVector& y, const PolyhedralNormDescription& d,
                       const GaugeCertificate& cert) {
  const FiniteVector target = abs_vector(y);
  Scalar weight_sum = 0;
  FiniteVector rebuilt;
  for (const auto& t : cert.decomposition) {
    if (t.weight < 0) throw VerificationError("negative weight");
    if (t.signs.size() != t.functional.terms().size()) {
      throw VerificationError("sign pattern length mismatch");
    }
    if (!std::binary_search(d.generators.begin(), d.generators.end(), t.functional)) {
      throw VerificationError("decomposition uses a functional outside the generators");
    }
    weight_sum += t.weight;
    rebuilt += t.signed_vector() * t.weight;
  }
  if (weight_sum != cert.value) throw VerificationError("weights do not sum to the value");
  if (rebuilt != target) throw VerificationError("decomposition does not reproduce |y|");
  for (const auto& [i, c] : cert.dual_witness.entries()) {
    if (c < 0) throw VerificationError("dual witness has a negative entry");
  }
  if (inner_product(target, cert.dual_witness) != cert.value) {
    throw VerificationError("dual witness pairing differs from the value");
  }
  for (const auto& f : d.generators) {
    if (f.apply(cert.dual_witness) > 1) {
      throw VerificationError("dual witness leaves the unit ball");
    }
  }
}

std::string format_certificate(const GaugeCertificate& cert) {
  std::ostringstream out;
  out << "value " << format_scalar(cert.value) << '\n';
  for (const auto& t : cert.decomposition) {
    std::string signs;
    for (auto s : t.signs) signs += s > 0 ? '+' : '-';
    out << format_scalar(t.weight) << ' ' << signs << ' ' << format_functional(t.functional)
        << '\n';
  }
  out << "witness " << format_inline(cert.dual_witness) << '\n';
  return out.str();
}

TStarEngine::TStarEngine(std::shared_ptr<const PolyhedralNormDescription> description,
                         GaugeOptions options)
    : description_(std::move(description)), options_(options) {
  if (!description_) throw InvalidArgument("TStarEngine needs a description");
}

GaugeResult TStarEngine::solve(const FiniteVector& y) const {
  return gauge_norm(y, *description_, options_);
}

Scalar TStarEngine::evaluate_unchecked(const FiniteVector& v) const {
  FiniteVector key = abs_vector(v);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  Scalar value = gauge_norm(key, *description_, options_).value;
  std::lock_guard lock(mutex_);
  memo_.emplace(std::move(key), value);
  return value;
}

Scalar tstar_norm(const FiniteVector& y, const PolyhedralNormDescription& d,
                  const GaugeOptions& options) {
  return gauge_norm(y, d, options).value;
}

}  // namespace banach
