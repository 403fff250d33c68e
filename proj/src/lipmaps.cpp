#include "banach/lipmaps.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "banach/errors.hpp"

namespace banach {

std::string metric_name(Metric m) { return m == Metric::hamming ? "hamming" : "johnson"; }

Metric parse_metric(std::string_view text) {
  if (text == "hamming") return Metric::hamming;
  if (text == "johnson") return Metric::johnson;
  throw ParseError("unknown metric '" + std::string(text) + "'");
}

std::string format_extended(const Extended& e, int power) {
  return e.infinite ? "inf" : format_norm_value(e.value, power);
}

namespace {

Scalar power_of(std::size_t d, int power) {
  Scalar out = 1;
  for (int i = 0; i < power; ++i) out *= static_cast<unsigned long>(d);
  return out;
}

}  // namespace

FiniteLipschitzMap::FiniteLipschitzMap(GroundSet ground, std::size_t k, Metric metric,
                                       NormEnginePtr codomain,
                                       const std::function<FiniteVector(const KSubset&)>& image)
    : ground_(std::move(ground)), k_(k), metric_(metric), codomain_(std::move(codomain)) {
  points_ = enumerate_ksubsets(ground_, k_);
  images_.reserve(points_.size());
  for (const auto& p : points_) images_.push_back(image(p));
  validate();
}

FiniteLipschitzMap::FiniteLipschitzMap(GroundSet ground, std::size_t k, Metric metric,
                                       NormEnginePtr codomain, std::vector<FiniteVector> images)
    : ground_(std::move(ground)),
      k_(k),
      metric_(metric),
      codomain_(std::move(codomain)),
      images_(std::move(images)) {
  points_ = enumerate_ksubsets(ground_, k_);
  if (images_.size() != points_.size()) {
    throw InvalidArgument("map table has " + std::to_string(images_.size()) +
                          " images for " + std::to_string(points_.size()) + " points");
  }
  validate();
}

void FiniteLipschitzMap::validate() {
  if (!codomain_) throw InvalidArgument("map needs a codomain engine");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    codomain_->check_support(images_[i]);
    index_.emplace(points_[i], i);
  }
}

std::size_t FiniteLipschitzMap::index_of(const KSubset& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw InvalidArgument(format_ksubset(s) + " is not a domain point");
  return it->second;
}

std::size_t FiniteLipschitzMap::domain_distance(const KSubset& a, const KSubset& b) const {
  return metric_ == Metric::hamming ? hamming_distance(a, b) : johnson_distance(a, b);
}

const std::vector<PairDistance>& FiniteLipschitzMap::pair_distances(unsigned jobs) const {
  std::lock_guard lock(cache_->mutex);
  if (cache_->ready) return cache_->pairs;
  auto& pairs = cache_->pairs;
  const auto n = static_cast<std::uint32_t>(points_.size());
  pairs.clear();
  pairs.reserve(static_cast<std::size_t>(n) * (n - (n > 0)) / 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      pairs.push_back({i, j, static_cast<std::uint32_t>(domain_distance(points_[i], points_[j])),
                       Scalar(0)});
    }
  }
  jobs = std::max(1u, jobs);
  auto work = [&](std::size_t worker) {
    for (std::size_t p = worker; p < pairs.size(); p += jobs) {
      pairs[p].codomain = codomain_->evaluate(images_[pairs[p].i] - images_[pairs[p].j]);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    threads.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  cache_->ready = true;
  return pairs;
}

Scalar lip_constant(const FiniteLipschitzMap& f) {
  if (f.points().size() < 2) throw InvalidArgument("Lipschitz constant needs two domain points");
  Scalar best = 0;
  for (const auto& p : f.pair_distances()) {
    if (p.domain == 0) continue;
    Scalar ratio = p.codomain / power_of(p.domain, f.power());
    if (ratio > best) best = std::move(ratio);
  }
  return best;
}

Extended compression_modulus(const FiniteLipschitzMap& f, const Scalar& t) {
  if (t <= 0) return Extended::finite(0);
  Extended best = Extended::infinity();
  for (const auto& p : f.pair_distances()) {
    if (Scalar(p.domain) < t) continue;
    if (best.infinite || p.codomain < best.value) best = Extended::finite(p.codomain);
  }
  return best;
}

Scalar expansion_modulus(const FiniteLipschitzMap& f, const Scalar& t) {
  Scalar best = 0;
  if (t < 0) return best;
  for (const auto& p : f.pair_distances()) {
    if (Scalar(p.domain) > t) continue;
    if (p.codomain > best) best = p.codomain;
  }
  return best;
}

ModuliProfile moduli_profile(const FiniteLipschitzMap& f, std::vector<Scalar> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  ModuliProfile out;
  out.thresholds = std::move(thresholds);
  for (const auto& t : out.thresholds) {
    out.rho.push_back(compression_modulus(f, t));
    out.omega.push_back(expansion_modulus(f, t));
  }
  return out;
}

CoarseFit coarse_lipschitz_fit(const FiniteLipschitzMap& f, const Scalar& theta) {
  std::optional<CoarseFit> fit;
  for (const auto& p : f.pair_distances()) {
    if (p.domain == 0 || Scalar(p.domain) < theta) continue;
    Scalar ratio = p.codomain / power_of(p.domain, f.power());
    if (!fit) {
      fit = CoarseFit{ratio, ratio};
    } else {
      if (ratio < fit->c1) fit->c1 = ratio;
      if (ratio > fit->c2) fit->c2 = ratio;
    }
  }
  if (!fit) throw InvalidArgument("no pair at distance >= " + format_scalar(theta));
  return *fit;
}

namespace {

void require_unit_ball(const NormEngine& codomain, const FiniteVector& x) {
  if (codomain.evaluate(x) > 1) {
    throw InvalidArgument("image " + format_inline(x) + " lies outside the " + codomain.name() +
                          " unit ball");
  }
}

}  // namespace

FiniteLipschitzMap summing_map(const GroundSet& ground,
                               const std::vector<FiniteVector>& basis_images, std::size_t k,
                               NormEnginePtr codomain, Metric metric) {
  if (basis_images.size() != ground.size()) {
    throw InvalidArgument("summing map needs one basis image per ground element");
  }
  for (const auto& x : basis_images) require_unit_ball(*codomain, x);
  const Scalar half(1, 2);
  return FiniteLipschitzMap(ground, k, metric, std::move(codomain), [&](const KSubset& m) {
    FiniteVector sum;
    for (Index e : m.elements()) sum += basis_images[ground.position(e)];
    return sum * half;
  });
}

FiniteLipschitzMap array_map(const GroundSet& ground,
                             const std::vector<std::vector<FiniteVector>>& rows, std::size_t k,
                             NormEnginePtr codomain, Metric metric) {
  if (rows.size() != k) throw InvalidArgument("array map needs exactly k rows");
  for (const auto& row : rows) {
    if (row.size() != ground.size()) throw InvalidArgument("array map: missing array entries");
    for (const auto& x : row) require_unit_ball(*codomain, x);
  }
  const Scalar half(1, 2);
  return FiniteLipschitzMap(ground, k, metric, std::move(codomain), [&](const KSubset& m) {
    FiniteVector sum;
    for (std::size_t i = 0; i < k; ++i) sum += rows[i][ground.position(m[i])];
    return sum * half;
  });
}

FiniteLipschitzMap constant_map(const GroundSet& ground, std::size_t k, const FiniteVector& value,
                                NormEnginePtr codomain, Metric metric) {
  return FiniteLipschitzMap(ground, k, metric, std::move(codomain),
                            [&](const KSubset&) { return value; });
}

std::vector<FiniteVector> unit_images(const GroundSet& ground) {
  std::vector<FiniteVector> out;
  for (Index e : ground.elements()) out.push_back(FiniteVector::unit(e));
  return out;
}

std::vector<std::vector<FiniteVector>> disjoint_block_rows(const GroundSet& ground, std::size_t k) {
  std::vector<std::vector<FiniteVector>> rows(k);
  const auto width = static_cast<Index>(ground.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (Index p = 0; p < width; ++p) {
      rows[i].push_back(FiniteVector::unit(static_cast<Index>(i) * width + p + 1));
    }
  }
  return rows;
}

void write_map(std::ostream& out, const FiniteLipschitzMap& f) {
  out << "k=" << f.k() << " metric=" << metric_name(f.metric())
      << " codomain=" << f.codomain().name() << " ground=" << format_ground(f.ground()) << '\n';
  for (std::size_t i = 0; i < f.points().size(); ++i) {
    out << format_ksubset(f.points()[i]) << " -> " << format_inline(f.images()[i]) << '\n';
  }
}

FiniteLipschitzMap read_map(
    std::istream& in, const std::function<NormEnginePtr(const std::string&, Index)>& resolve) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("map file: missing header");
  std::istringstream fields(header);
  std::map<std::string, std::string> kv;
  std::string token;
  while (fields >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("map header: bad field '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"k", "metric", "codomain", "ground"}) {
    if (!kv.count(key)) throw ParseError(std::string("map header: missing ") + key);
  }
  std::size_t k = 0;
  try {
    k = std::stoul(kv["k"]);
  } catch (const std::exception&) {
    throw ParseError("map header: bad k");
  }
  const Metric metric = parse_metric(kv["metric"]);
  const GroundSet ground = parse_ground(kv["ground"]);
  const auto points = enumerate_ksubsets(ground, k);
  std::map<KSubset, FiniteVector> table;
  std::string line;
  int line_no = 1;
  Index dim = ground.elements().empty() ? 1 : ground.elements().back();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw ParseError("map line " + std::to_string(line_no) + ": expected '->'");
    }
    std::string lhs = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + 2);
    lhs.erase(lhs.find_last_not_of(" \t") + 1);
    rhs.erase(0, rhs.find_first_not_of(" \t"));
    const KSubset point = parse_ksubset(lhs);
    FiniteVector image = !rhs.empty() && rhs.front() == '@' ? read_vector_file(rhs.substr(1))
                                                             : parse_inline(rhs);
    dim = std::max(dim, image.max_index());
    if (!table.emplace(point, std::move(image)).second) {
      throw ParseError("map line " + std::to_string(line_no) + ": duplicate point");
    }
  }
  std::vector<FiniteVector> images;
  for (const auto& p : points) {
    auto it = table.find(p);
    if (it == table.end()) throw ParseError("map file: no image for " + format_ksubset(p));
    images.push_back(it->second);
  }
  if (table.size() != points.size()) throw ParseError("map file: points outside [M]^k");
  return FiniteLipschitzMap(ground, k, metric, resolve(kv["codomain"], dim), std::move(images));
}

void write_pair_csv(std::ostream& out, const FiniteLipschitzMap& f) {
  out << "pair,d_domain,d_codomain,ratio\n";
  for (const auto& p : f.pair_distances()) {
    out << '"' << format_pair({f.points()[p.i], f.points()[p.j]}) << "\"," << p.domain << ','
        << format_norm_value(p.codomain, f.power()) << ','
        << format_norm_value(p.codomain / power_of(p.domain, f.power()), f.power()) << '\n';
  }
}

}  // namespace banach
