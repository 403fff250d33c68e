#include "banach/james.hpp"

#include <algorithm>
#include <unordered_map>

#include "banach/errors.hpp"

namespace banach {

std::vector<Index> IntervalSystem::anchors() const {
  std::vector<Index> out;
  out.reserve(intervals.size());
  for (const auto& s : intervals) out.push_back(s.lo);
  return out;
}

void for_each_interval_system(Interval span,
                              const std::function<void(const std::vector<Interval>&)>& visit) {
  if (span.lo == 0 || span.lo > span.hi) throw InvalidArgument("malformed span");
  std::vector<Interval> current;
  auto extend = [&](auto&& self, Index from) -> void {
    for (Index lo = from; lo <= span.hi; ++lo) {
      for (Index hi = lo; hi <= span.hi; ++hi) {
        current.push_back({lo, hi});
        visit(current);
        self(self, hi + 1);
        current.pop_back();
      }
    }
  };
  extend(extend, span.lo);
}

std::vector<IntervalSystem> enumerate_interval_systems(Interval span) {
  std::vector<IntervalSystem> out;
  for_each_interval_system(span, [&](const std::vector<Interval>& s) { out.push_back({s}); });
  auto covered = [](const IntervalSystem& s) {
    Index n = 0;
    for (const auto& i : s.intervals) n += i.size();
    return n;
  };
  std::sort(out.begin(), out.end(), [&](const IntervalSystem& x, const IntervalSystem& y) {
    if (x.intervals.size() != y.intervals.size()) return x.intervals.size() < y.intervals.size();
    const Index cx = covered(x), cy = covered(y);
    if (cx != cy) return cx < cy;
    return x.intervals < y.intervals;
  });
  return out;
}

Scalar james_norm(const FiniteVector& a, const NormEngine& base, std::optional<Interval> span) {
  if (a.is_zero()) return 0;
  const Interval range = span.value_or(Interval{1, a.max_index()});
  if (range.hi > base.dimension()) {
    throw DimensionError("james: span reaches " + std::to_string(range.hi) +
                         " beyond base dimension " + std::to_string(base.dimension()));
  }
  if (a.min_index() < range.lo || a.max_index() > range.hi) {
    throw DimensionError("james: support outside the enumeration span");
  }
  // prefix[j] = a_{range.lo} + ... + a_j
  std::vector<Scalar> prefix(range.hi + 1, Scalar(0));
  for (Index j = range.lo; j <= range.hi; ++j) prefix[j] = prefix[j - 1] + a[j];

  const bool unconditional = base.unconditional();
  std::unordered_map<FiniteVector, Scalar, FiniteVectorHash> memo;
  Scalar best = 0;
  std::vector<FiniteVector::Entry> assembled;
  for_each_interval_system(range, [&](const std::vector<Interval>& system) {
    assembled.clear();
    for (const auto& s : system) {
      Scalar sum = prefix[s.hi] - prefix[s.lo - 1];
      if (sum == 0) continue;
      if (unconditional && sum < 0) sum = -sum;
      assembled.emplace_back(s.lo, std::move(sum));
    }
    if (assembled.empty()) return;
    FiniteVector key(assembled);
    auto it = memo.find(key);
    if (it == memo.end()) {
      Scalar value = base.evaluate(key);
      it = memo.emplace(std::move(key), std::move(value)).first;
    }
    if (it->second > best) best = it->second;
  });
  return best;
}

JamesEngine::JamesEngine(NormEnginePtr base) : base_(std::move(base)) {
  if (!base_) throw InvalidArgument("JamesEngine needs a base engine");
}

}  // namespace banach
