#include "petrimbn/factor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

constexpr std::size_t kDenseArityLimit = 26;
constexpr std::size_t kDenseJoinLimit = 22;
constexpr std::size_t kSmallJoin = 14;

void check_entry_count(std::size_t n) {
  if (n > kFactorEntryLimit)
    throw TooLarge("an intermediate factor exceeds " + std::to_string(kFactorEntryLimit) + " entries");
}

// Moves bit i of a key over `from` (MSB first) to the position of its wire in `to_pos`.
struct Scatter {
  std::vector<unsigned> shift;  // destination shift per source position

  Scatter(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to) {
    for (std::size_t w : from) {
      auto it = std::lower_bound(to.begin(), to.end(), w);
      shift.push_back(static_cast<unsigned>(to.size() - 1 - static_cast<std::size_t>(it - to.begin())));
    }
  }

  Bits operator()(Bits key) const {
    Bits out = 0;
    const std::size_t n = shift.size();
    for (std::size_t i = 0; i < n; ++i)
      if ((key >> (n - 1 - i)) & 1U) out |= Bits{1} << shift[i];
    return out;
  }
};

// Inverse of Scatter: collects the bits of a wide key that belong to a subset.
struct Gather {
  std::vector<unsigned> shift;

  Gather(const std::vector<std::size_t>& subset, const std::vector<std::size_t>& all) {
    for (std::size_t w : subset) {
      auto it = std::lower_bound(all.begin(), all.end(), w);
      shift.push_back(static_cast<unsigned>(all.size() - 1 - static_cast<std::size_t>(it - all.begin())));
    }
  }

  Bits operator()(Bits key) const {
    Bits out = 0;
    for (unsigned s : shift) out = (out << 1) | ((key >> s) & 1U);
    return out;
  }
};

std::vector<Factor::Entry> merge_sorted(std::vector<Factor::Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Factor::Entry> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(e);
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0.0; });
  return out;
}

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Factor Factor::scalar(double value) {
  Factor f;
  f.dense_ = {value};
  return f;
}

Factor Factor::dense(std::vector<std::size_t> wires, std::vector<double> values) {
  if (!std::is_sorted(wires.begin(), wires.end()) || std::adjacent_find(wires.begin(), wires.end()) != wires.end())
    throw InvalidArity("dense factor wires must be strictly ascending");
  if (wires.size() > kDenseArityLimit) throw TooLarge("dense factor over " + std::to_string(wires.size()) + " wires");
  if (values.size() != state_count(static_cast<unsigned>(wires.size())))
    throw InvalidArity("dense factor table has the wrong size");
  Factor f;
  f.wires_ = std::move(wires);
  f.dense_ = std::move(values);
  return f;
}

Factor Factor::sparse(std::vector<std::size_t> wires, std::vector<Entry> entries) {
  if (wires.size() > kFactorWireLimit) throw TooLarge("factor over " + std::to_string(wires.size()) + " wires");
  std::vector<std::size_t> sorted = wires;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InvalidArity("factor wires repeat");
  if (sorted != wires) {
    const Scatter to_sorted(wires, sorted);
    for (Entry& e : entries) e.first = to_sorted(e.first);
  }
  Factor f;
  f.wires_ = std::move(sorted);
  f.sparse_ = true;
  f.dense_.clear();
  f.entries_ = merge_sorted(std::move(entries));
  return f.compacted();
}

bool Factor::contains(std::size_t wire) const { return std::binary_search(wires_.begin(), wires_.end(), wire); }

double Factor::value(Bits key) const {
  if (!sparse_) return dense_[key];
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, [](const Entry& e, Bits k) { return e.first < k; });
  return (it != entries_.end() && it->first == key) ? it->second : 0.0;
}

std::size_t Factor::nonzeros() const {
  if (sparse_) return entries_.size();
  return static_cast<std::size_t>(std::count_if(dense_.begin(), dense_.end(), [](double v) { return v != 0.0; }));
}

Factor Factor::compacted() const {
  const std::size_t a = wires_.size();
  if (sparse_) {
    if (a <= kDenseArityLimit && (a <= 10 || entries_.size() * 4 >= state_count(static_cast<unsigned>(a)))) {
      std::vector<double> values(state_count(static_cast<unsigned>(a)), 0.0);
      for (const Entry& e : entries_) values[e.first] = e.second;
      return dense(wires_, std::move(values));
    }
    return *this;
  }
  if (a > 10 && nonzeros() * 4 < dense_.size()) {
    Factor f;
    f.wires_ = wires_;
    f.sparse_ = true;
    f.dense_.clear();
    for (Bits k = 0; k < dense_.size(); ++k)
      if (dense_[k] != 0.0) f.entries_.emplace_back(k, dense_[k]);
    return f;
  }
  return *this;
}

Factor Factor::restrict(std::size_t wire, bool bit) const {
  auto it = std::lower_bound(wires_.begin(), wires_.end(), wire);
  if (it == wires_.end() || *it != wire) return *this;
  const std::size_t a = wires_.size();
  const unsigned pos = static_cast<unsigned>(a - 1 - static_cast<std::size_t>(it - wires_.begin()));
  const Bits low = (Bits{1} << pos) - 1;
  std::vector<std::size_t> rest = wires_;
  rest.erase(rest.begin() + (it - wires_.begin()));
  auto drop = [&](Bits k) { return ((k >> (pos + 1)) << pos) | (k & low); };
  std::vector<Entry> kept;
  for_each_nonzero([&](Bits k, double v) {
    if ((((k >> pos) & 1U) != 0) == bit) kept.emplace_back(drop(k), v);
  });
  return sparse(std::move(rest), std::move(kept));
}

Factor Factor::rename(const std::vector<std::size_t>& rep) const {
  std::vector<std::size_t> mapped;
  for (std::size_t w : wires_) mapped.push_back(rep.at(w));
  std::vector<std::size_t> target = mapped;
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  if (target == wires_ && mapped == wires_) return *this;
  const std::size_t a = wires_.size();
  std::vector<unsigned> shift;
  for (std::size_t w : mapped)
    shift.push_back(static_cast<unsigned>(target.size() - 1 -
                                          static_cast<std::size_t>(std::lower_bound(target.begin(), target.end(), w) -
                                                                   target.begin())));
  std::vector<Entry> out;
  for_each_nonzero([&](Bits k, double v) {
    Bits key = 0;
    Bits seen = 0;
    for (std::size_t i = 0; i < a; ++i) {
      const Bits b = (k >> (a - 1 - i)) & 1U;
      const Bits m = Bits{1} << shift[i];
      if (seen & m) {
        if (((key & m) != 0) != (b != 0)) return;
      } else {
        seen |= m;
        if (b) key |= m;
      }
    }
    out.emplace_back(key, v);
  });
  return sparse(std::move(target), std::move(out));
}

Factor Factor::drop_vacuous(double rel_tol) const {
  Factor cur = *this;
  for (std::size_t i = cur.wires_.size(); i-- > 0;) {
    const std::size_t a = cur.wires_.size();
    const Bits bit = Bits{1} << (a - 1 - i);
    bool constant = true;
    if (!cur.sparse_) {
      for (Bits k = 0; k < cur.dense_.size() && constant; ++k)
        if (!(k & bit) && !close(cur.dense_[k], cur.dense_[k | bit], rel_tol)) constant = false;
    } else {
      std::size_t zeros = 0;
      for (const Entry& e : cur.entries_) {
        if (e.first & bit) continue;
        ++zeros;
        if (!close(e.second, cur.value(e.first | bit), rel_tol)) {
          constant = false;
          break;
        }
      }
      if (constant && zeros * 2 != cur.entries_.size()) constant = false;
    }
    if (constant) cur = cur.restrict(cur.wires_[i], false);
  }
  return cur;
}

Factor multiply_and_sum_out(std::span<const Factor* const> factors, const std::vector<std::size_t>& sum_wires) {
  std::vector<std::size_t> all;
  for (const Factor* f : factors) all.insert(all.end(), f->wires().begin(), f->wires().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() > kFactorWireLimit) throw TooLarge("factor product over " + std::to_string(all.size()) + " wires");

  double scale = 1.0;
  std::vector<std::size_t> summed;
  for (std::size_t w : sum_wires) {
    if (std::binary_search(all.begin(), all.end(), w))
      summed.push_back(w);
    else
      scale *= 2.0;  // a wire no factor depends on
  }
  std::sort(summed.begin(), summed.end());
  std::vector<std::size_t> result;
  std::set_difference(all.begin(), all.end(), summed.begin(), summed.end(), std::back_inserter(result));
  const Gather to_result(result, all);
  const std::size_t u = all.size();

  if (factors.size() == 1) {
    // a plain marginal: one pass over the nonzeros
    const Factor& f = *factors.front();
    const std::size_t n = f.nonzeros();
    if (result.size() <= kSmallJoin || (result.size() <= kDenseJoinLimit && state_count(static_cast<unsigned>(result.size())) <= 4 * n)) {
      std::vector<double> acc(state_count(static_cast<unsigned>(result.size())), 0.0);
      f.for_each_nonzero([&](Bits k, double v) { acc[to_result(k)] += v * scale; });
      return Factor::dense(std::move(result), std::move(acc)).compacted();
    }
    std::vector<Factor::Entry> entries;
    entries.reserve(n);
    f.for_each_nonzero([&](Bits k, double v) { entries.emplace_back(to_result(k), v * scale); });
    return Factor::sparse(std::move(result), std::move(entries));
  }

  bool all_dense = std::none_of(factors.begin(), factors.end(), [](const Factor* f) { return f->is_sparse(); });
  if (u <= kSmallJoin || (u <= kDenseJoinLimit && all_dense)) {
    std::vector<Gather> gathers;
    std::vector<std::vector<double>> tables;
    for (const Factor* f : factors) {
      gathers.emplace_back(f->wires(), all);
      std::vector<double> t(state_count(static_cast<unsigned>(f->arity())), 0.0);
      f->for_each_nonzero([&](Bits k, double v) { t[k] = v; });
      tables.push_back(std::move(t));
    }
    std::vector<double> acc(state_count(static_cast<unsigned>(result.size())), 0.0);
    for (Bits k = 0; k < state_count(static_cast<unsigned>(u)); ++k) {
      double prod = scale;
      for (std::size_t i = 0; i < factors.size() && prod != 0.0; ++i) prod *= tables[i][gathers[i](k)];
      if (prod != 0.0) acc[to_result(k)] += prod;
    }
    return Factor::dense(std::move(result), std::move(acc)).compacted();
  }

  // hash join in the layout of `all`
  std::vector<const Factor*> pending(factors.begin(), factors.end());
  auto first = std::min_element(pending.begin(), pending.end(),
                                [](const Factor* a, const Factor* b) { return a->nonzeros() < b->nonzeros(); });
  auto mask_of = [&](const Factor* f) {
    Bits m = 0;
    for (std::size_t w : f->wires())
      m |= Bits{1} << (u - 1 - static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), w) - all.begin()));
    return m;
  };
  std::vector<Factor::Entry> partial;
  Bits covered = mask_of(*first);
  {
    const Scatter sc((*first)->wires(), all);
    (*first)->for_each_nonzero([&](Bits k, double v) { partial.emplace_back(sc(k), v * scale); });
  }
  pending.erase(first);

  while (!pending.empty() && !partial.empty()) {
    auto next = pending.begin();
    int best_shared = -1;
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      const int shared = std::popcount(mask_of(*it) & covered);
      if (shared > best_shared || (shared == best_shared && (*it)->nonzeros() < (*next)->nonzeros())) {
        best_shared = shared;
        next = it;
      }
    }
    const Factor* f = *next;
    pending.erase(next);
    const Bits fmask = mask_of(f);
    const Bits shared = fmask & covered;

    std::vector<Factor::Entry> fe;
    fe.reserve(f->nonzeros());
    const Scatter sc(f->wires(), all);
    f->for_each_nonzero([&](Bits k, double v) { fe.emplace_back(sc(k), v); });
    std::sort(fe.begin(), fe.end(),
              [shared](const auto& a, const auto& b) { return (a.first & shared) < (b.first & shared); });
    std::unordered_map<Bits, std::pair<std::size_t, std::size_t>> ranges;
    ranges.reserve(fe.size());
    for (std::size_t i = 0; i < fe.size();) {
      std::size_t j = i;
      const Bits key = fe[i].first & shared;
      while (j < fe.size() && (fe[j].first & shared) == key) ++j;
      ranges.emplace(key, std::make_pair(i, j));
      i = j;
    }
    std::vector<Factor::Entry> joined;
    for (const auto& [k, v] : partial) {
      auto it = ranges.find(k & shared);
      if (it == ranges.end()) continue;
      for (std::size_t i = it->second.first; i < it->second.second; ++i) joined.emplace_back(k | fe[i].first, v * fe[i].second);
      check_entry_count(joined.size());
    }
    partial = std::move(joined);
    covered |= fmask;
  }
  if (partial.empty()) return Factor::sparse(std::move(result), {});
  for (auto& e : partial) e.first = to_result(e.first);
  return Factor::sparse(std::move(result), std::move(partial));
}

}  // namespace pmbn
