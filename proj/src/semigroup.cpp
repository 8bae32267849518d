#include "mmdim/semigroup.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "mmdim/error.hpp"

namespace mmdim {

std::string Word::to_string() const {
  std::string out;
  out.reserve(symbols.size());
  for (auto s : symbols) {
    if (s < 10) out.push_back(static_cast<char>('0' + s));
    else if (s < 36) out.push_back(static_cast<char>('a' + (s - 10)));
    else fail(ErrorKind::Unsupported, "symbol " + std::to_string(s) + " has no digit form");
  }
  return out;
}

Word Word::parse(const std::string& s) {
  Word w;
  for (char c : s) {
    if (c >= '0' && c <= '9') w.symbols.push_back(static_cast<std::uint32_t>(c - '0'));
    else if (c >= 'a' && c <= 'z') w.symbols.push_back(static_cast<std::uint32_t>(c - 'a' + 10));
    else fail(ErrorKind::Parameter, std::string("bad word symbol '") + c + "'");
  }
  return w;
}

Word reverse(const Word& w) { return Word({w.symbols.rbegin(), w.symbols.rend()}); }

Word slice(const Word& w, std::size_t a, std::size_t b) {
  if (a < 1 || b + 1 < a || b > w.size())
    fail(ErrorKind::Parameter, "slice [" + std::to_string(a) + "," + std::to_string(b) + "] out of range");
  return Word({w.symbols.begin() + static_cast<std::ptrdiff_t>(a - 1), w.symbols.begin() + static_cast<std::ptrdiff_t>(b)});
}

Word concat(const Word& left, const Word& right) {
  Word out = left;
  out.symbols.insert(out.symbols.end(), right.symbols.begin(), right.symbols.end());
  return out;
}

bool is_right_factor(const Word& factor, const Word& w) {
  return factor.size() <= w.size() && std::equal(factor.symbols.rbegin(), factor.symbols.rend(), w.symbols.rbegin());
}

bool is_prefix(const Word& prefix, const Word& w) {
  return prefix.size() <= w.size() && std::equal(prefix.symbols.begin(), prefix.symbols.end(), w.symbols.begin());
}

std::size_t word_count(std::size_t alphabet, std::size_t n) {
  std::size_t c = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (alphabet != 0 && c > std::numeric_limits<std::size_t>::max() / alphabet)
      return std::numeric_limits<std::size_t>::max();
    c *= alphabet;
  }
  return c;
}

std::vector<Word> all_words(std::size_t alphabet, std::size_t n) {
  const std::size_t total = word_count(alphabet, n);
  if (total > (std::size_t{1} << 26)) fail(ErrorKind::Budget, "too many words: " + std::to_string(total));
  std::vector<Word> out;
  out.reserve(total);
  Word w(std::vector<std::uint32_t>(n, 0));
  for (std::size_t k = 0; k < total; ++k) {
    out.push_back(w);
    for (std::size_t pos = n; pos-- > 0;) {
      if (++w.symbols[pos] < alphabet) break;
      w.symbols[pos] = 0;
    }
  }
  return out;
}

SemigroupSystem::SemigroupSystem(std::shared_ptr<const SampledSpace> phase, std::shared_ptr<const SampledSpace> params,
                                 Generator gen, bool snap)
    : phase_(std::move(phase)), params_(std::move(params)), gen_(std::move(gen)), snap_(snap) {
  require(phase_ && !phase_->empty(), "empty phase space");
  require(params_ && !params_->empty(), "empty parameter space");
  const std::size_t n = phase_->size();
  std::map<Point, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(phase_->point(i), i);
  table_.resize(alphabet() * n);
  for (std::size_t y = 0; y < alphabet(); ++y) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point img = gen_(y, phase_->point(i));
      auto it = index.find(img);
      if (it != index.end()) {
        table_[y * n + i] = it->second;
        continue;
      }
      const std::size_t near = phase_->nearest(img);
      const double disp = phase_->dist(img, phase_->point(near));
      if (!snap_ && disp > 1e-12)
        fail(ErrorKind::Parameter, "generator " + std::to_string(y) + " leaves the sample at point " + std::to_string(i) +
                                       " and snapping is off");
      snap_error_ = std::max(snap_error_, disp);
      table_[y * n + i] = near;
    }
  }
}

Point SemigroupSystem::step(std::size_t y, const Point& x) const {
  if (y >= alphabet()) fail(ErrorKind::Parameter, "symbol " + std::to_string(y) + " out of range");
  Point img = gen_(y, x);
  if (snap_) return phase_->point(phase_->nearest(img));
  return img;
}

void check_word(const SemigroupSystem& sys, const Word& w) {
  for (auto s : w.symbols)
    if (s >= sys.alphabet()) fail(ErrorKind::Parameter, "symbol " + std::to_string(s) + " out of range");
}

Point apply_word(const SemigroupSystem& sys, const Word& w, const Point& x) {
  check_word(sys, w);
  Point p = x;
  for (std::size_t k = w.size(); k-- > 0;) p = sys.step(w[k], p);
  return p;
}

std::size_t apply_word_index(const SemigroupSystem& sys, const Word& w, std::size_t i) {
  check_word(sys, w);
  for (std::size_t k = w.size(); k-- > 0;) i = sys.step_index(w[k], i);
  return i;
}

std::vector<std::size_t> orbit_indices(const SemigroupSystem& sys, const Word& w, std::size_t i) {
  check_word(sys, w);
  std::vector<std::size_t> out{i};
  out.reserve(w.size() + 1);
  for (std::size_t k = 0; k < w.size(); ++k) out.push_back(i = sys.step_index(w[k], i));
  return out;
}

std::vector<Point> orbit(const SemigroupSystem& sys, const Word& w, const Point& x) {
  check_word(sys, w);
  std::vector<Point> out{x};
  for (std::size_t k = 0; k < w.size(); ++k) out.push_back(sys.step(w[k], out.back()));
  return out;
}

double bowen_distance(const SemigroupSystem& sys, const Word& w, const Point& x1, const Point& x2) {
  const auto a = orbit(sys, w, x1), b = orbit(sys, w, x2);
  double d = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) d = std::max(d, sys.phase().dist(a[t], b[t]));
  return d;
}

double bowen_distance(const SemigroupSystem& sys, const Word& w, std::size_t i, std::size_t j) {
  check_word(sys, w);
  double d = sys.phase().dist(i, j);
  for (std::size_t k = 0; k < w.size(); ++k) {
    i = sys.step_index(w[k], i);
    j = sys.step_index(w[k], j);
    d = std::max(d, sys.phase().dist(i, j));
  }
  return d;
}

bool bowen_ball_contains(const SemigroupSystem& sys, const Word& w, const Point& center, double delta,
                         const Point& x) {
  require(delta > 0.0, "delta must be positive");
  return bowen_distance(sys, w, center, x) < delta;
}

bool glw_ball_contains(const SemigroupSystem& sys, std::size_t n, const Point& center, double eps, const Point& x,
                       std::size_t budget) {
  require(eps > 0.0, "eps must be positive");
  std::size_t required = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t c = word_count(sys.alphabet(), i);
    required = (c > budget || required + c > budget) ? budget + 1 : required + c;
  }
  if (required > budget)
    fail(ErrorKind::Budget, "glw ball needs more than " + std::to_string(budget) + " words (alphabet " +
                                std::to_string(sys.alphabet()) + ", n " + std::to_string(n) + ")");
  // Level-by-level images of the pair; identical pairs are merged since they
  // give identical descendants.
  std::vector<std::pair<Point, Point>> level{{center, x}};
  for (std::size_t i = 0;; ++i) {
    for (const auto& [c, p] : level)
      if (!(sys.phase().dist(c, p) < eps)) return false;
    if (i == n) break;
    std::vector<std::pair<Point, Point>> next;
    for (const auto& [c, p] : level)
      for (std::size_t y = 0; y < sys.alphabet(); ++y) next.emplace_back(sys.step(y, c), sys.step(y, p));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return true;
}

}  // namespace mmdim
