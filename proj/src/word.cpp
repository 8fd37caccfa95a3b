#include "ponomarev/word.hpp"

#include "ponomarev/errors.hpp"

namespace ponomarev {

VertexWord::VertexWord(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension)
    throw ConfigError("VertexWord: dimension out of range");
}

VertexWord::VertexWord(int n, std::vector<Mask> levels)
    : VertexWord(n) {
  const Mask limit = n == kMaxDimension ? ~Mask{0} : (Mask{1} << n) - 1;
  for (auto m : levels)
    if (m & ~limit) throw ConfigError("VertexWord: mask has bits above n");
  levels_ = std::move(levels);
}

VertexWord VertexWord::from_index(int n, int depth, std::uint64_t index) {
  if (n * depth > 64) throw DepthError("VertexWord: n * depth exceeds 64");
  VertexWord w(n);
  w.levels_.resize(depth);
  const std::uint64_t digit = (std::uint64_t{1} << n) - 1;
  for (int l = depth - 1; l >= 0; --l) {
    w.levels_[l] = static_cast<Mask>(index & digit);
    index >>= n;
  }
  return w;
}

VertexWord VertexWord::parse(std::string_view text) {
  std::vector<Mask> levels;
  int n = -1;
  if (text.empty()) throw ConfigError("VertexWord: empty string has no dimension");
  std::size_t start = 0;
  while (start <= text.size()) {
    auto bar = text.find('|', start);
    auto part = text.substr(start, bar == std::string_view::npos
                                       ? std::string_view::npos
                                       : bar - start);
    if (part.empty()) throw ConfigError("VertexWord: empty level");
    if (n < 0) n = static_cast<int>(part.size());
    if (static_cast<int>(part.size()) != n)
      throw ConfigError("VertexWord: levels of different length");
    Mask m = 0;
    for (int i = 0; i < n; ++i) {
      if (part[i] == '+')
        m |= Mask{1} << i;
      else if (part[i] != '-')
        throw ConfigError("VertexWord: expected '+' or '-'");
    }
    levels.push_back(m);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return VertexWord(n, std::move(levels));
}

int VertexWord::sign(int level, int coord) const {
  return (levels_.at(level - 1) >> coord) & 1u ? 1 : -1;
}

void VertexWord::push_back(Mask m) { levels_.push_back(m); }

VertexWord VertexWord::child(Mask m) const {
  VertexWord w = *this;
  w.levels_.push_back(m);
  return w;
}

VertexWord VertexWord::prefix(int j) const {
  if (j < 0 || j > depth()) throw DepthError("VertexWord: prefix out of range");
  VertexWord w(n_);
  w.levels_.assign(levels_.begin(), levels_.begin() + j);
  return w;
}

bool VertexWord::has_prefix(const VertexWord& other) const {
  if (other.n_ != n_ || other.depth() > depth()) return false;
  for (int i = 0; i < other.depth(); ++i)
    if (levels_[i] != other.levels_[i]) return false;
  return true;
}

std::uint64_t VertexWord::index() const {
  if (n_ * depth() > 64) throw DepthError("VertexWord: n * depth exceeds 64");
  std::uint64_t idx = 0;
  for (auto m : levels_) idx = (n_ == 64 ? 0 : idx << n_) | m;
  return idx;
}

std::string VertexWord::to_string() const {
  std::string s;
  for (int l = 0; l < depth(); ++l) {
    if (l) s += '|';
    for (int i = 0; i < n_; ++i) s += (levels_[l] >> i) & 1u ? '+' : '-';
  }
  return s;
}

void for_each_word(int n, int depth,
                   const std::function<void(const VertexWord&)>& fn) {
  if (n * depth > 62) throw DepthError("for_each_word: too many words");
  const std::uint64_t count = std::uint64_t{1} << (n * depth);
  for (std::uint64_t i = 0; i < count; ++i)
    fn(VertexWord::from_index(n, depth, i));
}

}  // namespace ponomarev
