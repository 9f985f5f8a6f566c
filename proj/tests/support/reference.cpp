#include "reference.hpp"

#include <algorithm>

namespace ref {

using namespace pdtk;

namespace {

struct Dfs {
  const Pda& m;
  std::string_view input;
  std::size_t max_depth;
  const ColoredAutomaton* colored;
  RunSummary out;

  bool can_read(const Read& r, std::size_t head) const {
    switch (r.kind) {
      case ReadKind::Lambda: return true;
      case ReadKind::LeftEnd: return head == 0;
      case ReadKind::RightEnd: return head == input.size() + 1;
      case ReadKind::Symbol: return head >= 1 && head <= input.size() && input[head - 1] == r.symbol;
    }
    return false;
  }

  // used: colors of every non-Z0 symbol pushed so far
  void go(StateId q, std::size_t head, std::vector<SymbolId> stack /* top at back */, std::string emitted,
          std::set<ColorId> used, std::size_t depth) {
    if (m.is_halting(q)) {
      finish(q, emitted, used);
      return;
    }
    // a blocked configuration ends no computation path
    for (const auto& t : m.transitions) {
      if (t.from != q || t.pop != stack.back() || !can_read(t.read, head)) continue;
      if (depth == max_depth) {
        out.cut = true;
        continue;
      }
      auto s = stack;
      s.pop_back();
      auto u = used;
      for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) {
        s.push_back(*it);
        if (colored && *it != kBottom)
          for (ColorId c : colored->symbol_colors[*it]) u.insert(c);
      }
      go(t.to, t.read.is_lambda() ? head : head + 1, std::move(s), emitted + t.emit, std::move(u), depth + 1);
    }
  }

  void finish(StateId q, const std::string& emitted, const std::set<ColorId>& used) {
    ++out.paths;
    if (!m.is_accepting(q)) return;
    ++out.accepting_paths;
    out.outputs.insert(emitted);
    if (colored && used.size() == 1) out.colors.insert(colored->colors[*used.begin()]);
  }
};

}  // namespace

RunSummary run(const Pda& m, std::string_view input, std::size_t max_depth, const ColoredAutomaton* colored) {
  Dfs d{m, input, max_depth, colored, {}};
  d.go(m.initial, 0, {kBottom}, "", {}, 0);
  return d.out;
}

std::set<std::string> outputs(const Pda& m, std::string_view input, std::size_t max_depth) {
  return run(m, input, max_depth).outputs;
}

std::set<std::string> colors(const ColoredAutomaton& m, std::string_view input, std::size_t max_depth) {
  return run(m, input, max_depth, &m).colors;
}

std::string rev(std::string_view s) { return std::string(s.rbegin(), s.rend()); }

bool is_palindrome(std::string_view s) { return rev(s) == s; }

std::set<std::string> h3(std::string_view w) {
  std::vector<std::string> parts{""};
  for (char c : w) {
    if (c == '#') parts.emplace_back();
    else if (c == '0' || c == '1') parts.back() += c;
    else return {};
  }
  if (parts.size() != 3) return {};
  std::set<std::string> out;
  if (rev(parts[0]) == parts[1]) out.insert("011");
  if (rev(parts[1]) == parts[2]) out.insert("00111");
  if (rev(parts[0]) == parts[2]) out.insert("0111");
  return out;
}

std::vector<std::string> words_of_length(std::string_view alphabet, std::size_t len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (char c : alphabet) next.push_back(w + c);
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> words(std::string_view alphabet, std::size_t max_len) {
  std::vector<std::string> out;
  for (std::size_t n = 0; n <= max_len; ++n) {
    auto w = words_of_length(alphabet, n);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace ref
