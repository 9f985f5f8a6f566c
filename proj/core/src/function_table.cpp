#include "pdtk/function_table.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pdtk {

std::vector<std::string> strings_of_length(std::string_view alphabet, std::size_t len) {
  std::vector<std::string> out;
  if (alphabet.empty()) {
    if (len == 0) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> digits(len, 0);
  for (;;) {
    std::string s(len, ' ');
    for (std::size_t i = 0; i < len; ++i) s[i] = alphabet[digits[i]];
    out.push_back(std::move(s));
    std::size_t i = len;
    while (i > 0 && ++digits[i - 1] == alphabet.size()) digits[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::vector<std::string> all_strings(std::string_view alphabet, std::size_t max_len) {
  std::vector<std::string> out;
  for (std::size_t n = 0; n <= max_len; ++n) {
    auto layer = strings_of_length(alphabet, n);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
    if (alphabet.empty()) break;
  }
  return out;
}

FunctionTable tabulate(const Pda& m, std::size_t max_len, StepBound bound, unsigned threads) {
  const auto inputs = all_strings(m.input_alphabet, max_len);
  std::vector<std::set<std::string>> results(inputs.size());
  Simulator sim(m);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, inputs.size() / 64)));

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= inputs.size()) return;
      try {
        results[i] = sim.outputs(inputs[i], bound(inputs[i].size()));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        // keep the failure of the smallest index so the reported error is schedule-independent
        if (!failure) failure = std::current_exception();
        cursor = inputs.size();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) {
    // rerun sequentially so the first violating input in order is the one reported
    for (const auto& w : inputs) sim.outputs(w, bound(w.size()));
    std::rethrow_exception(failure);
  }

  FunctionTable table;
  table.length_bound = max_len;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!results[i].empty()) table.entries.emplace(inputs[i], std::move(results[i]));
  return table;
}

KValuedResult check_k_valued(const FunctionTable& table, std::size_t k) {
  KValuedResult r;
  for (const auto& [input, values] : table.entries)
    if (values.size() > k) r.witnesses.push_back(input);
  r.ok = r.witnesses.empty();
  return r;
}

UnambiguityResult check_unambiguous(const Pda& m, const std::vector<std::string>& inputs, StepBound bound) {
  UnambiguityResult r;
  Simulator sim(m);
  for (const auto& w : inputs) {
    std::map<std::string, std::uint64_t> per_output;
    for (const auto& h : sim.explore(w, bound(w.size()), ExploreOptions{}))
      if (m.is_accepting(h.state)) {
        auto& n = per_output[h.emitted];
        n = n + h.paths < n ? UINT64_MAX : n + h.paths;
      }
    for (const auto& [out, n] : per_output)
      if (n > 1) r.witnesses.emplace_back(w, out);
  }
  r.ok = r.witnesses.empty();
  return r;
}

RefinementResult refines(const FunctionTable& g, const FunctionTable& f) {
  if (g.length_bound != f.length_bound)
    throw std::invalid_argument("refines: tables cover different length bounds");
  RefinementResult r;
  for (const auto& [x, _] : f.entries)
    if (!g.entries.count(x)) r.domain_witnesses.push_back(x);
  for (const auto& [x, gv] : g.entries) {
    auto it = f.entries.find(x);
    if (it == f.entries.end()) {
      r.domain_witnesses.push_back(x);
      continue;
    }
    for (const auto& v : gv)
      if (!it->second.count(v)) r.value_witnesses.emplace_back(x, v);
  }
  std::sort(r.domain_witnesses.begin(), r.domain_witnesses.end());
  r.ok = r.domain_witnesses.empty() && r.value_witnesses.empty();
  return r;
}

}  // namespace pdtk
