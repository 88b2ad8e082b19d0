#include "subgoal/annotate/alignment.hpp"

#include <algorithm>

#include "subgoal/common/errors.hpp"

namespace subgoal::annotate {

EditScript edit_script(const std::vector<std::string>& generated,
                       const std::vector<std::string>& expert) {
  const std::size_t n = generated.size();
  const std::size_t m = expert.size();
  // d[i][j]: distance between generated[i..] and expert[j..].
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n) {
        d[i][j] = static_cast<int>(m - j);
      } else if (j == m) {
        d[i][j] = static_cast<int>(n - i);
      } else {
        int best = 1 + std::min(d[i + 1][j], d[i][j + 1]);
        if (generated[i] == expert[j]) best = std::min(best, d[i + 1][j + 1]);
        d[i][j] = best;
      }
    }
  }

  EditScript script;
  script.cost = d[0][0];
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    const int here = d[i][j];
    if (i < n && j < m && generated[i] == expert[j] && d[i + 1][j + 1] == here) {
      script.ops.push_back({EditKind::keep, static_cast<int>(i), static_cast<int>(j)});
      ++i;
      ++j;
    } else if (i < n && d[i + 1][j] + 1 == here) {
      script.ops.push_back({EditKind::remove, static_cast<int>(i), -1});
      ++i;
    } else {
      script.ops.push_back({EditKind::add, -1, static_cast<int>(j)});
      ++j;
    }
  }
  return script;
}

std::vector<std::string> apply_script(const EditScript& script,
                                      const std::vector<std::string>& generated,
                                      const std::vector<std::string>& expert) {
  std::vector<std::string> out;
  for (const auto& op : script.ops) {
    switch (op.kind) {
      case EditKind::keep: out.push_back(generated.at(static_cast<std::size_t>(op.generated))); break;
      case EditKind::add: out.push_back(expert.at(static_cast<std::size_t>(op.expert))); break;
      case EditKind::remove: break;
    }
  }
  return out;
}

std::vector<SubGoalSegment> apply_removals(const std::vector<SubGoalSegment>& segments,
                                           const EditScript& script) {
  std::vector<bool> removed;
  for (const auto& s : segments) removed.resize(removed.size() + s.actions.size(), false);
  for (const auto& op : script.ops) {
    if (op.kind != EditKind::remove) continue;
    if (op.generated < 0 || static_cast<std::size_t>(op.generated) >= removed.size()) {
      throw RangeError("edit script removes index " + std::to_string(op.generated) +
                       " beyond the generated sequence");
    }
    removed[static_cast<std::size_t>(op.generated)] = true;
  }

  std::vector<SubGoalSegment> out;
  std::size_t k = 0;
  for (const auto& s : segments) {
    SubGoalSegment kept{s.subgoal, {}};
    for (const auto& a : s.actions) {
      if (!removed[k++]) kept.actions.push_back(a);
    }
    if (!kept.actions.empty()) out.push_back(std::move(kept));
  }
  return out;
}

std::vector<Gap> gap_groups(const EditScript& script, const std::vector<SubGoalSegment>& aligned) {
  // Owner segment and offset of every aligned action, in order.
  std::vector<std::pair<int, int>> owner;
  for (std::size_t s = 0; s < aligned.size(); ++s) {
    for (std::size_t o = 0; o < aligned[s].actions.size(); ++o) {
      owner.emplace_back(static_cast<int>(s), static_cast<int>(o));
    }
  }

  std::vector<Gap> gaps;
  std::size_t kept = 0;
  for (const auto& op : script.ops) {
    if (op.kind == EditKind::keep) {
      ++kept;
      continue;
    }
    if (op.kind != EditKind::add) continue;
    // A keep always consumes the next expert index, so consecutive indices
    // mean no keep intervened.
    if (!gaps.empty() && gaps.back().expert_last + 1 == op.expert) {
      gaps.back().expert_last = op.expert;
      continue;
    }
    Gap g;
    g.expert_first = g.expert_last = op.expert;
    if (kept > 0) {
      if (kept > owner.size()) {
        throw RangeError("edit script keeps more actions than the aligned segments hold");
      }
      auto [seg, off] = owner[kept - 1];
      g.insert_after_segment = seg;
      const int last = static_cast<int>(aligned[static_cast<std::size_t>(seg)].actions.size()) - 1;
      g.split_offset = off == last ? -1 : off + 1;
    }
    gaps.push_back(g);
  }
  return gaps;
}

}  // namespace subgoal::annotate
