#include "cogsim/metrics_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "cogsim/attacker_agent.hpp"
#include "cogsim/error.hpp"
#include "cogsim/pattern.hpp"

namespace cogsim {

int progress_rank(const Attributed& attributed, const Scenario& scenario,
                  const std::vector<TechniqueSignal>& signals) {
  auto rank_of = [&](std::string_view host) {
    const HostNode* h = scenario.find_host(host);
    return h && h->path_rank ? *h->path_rank : 1;
  };
  int best = 1;
  bool lateral_seen = false;
  for (const auto& s : signals) {
    if (!technique::is_lateral(s.technique_id) || s.succeeded != true) continue;
    lateral_seen = true;
    best = std::max(best, rank_of(s.target_host));
  }
  if (lateral_seen) return best;
  for (const auto& [cmd, host] : attributed) best = std::max(best, rank_of(host));
  return best;
}

double on_path_proportion(const Attributed& attributed, const Scenario& scenario) {
  if (attributed.empty()) return 0.0;
  std::size_t on = 0;
  for (const auto& [cmd, host] : attributed) {
    if (scenario.on_attack_path(host)) ++on;
  }
  return static_cast<double>(on) / static_cast<double>(attributed.size());
}

int detectability_count(const std::vector<EventRecord>& events, std::string_view host) {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [&](const EventRecord& e) {
    return e.kind == EventKind::Alert && e.host == host;
  }));
}

double trigger_interaction_time(const std::vector<EventRecord>& events, const TriggerSpec& trigger,
                                double gap_threshold, double floor) {
  if (!(gap_threshold > 0.0)) throw Error(ErrorCode::ConfigError, "gap_threshold must be > 0");
  std::vector<double> times;
  for (const auto& e : events) {
    if (e.host != trigger.host_id) continue;
    if (any_pattern_matches(trigger.biased_signatures, e.payload) ||
        any_pattern_matches(trigger.rational_signatures, e.payload)) {
      times.push_back(e.timestamp);
    }
  }
  if (times.empty()) return 0.0;
  std::sort(times.begin(), times.end());
  double total = 0.0;
  double run_start = times.front();
  for (std::size_t i = 1; i <= times.size(); ++i) {
    if (i == times.size() || times[i] - times[i - 1] > gap_threshold) {
      total += times[i - 1] - run_start + floor;
      if (i < times.size()) run_start = times[i];
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Rank tests

std::vector<double> midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

struct Pooled {
  std::vector<double> ranks;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool all_equal = false;
};

Pooled pool(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all(a);
  all.insert(all.end(), b.begin(), b.end());
  Pooled p;
  p.ranks = midranks(all);
  std::map<double, int> counts;
  for (double v : all) ++counts[v];
  for (const auto& [v, t] : counts) p.tie_term += static_cast<double>(t) * t * t - t;
  p.all_equal = counts.size() == 1;
  return p;
}

void require_nonempty(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InsufficientGroups, "both samples must be nonempty");
}

double u_statistic(const Pooled& p, std::size_t na) {
  double ra = 0.0;
  for (std::size_t i = 0; i < na; ++i) ra += p.ranks[i];
  const double n = static_cast<double>(na);
  return ra - n * (n + 1.0) / 2.0;
}

}  // namespace

TestResult mann_whitney_exact(const std::vector<double>& a, const std::vector<double>& b) {
  require_nonempty(a, b);
  const Pooled p = pool(a, b);
  TestResult r{u_statistic(p, a.size()), 1.0, true};
  if (p.all_equal) return r;

  // Count subsets of size na by doubled rank sum; doubled midranks are integers.
  const std::size_t na = a.size();
  const std::size_t n = p.ranks.size();
  std::vector<int> dr(n);
  int max_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dr[i] = static_cast<int>(std::lround(2.0 * p.ranks[i]));
    max_sum += dr[i];
  }
  std::vector<std::vector<double>> ways(na + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = std::min(na, i + 1); k >= 1; --k) {
      for (int s = max_sum; s >= dr[i]; --s) ways[k][s] += ways[k - 1][s - dr[i]];
    }
  }
  int observed = 0;
  for (std::size_t i = 0; i < na; ++i) observed += dr[i];
  const double expected = static_cast<double>(na) * static_cast<double>(n + 1);
  const double dev = std::abs(observed - expected);
  double extreme = 0.0;
  double total = 0.0;
  for (int s = 0; s <= max_sum; ++s) {
    total += ways[na][s];
    if (std::abs(s - expected) >= dev - 1e-9) extreme += ways[na][s];
  }
  r.p = std::min(1.0, extreme / total);
  return r;
}

TestResult mann_whitney_normal(const std::vector<double>& a, const std::vector<double>& b) {
  require_nonempty(a, b);
  const Pooled p = pool(a, b);
  TestResult r{u_statistic(p, a.size()), 1.0, false};
  if (p.all_equal) return r;
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - p.tie_term / (n * (n - 1.0)));
  if (var <= 0.0) return r;
  const double z = std::max(0.0, std::abs(r.statistic - n1 * n2 / 2.0) - 0.5) / std::sqrt(var);
  r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  if (std::min(a.size(), b.size()) <= 8) return mann_whitney_exact(a, b);
  return mann_whitney_normal(a, b);
}

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(ErrorCode::InsufficientGroups, "need at least 2 groups");
  std::vector<double> all;
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::InsufficientGroups, "empty group");
    all.insert(all.end(), g.begin(), g.end());
  }
  const std::vector<double> ranks = midranks(all);
  std::map<double, int> counts;
  for (double v : all) ++counts[v];
  TestResult r;
  if (counts.size() == 1) return r;
  double tie_term = 0.0;
  for (const auto& [v, t] : counts) tie_term += static_cast<double>(t) * t * t - t;

  const double n = static_cast<double>(all.size());
  double acc = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rs += ranks[offset + i];
    acc += rs * rs / static_cast<double>(g.size());
    offset += g.size();
  }
  double h = 12.0 / (n * (n + 1.0)) * acc - 3.0 * (n + 1.0);
  h /= 1.0 - tie_term / (n * n * n - n);
  r.statistic = std::max(0.0, h);
  r.p = chi_square_sf(r.statistic, static_cast<double>(groups.size() - 1));
  return r;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::InsufficientGroups, "t needs n >= 2 per sample");
  auto var = [](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  const double se2 = var(a) / a.size() + var(b) / b.size();
  if (se2 <= 0.0) return 0.0;
  return (mean(a) - mean(b)) / std::sqrt(se2);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Condition c) { return c == Condition::Trigger ? "trigger" : "control"; }
std::string_view to_string(Division d) { return d == Division::Expert ? "expert" : "open"; }

std::map<HostId, int> alert_counts_by_host(const std::vector<EventRecord>& events) {
  std::map<HostId, int> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::Alert) ++out[e.host];
  }
  return out;
}

std::string session_summary_csv(const std::vector<SessionSummary>& rows) {
  std::set<HostId> hosts;
  std::set<std::string> triggers;
  std::set<std::string> ekm;
  for (const auto& r : rows) {
    for (const auto& [h, n] : r.alert_counts) hosts.insert(h);
    for (const auto& [t, v] : r.trigger_times) triggers.insert(t);
    for (const auto& c : r.ekm_counts) ekm.insert(c.trigger_id);
  }
  std::string out = "session_id,condition,division,progress_rank,on_path_proportion,alerts_total";
  for (const auto& h : hosts) out += ",alerts:" + h;
  for (const auto& t : triggers) out += ",time:" + t;
  for (const auto& t : ekm) out += ",ekm_biased:" + t + ",ekm_rational:" + t;
  out += ",error\n";

  char buf[64];
  for (const auto& r : rows) {
    int total = 0;
    for (const auto& [h, n] : r.alert_counts) total += n;
    std::snprintf(buf, sizeof buf, "%.6f", r.on_path_proportion);
    out += r.session_id + ',' + std::string(to_string(r.condition)) + ',' +
           std::string(to_string(r.division)) + ',' + std::to_string(r.progress_rank) + ',' + buf +
           ',' + std::to_string(total);
    for (const auto& h : hosts) {
      auto it = r.alert_counts.find(h);
      out += ',' + std::to_string(it == r.alert_counts.end() ? 0 : it->second);
    }
    for (const auto& t : triggers) {
      auto it = r.trigger_times.find(t);
      std::snprintf(buf, sizeof buf, "%.3f", it == r.trigger_times.end() ? 0.0 : it->second);
      out += std::string(",") + buf;
    }
    for (const auto& t : ekm) {
      int biased = 0;
      int rational = 0;
      for (const auto& c : r.ekm_counts) {
        if (c.trigger_id == t) {
          biased = c.biased_count;
          rational = c.rational_count;
        }
      }
      out += ',' + std::to_string(biased) + ',' + std::to_string(rational);
    }
    // Errors may carry commas; quote them.
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out += err.empty() ? std::string(",\n") : ",\"" + err + "\"\n";
  }
  return out;
}

}  // namespace cogsim
