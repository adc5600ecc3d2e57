#include "aoristic/prior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "aoristic/errors.hpp"

namespace aoristic {

double AreaInteractionParams::local_stability_bound() const {
  return beta * std::max(1.0, std::exp(-eta));
}

void AreaInteractionParams::validate() const {
  window.validate();
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ConfigError("area-interaction: beta must be positive");
  if (!(r > 0.0) || !std::isfinite(r))
    throw ConfigError("area-interaction: r must be positive");
  if (!std::isfinite(eta))
    throw ConfigError("area-interaction: eta must be finite");
}

double covered_length(std::span<const double> sorted_points, double r,
                      const Window& window) {
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (double x : sorted_points) {
    const double lo = std::max(x - r, window.lo);
    const double hi = std::min(x + r, window.hi);
    if (!(hi > lo)) continue;
    if (!open) {
      cur_lo = lo;
      cur_hi = hi;
      open = true;
    } else if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

double covered_length(const PointPattern& x, double r, const Window& window) {
  return covered_length(std::span<const double>(x.points()), r, window);
}

double log_density_unnorm(const AreaInteractionParams& params,
                          const PointPattern& x) {
  const double n = static_cast<double>(x.size());
  return n * std::log(params.beta) -
         params.log_gamma() * covered_length(x, params.r, params.window);
}

double papangelou(const AreaInteractionParams& params, const PointPattern& x,
                  double u) {
  if (!params.window.contains(u))
    throw ConfigError("papangelou: point outside the window");
  std::vector<double> with = x.points();
  with.push_back(u);
  return std::exp(log_density_unnorm(params, PointPattern(std::move(with))) -
                  log_density_unnorm(params, x));
}

namespace {

/// Coverage added by a point u to a sorted pattern, optionally pretending
/// that element `skip` of the pattern is absent.
double added_coverage(std::span<const double> sorted, double r,
                      const Window& window, double u,
                      std::size_t skip = static_cast<std::size_t>(-1)) {
  const double lo = std::max(u - r, window.lo);
  const double hi = std::min(u + r, window.hi);
  if (!(hi > lo)) return 0.0;
  double covered = 0.0;
  double cur = lo;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == skip) continue;
    const double xh = sorted[i] + r;
    if (xh <= cur) continue;
    const double xl = sorted[i] - r;
    if (xl >= hi) break;
    const double s = std::max(xl, cur);
    const double e = std::min(xh, hi);
    if (e > s) {
      covered += e - s;
      cur = e;
    }
  }
  return (hi - lo) - covered;
}

double log_papangelou_fast(const AreaInteractionParams& params,
                           std::span<const double> sorted, double u,
                           std::size_t skip = static_cast<std::size_t>(-1)) {
  return std::log(params.beta) -
         params.log_gamma() *
             added_coverage(sorted, params.r, params.window, u, skip);
}

class BirthDeathChain {
 public:
  BirthDeathChain(const AreaInteractionParams& params, std::mt19937_64& rng)
      : params_(params), rng_(rng), unit_(0.0, 1.0),
        loc_(params.window.lo, params.window.hi) {}

  void step() {
    const double len = params_.window.length();
    if (unit_(rng_) < 0.5) {
      const double u = loc_(rng_);
      const double log_acc =
          log_papangelou_fast(params_, points_, u) + std::log(len) -
          std::log(static_cast<double>(points_.size()) + 1.0);
      if (log_acc >= 0.0 || std::log(unit_(rng_)) < log_acc) {
        points_.insert(
            std::upper_bound(points_.begin(), points_.end(), u), u);
      }
    } else {
      if (points_.empty()) return;
      const std::size_t i = static_cast<std::size_t>(
          unit_(rng_) * static_cast<double>(points_.size()));
      const double log_acc =
          std::log(static_cast<double>(points_.size())) - std::log(len) -
          log_papangelou_fast(params_, points_, points_[i], i);
      if (log_acc >= 0.0 || std::log(unit_(rng_)) < log_acc) {
        points_.erase(points_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  const std::vector<double>& points() const { return points_; }

 private:
  const AreaInteractionParams& params_;
  std::mt19937_64& rng_;
  std::uniform_real_distribution<double> unit_;
  std::uniform_real_distribution<double> loc_;
  std::vector<double> points_;
};

}  // namespace

PointPattern sample_prior_bdmh(const AreaInteractionParams& params, int sweeps,
                               std::mt19937_64& rng) {
  params.validate();
  if (sweeps < 1) throw ConfigError("sample_prior_bdmh: sweeps must be >= 1");
  BirthDeathChain chain(params, rng);
  for (int s = 0; s < sweeps; ++s) chain.step();
  return PointPattern(chain.points());
}

std::vector<PointPattern> sample_prior_bdmh_chain(
    const AreaInteractionParams& params, int burnin, int draws, int thin,
    std::mt19937_64& rng) {
  params.validate();
  if (draws < 1 || thin < 1 || burnin < 0)
    throw ConfigError("sample_prior_bdmh_chain: bad chain configuration");
  BirthDeathChain chain(params, rng);
  for (int s = 0; s < burnin; ++s) chain.step();
  std::vector<PointPattern> out;
  out.reserve(static_cast<std::size_t>(draws));
  for (int d = 0; d < draws; ++d) {
    for (int s = 0; s < thin; ++s) chain.step();
    out.emplace_back(chain.points());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dominated coupling from the past.
//
// The dominating process D is a spatial birth-death process on the window
// with birth rate beta* per unit length and unit per-point death rate; its
// stationary law is Poisson(beta*). D is realised backwards from its
// stationary state at time 0 by simulating the time reversal, which by
// reversibility is a birth-death process with the same rates. The event
// stream is stored and only ever extended further into the past, so every
// epoch reuses identical randomness on the interval it shares with earlier
// epochs.
// ---------------------------------------------------------------------------

namespace {

struct DominatingEvent {
  double time;  // forward time in (-T, 0]
  bool is_birth;
  std::int64_t id;
  double location;
  double mark;  // uniform thinning mark attached to the birth
};

struct DominatingStream {
  DominatingStream(const AreaInteractionParams& params, std::uint64_t seed)
      : window(params.window),
        birth_rate(params.local_stability_bound() * params.window.length()),
        rng(seed) {
    std::uniform_real_distribution<double> loc(window.lo, window.hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> pois(birth_rate);
    const int n0 = pois(rng);
    for (int i = 0; i < n0; ++i)
      rev_alive.push_back({next_id++, loc(rng), unit(rng)});
  }

  struct RevPoint {
    std::int64_t id;
    double location;
    double mark;
  };

  // Extends the reversed simulation from built_t to t_target. In reversed
  // time a birth reveals a forward death and a death reveals a forward
  // birth. Stopping at a deterministic epoch boundary and redrawing the
  // exponential on the next extension is exact by memorylessness.
  void extend_to(double t_target) {
    std::uniform_real_distribution<double> loc(window.lo, window.hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double s = built_t;
    while (true) {
      const double total =
          birth_rate + static_cast<double>(rev_alive.size());
      std::exponential_distribution<double> wait(total);
      const double s_next = s + wait(rng);
      if (s_next > t_target) break;
      s = s_next;
      if (unit(rng) * total < birth_rate) {
        RevPoint p{next_id++, loc(rng), unit(rng)};
        events_desc.push_back({-s, false, p.id, p.location, p.mark});
        rev_alive.push_back(p);
      } else {
        const std::size_t i = static_cast<std::size_t>(
            unit(rng) * static_cast<double>(rev_alive.size()));
        const RevPoint p = rev_alive[i];
        events_desc.push_back({-s, true, p.id, p.location, p.mark});
        rev_alive[i] = rev_alive.back();
        rev_alive.pop_back();
      }
    }
    built_t = t_target;
  }

  Window window;
  double birth_rate;
  std::mt19937_64 rng;
  double built_t = 0.0;
  std::int64_t next_id = 0;
  std::vector<DominatingEvent> events_desc;  // decreasing forward time
  std::vector<RevPoint> rev_alive;           // alive at forward time -built_t
};

// Point set ordered by location with the dominating-process identity kept
// alongside for coalescence comparison.
struct FunnelState {
  std::vector<double> locs;
  std::vector<std::int64_t> ids;

  void insert(double loc, std::int64_t id) {
    const auto pos = std::lower_bound(locs.begin(), locs.end(), loc);
    const auto idx = static_cast<std::size_t>(pos - locs.begin());
    locs.insert(pos, loc);
    ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(idx), id);
  }
  void erase_id(std::int64_t id) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) {
        locs.erase(locs.begin() + static_cast<std::ptrdiff_t>(i));
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
    }
  }
  bool contains_all_of(const FunnelState& other) const {
    for (std::int64_t id : other.ids)
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) return false;
    return true;
  }
};

}  // namespace

PointPattern sample_prior_cftp(const AreaInteractionParams& params,
                               std::mt19937_64& rng, CftpOptions opt) {
  params.validate();
  const double beta_star = params.local_stability_bound();
  const double log_beta_star = std::log(beta_star);
  DominatingStream stream(params, rng());

  double epoch = opt.t0;
  for (int doubling = 0; doubling <= opt.max_doublings; ++doubling) {
    stream.extend_to(epoch);

    FunnelState upper, lower;
    for (const auto& p : stream.rev_alive) upper.insert(p.location, p.id);

    for (auto it = stream.events_desc.rbegin();
         it != stream.events_desc.rend(); ++it) {
      const DominatingEvent& ev = *it;
      if (!ev.is_birth) {
        upper.erase_id(ev.id);
        lower.erase_id(ev.id);
        continue;
      }
      const double log_lam_u =
          log_papangelou_fast(params, upper.locs, ev.location);
      const double log_lam_l =
          log_papangelou_fast(params, lower.locs, ev.location);
      // The Papangelou intensity is monotone in the pattern (increasing for
      // eta >= 0, decreasing for eta < 0), so the extreme acceptance bounds
      // over the sandwich are attained at the two funnel states.
      const double log_hi = std::max(log_lam_u, log_lam_l) - log_beta_star;
      const double log_lo = std::min(log_lam_u, log_lam_l) - log_beta_star;
      const double log_mark = std::log(ev.mark);
      if (log_mark < log_hi) upper.insert(ev.location, ev.id);
      if (log_mark < log_lo) lower.insert(ev.location, ev.id);
    }

    if (!upper.contains_all_of(lower))
      throw NumericError("cftp: sandwich property violated");
    if (upper.ids == lower.ids) return PointPattern(upper.locs);
    epoch *= 2.0;
  }
  std::ostringstream os;
  os << "cftp: no coalescence after " << opt.max_doublings
     << " doublings (epoch " << epoch << ")";
  throw NumericError(os.str());
}

}  // namespace aoristic
