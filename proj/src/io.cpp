#include "aoristic/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "aoristic/errors.hpp"

namespace aoristic {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

struct Record {
  double a;
  double l;
};

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<Record> parse_csv(std::istream& in, const std::string& origin) {
  std::vector<Record> records;
  std::string line;
  int line_no = 0;
  bool header_allowed = true;  // one non-numeric header line is tolerated
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    const auto comma = line.find(',');
    Record rec{};
    const bool parsed =
        comma != std::string::npos &&
        parse_double(line.substr(first, comma - first), rec.a) &&
        parse_double(line.substr(comma + 1), rec.l);
    if (!parsed) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      std::ostringstream os;
      os << origin << ":" << line_no << ": expected 'a,l' numbers";
      throw DataError(os.str());
    }
    header_allowed = false;
    if (rec.l < 0.0) {
      std::ostringstream os;
      os << origin << ":" << line_no << ": negative interval length";
      throw DataError(os.str());
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<Record> parse_json_records(std::istream& in,
                                       const std::string& origin) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(origin + ": invalid JSON: " + e.what());
  }
  if (!j.is_array()) throw DataError(origin + ": expected a JSON array");
  std::vector<Record> records;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& item = j[i];
    if (!item.is_object() || !item.contains("a") || !item.contains("l")) {
      std::ostringstream os;
      os << origin << ": record " << i << ": expected {\"a\": .., \"l\": ..}";
      throw DataError(os.str());
    }
    Record rec{item["a"].get<double>(), item["l"].get<double>()};
    if (rec.l < 0.0) {
      std::ostringstream os;
      os << origin << ": record " << i << ": negative interval length";
      throw DataError(os.str());
    }
    records.push_back(rec);
  }
  return records;
}

ObservedData assemble(const std::vector<Record>& records,
                      std::optional<Window> window) {
  ObservedData data;
  if (!window) {
    if (records.empty())
      throw DataError("ingest: cannot infer a window from empty data");
    double lo = records.front().a, hi = records.front().a + records.front().l;
    for (const auto& rec : records) {
      lo = std::min(lo, rec.a);
      hi = std::max(hi, rec.a + rec.l);
    }
    const double pad = 0.01 * std::max(hi - lo, 1e-9);
    data.window = Window{lo - pad, hi + pad};
  } else {
    data.window = *window;
  }
  data.window.validate();

  int index = 0;
  for (const auto& rec : records) {
    if (rec.l == 0.0) {
      if (!data.window.contains(rec.a)) {
        std::ostringstream os;
        os << "ingest: record " << index << " (atom at " << rec.a
           << ") lies outside the window";
        throw DataError(os.str());
      }
      data.atoms.push_back(rec.a);
    } else {
      const double lo = std::max(rec.a, data.window.lo);
      const double hi = std::min(rec.a + rec.l, data.window.hi);
      if (!(hi > lo)) {
        std::ostringstream os;
        os << "ingest: record " << index
           << " (interval) is disjoint from the window";
        throw DataError(os.str());
      }
      data.intervals.push_back(IntervalCensored{rec.a, rec.l});
    }
    ++index;
  }
  return data;
}

}  // namespace

ObservedData ingest_stream(std::istream& in, std::optional<Window> window,
                           const std::string& origin) {
  // sniff: JSON files start with '['
  const int c = in.peek();
  std::vector<Record> records = (c == '[')
                                    ? parse_json_records(in, origin)
                                    : parse_csv(in, origin);
  return assemble(records, window);
}

ObservedData ingest(const std::string& path, std::optional<Window> window) {
  std::ifstream in(path);
  if (!in) throw DataError("ingest: cannot open " + path);
  return ingest_stream(in, window, path);
}

namespace {

void write_meta(std::ofstream& out, const nlohmann::json& meta) {
  for (auto it = meta.begin(); it != meta.end(); ++it)
    out << "# " << it.key() << "=" << it.value().dump() << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<double>& atoms,
                       const std::vector<IntervalCensored>& intervals,
                       const nlohmann::json& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "a,l\n";
  for (double a : atoms) out << format_double(a) << ",0\n";
  for (const auto& iv : intervals)
    out << format_double(iv.a) << "," << format_double(iv.l) << "\n";
}

void write_truth_csv(const std::string& path, const std::vector<double>& times,
                     const nlohmann::json& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "t\n";
  for (double t : times) out << format_double(t) << "\n";
}

void write_chain_csv(const std::string& path, const PosteriorSample& sample,
                     const nlohmann::json& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  for (const auto& state : sample.states) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (i) out << ",";
      out << format_double(state[i]);
    }
    out << "\n";
  }
}

void write_histogram_csv(const std::string& path, const ObservedData& data,
                         const PosteriorSample& sample, int bins,
                         const nlohmann::json& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << "interval,bin_lo,bin_hi,count,frequency\n";
  for (std::size_t i = 0; i < data.latent_count(); ++i) {
    const IntervalCensored iv = data.clipped(i);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    for (const auto& state : sample.states) {
      const double pos = (state[i] - iv.a) / iv.l * bins;
      const auto b = std::min<std::size_t>(
          static_cast<std::size_t>(std::max(pos, 0.0)),
          static_cast<std::size_t>(bins) - 1);
      ++counts[b];
    }
    const double total = static_cast<double>(sample.states.size());
    for (int b = 0; b < bins; ++b) {
      const double lo = iv.a + iv.l * b / bins;
      const double hi = iv.a + iv.l * (b + 1) / bins;
      out << i << "," << format_double(lo) << "," << format_double(hi) << ","
          << counts[static_cast<std::size_t>(b)] << ","
          << format_double(total > 0
                               ? counts[static_cast<std::size_t>(b)] / total
                               : 0.0)
          << "\n";
    }
  }
}

void write_json(const std::string& path, const nlohmann::json& value) {
  std::ofstream out = open_out(path);
  out << value.dump(2) << "\n";
}

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{
      {"beta", beta},
      {"eta", eta},
      {"r", r},
      {"window_lo", window_lo},
      {"window_hi", window_hi},
      {"shape", shape},
      {"rate", rate},
      {"rate_is_scale", rate_is_scale},
      {"atom_prob", atom_prob},
      {"burnin", burnin},
      {"sweeps", sweeps},
      {"thin", thin},
      {"seed", seed},
      {"threads", threads},
      {"sampler", sampler},
      {"prior_sweeps", prior_sweeps},
  };
}

void RunConfig::apply_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key == "beta") beta = it->get<double>();
      else if (key == "eta") eta = it->get<double>();
      else if (key == "r") r = it->get<double>();
      else if (key == "window_lo") window_lo = it->get<double>();
      else if (key == "window_hi") window_hi = it->get<double>();
      else if (key == "shape") shape = it->get<double>();
      else if (key == "rate") rate = it->get<double>();
      else if (key == "rate_is_scale") rate_is_scale = it->get<bool>();
      else if (key == "atom_prob") atom_prob = it->get<double>();
      else if (key == "burnin") burnin = it->get<std::uint64_t>();
      else if (key == "sweeps") sweeps = it->get<std::uint64_t>();
      else if (key == "thin") thin = it->get<std::uint64_t>();
      else if (key == "seed") { seed = it->get<std::uint64_t>(); seed_given = true; }
      else if (key == "threads") threads = it->get<int>();
      else if (key == "sampler") sampler = it->get<std::string>();
      else if (key == "prior_sweeps") prior_sweeps = it->get<int>();
      else throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void RunConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  const int c = in.peek();
  if (c == '{') {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
    }
    apply_json(j);
    return;
  }
  // key=value lines
  nlohmann::json j = nlohmann::json::object();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config: " << path << ":" << line_no << ": expected key=value";
      throw ConfigError(os.str());
    }
    std::string key = line.substr(first, eq - first);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto vfirst = value.find_first_not_of(" \t");
    value = vfirst == std::string::npos ? "" : value.substr(vfirst);
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (key == "sampler") {
      j[key] = value;
    } else if (key == "rate_is_scale") {
      j[key] = (value == "true" || value == "1");
    } else {
      double parsed = 0.0;
      if (!parse_double(value, parsed)) {
        std::ostringstream os;
        os << "config: " << path << ":" << line_no << ": bad value for "
           << key;
        throw ConfigError(os.str());
      }
      if (key == "burnin" || key == "sweeps" || key == "thin" ||
          key == "seed" || key == "threads" || key == "prior_sweeps") {
        j[key] = static_cast<std::uint64_t>(parsed);
      } else {
        j[key] = parsed;
      }
    }
  }
  apply_json(j);
}

void RunConfig::ensure_seed() {
  if (!seed_given) {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    seed_given = true;
  }
}

}  // namespace aoristic
