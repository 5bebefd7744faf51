#pragma once

// Deterministic NSL-KDD-format sample rows for demos and tests.
//
// Rows follow the 43-column layout and mimic the broad shape of the public
// training split: roughly half normal traffic, a large SYN-flood share, and a
// tail of probes and content attacks. Values are synthetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "graphkdd/rng.hpp"

namespace graphkdd {

namespace detail {

class SampleRow {
 public:
  explicit SampleRow(Rng& rng) : rng_(rng) { cells_.fill("0"); }

  void set(int col, const std::string& v) { cells_[col] = v; }
  void integer(int col, long v) { cells_[col] = std::to_string(v); }
  void rate(int col, double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", std::clamp(v, 0.0, 1.0));
    cells_[col] = buf;
  }

  long uniform(long lo, long hi) { return lo + static_cast<long>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return rng_.unit(); }
  bool chance(double p) { return rng_.bernoulli(p); }
  long lognormal(double median, double spread) {
    // Box-Muller on two unit draws.
    const double u1 = std::max(rng_.unit(), 1e-12);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * rng_.unit());
    return std::lround(median * std::exp(spread * z));
  }
  template <std::size_t N>
  const char* pick(const std::array<const char*, N>& options) {
    return options[rng_.below(N)];
  }

  std::string join() const {
    std::string out;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i) out += ',';
      out += cells_[i];
    }
    return out;
  }

 private:
  Rng& rng_;
  std::array<std::string, 43> cells_;
};

// Column positions in the standard layout.
enum Col {
  duration, protocol_type, service, flag, src_bytes, dst_bytes, land, wrong_fragment, urgent, hot,
  num_failed_logins, logged_in, num_compromised, root_shell, su_attempted, num_root,
  num_file_creations, num_shells, num_access_files, num_outbound_cmds, is_host_login,
  is_guest_login, count, srv_count, serror_rate, srv_serror_rate, rerror_rate, srv_rerror_rate,
  same_srv_rate, diff_srv_rate, srv_diff_host_rate, dst_host_count, dst_host_srv_count,
  dst_host_same_srv_rate, dst_host_diff_srv_rate, dst_host_same_src_port_rate,
  dst_host_srv_diff_host_rate, dst_host_serror_rate, dst_host_srv_serror_rate,
  dst_host_rerror_rate, dst_host_srv_rerror_rate, label, difficulty
};

inline void sample_normal(SampleRow& r) {
  const double u = r.unit();
  if (u < 0.78) {
    r.set(protocol_type, "tcp");
    static constexpr std::array<const char*, 8> svc = {"http", "http", "http", "http",
                                                       "smtp", "ftp_data", "ftp", "telnet"};
    const std::string s = r.pick(svc);
    r.set(service, s);
    r.set(flag, r.chance(0.93) ? "SF" : r.pick(std::array<const char*, 3>{"REJ", "S0", "RSTO"}));
    r.integer(src_bytes, r.lognormal(s == "http" ? 240 : 900, 0.8));
    r.integer(dst_bytes, r.lognormal(s == "http" ? 2200 : 400, 1.2));
    r.integer(logged_in, r.chance(0.92) ? 1 : 0);
    if (s == "ftp" && r.chance(0.1)) r.integer(is_guest_login, 1);
  } else if (u < 0.95) {
    r.set(protocol_type, "udp");
    r.set(service, r.pick(std::array<const char*, 3>{"domain_u", "private", "ntp_u"}));
    r.set(flag, "SF");
    r.integer(src_bytes, r.uniform(30, 110));
    r.integer(dst_bytes, r.chance(0.6) ? r.uniform(40, 300) : 0);
  } else {
    r.set(protocol_type, "icmp");
    r.set(service, r.pick(std::array<const char*, 3>{"ecr_i", "eco_i", "urp_i"}));
    r.set(flag, "SF");
    r.integer(src_bytes, r.uniform(8, 1032));
  }
  if (r.chance(0.08)) r.integer(duration, r.lognormal(120, 1.5));
  if (r.chance(0.1)) r.integer(hot, r.uniform(1, 4));
  if (r.chance(0.02)) r.integer(num_compromised, 1);
  if (r.chance(0.01)) r.integer(num_file_creations, r.uniform(1, 3));
  if (r.chance(0.005)) r.integer(root_shell, 1);
  if (r.chance(0.005)) r.integer(num_access_files, 1);
  if (r.chance(0.002)) r.integer(num_shells, 1);
  if (r.chance(0.002)) r.integer(num_root, r.uniform(1, 5));
  if (r.chance(0.001)) r.integer(su_attempted, 1);
  if (r.chance(0.002)) r.integer(num_failed_logins, 1);
  const long c = r.uniform(1, 25);
  r.integer(count, c);
  r.integer(srv_count, std::max(1L, c + r.uniform(-2, 15)));
  r.rate(serror_rate, r.chance(0.05) ? r.unit() * 0.3 : 0.0);
  r.rate(srv_serror_rate, r.chance(0.05) ? r.unit() * 0.3 : 0.0);
  r.rate(rerror_rate, r.chance(0.06) ? r.unit() * 0.4 : 0.0);
  r.rate(srv_rerror_rate, r.chance(0.06) ? r.unit() * 0.4 : 0.0);
  r.rate(same_srv_rate, r.chance(0.85) ? 1.0 : 0.6 + 0.4 * r.unit());
  r.rate(diff_srv_rate, r.chance(0.85) ? 0.0 : 0.2 * r.unit());
  r.rate(srv_diff_host_rate, r.chance(0.6) ? 0.0 : 0.5 * r.unit());
  r.integer(dst_host_count, r.uniform(1, 255));
  r.integer(dst_host_srv_count, r.chance(0.5) ? 255 : r.uniform(1, 255));
  r.rate(dst_host_same_srv_rate, r.chance(0.6) ? 1.0 : r.unit());
  r.rate(dst_host_diff_srv_rate, r.chance(0.7) ? 0.0 : 0.2 * r.unit());
  r.rate(dst_host_same_src_port_rate, r.chance(0.5) ? 0.0 : 0.3 * r.unit());
  r.rate(dst_host_srv_diff_host_rate, r.chance(0.6) ? 0.0 : 0.2 * r.unit());
  r.rate(dst_host_serror_rate, r.chance(0.9) ? 0.0 : 0.1 * r.unit());
  r.rate(dst_host_srv_serror_rate, r.chance(0.9) ? 0.0 : 0.1 * r.unit());
  r.rate(dst_host_rerror_rate, r.chance(0.85) ? 0.0 : 0.3 * r.unit());
  r.rate(dst_host_srv_rerror_rate, r.chance(0.85) ? 0.0 : 0.3 * r.unit());
  r.set(label, "normal");
  r.integer(difficulty, r.chance(0.8) ? 21 : r.uniform(15, 20));
}

inline void sample_neptune(SampleRow& r) {
  r.set(protocol_type, "tcp");
  r.set(service, r.chance(0.6) ? "private"
                               : r.pick(std::array<const char*, 6>{"http", "telnet", "ftp_data",
                                                                   "finger", "smtp", "other"}));
  const bool syn = r.chance(0.72);
  r.set(flag, syn ? "S0" : "REJ");
  const long c = r.uniform(90, 511);
  r.integer(count, c);
  r.integer(srv_count, r.uniform(1, 30));
  r.rate(serror_rate, syn ? 1.0 : 0.0);
  r.rate(srv_serror_rate, syn ? 1.0 : 0.0);
  r.rate(rerror_rate, syn ? 0.0 : 1.0);
  r.rate(srv_rerror_rate, syn ? 0.0 : 1.0);
  r.rate(same_srv_rate, 0.12 * r.unit());
  r.rate(diff_srv_rate, 0.03 + 0.05 * r.unit());
  r.integer(dst_host_count, 255);
  r.integer(dst_host_srv_count, r.uniform(1, 30));
  r.rate(dst_host_same_srv_rate, 0.12 * r.unit());
  r.rate(dst_host_diff_srv_rate, 0.03 + 0.05 * r.unit());
  r.rate(dst_host_serror_rate, syn ? 1.0 : 0.0);
  r.rate(dst_host_srv_serror_rate, syn ? 1.0 : 0.0);
  r.rate(dst_host_rerror_rate, syn ? 0.0 : 1.0);
  r.rate(dst_host_srv_rerror_rate, syn ? 0.0 : 1.0);
  r.set(label, "neptune");
  r.integer(difficulty, r.uniform(18, 21));
}

inline void sample_probe(SampleRow& r, const std::string& kind) {
  if (kind == "ipsweep") {
    r.set(protocol_type, "icmp");
    r.set(service, r.chance(0.8) ? "eco_i" : "ecr_i");
    r.set(flag, "SF");
    r.integer(src_bytes, r.chance(0.5) ? 8 : 18);
    r.rate(dst_host_same_src_port_rate, 0.9 + 0.1 * r.unit());
    r.rate(dst_host_srv_diff_host_rate, 0.3 + 0.5 * r.unit());
  } else if (kind == "portsweep") {
    r.set(protocol_type, "tcp");
    r.set(service, r.chance(0.7) ? "private" : "other");
    r.set(flag, r.chance(0.6) ? "RSTR" : "REJ");
    r.rate(rerror_rate, 1.0);
    r.rate(srv_rerror_rate, 1.0);
    r.rate(dst_host_same_src_port_rate, 1.0);
    r.rate(dst_host_rerror_rate, 0.5 + 0.5 * r.unit());
    r.rate(dst_host_srv_rerror_rate, 1.0);
    if (r.chance(0.3)) r.integer(duration, r.uniform(1, 15000));
  } else {  // satan
    r.set(protocol_type, r.chance(0.85) ? "tcp" : "udp");
    r.set(service, r.pick(std::array<const char*, 5>{"private", "other", "http", "telnet", "ftp"}));
    r.set(flag, r.chance(0.6) ? "REJ" : "S0");
    r.rate(rerror_rate, 0.7 + 0.3 * r.unit());
    r.rate(diff_srv_rate, 0.5 + 0.5 * r.unit());
    r.rate(dst_host_diff_srv_rate, 0.4 + 0.6 * r.unit());
    r.rate(dst_host_rerror_rate, 0.6 + 0.4 * r.unit());
  }
  r.integer(count, r.uniform(1, 8));
  r.integer(srv_count, r.uniform(1, 8));
  r.rate(same_srv_rate, r.unit());
  r.integer(dst_host_count, r.uniform(1, 255));
  r.integer(dst_host_srv_count, r.uniform(1, 40));
  r.rate(dst_host_same_srv_rate, 0.3 * r.unit());
  r.set(label, kind);
  r.integer(difficulty, r.uniform(12, 21));
}

inline void sample_flood(SampleRow& r, const std::string& kind) {
  if (kind == "smurf") {
    r.set(protocol_type, "icmp");
    r.set(service, "ecr_i");
    r.set(flag, "SF");
    r.integer(src_bytes, r.chance(0.7) ? 1032 : 520);
    const long c = r.uniform(300, 511);
    r.integer(count, c);
    r.integer(srv_count, c);
    r.integer(dst_host_count, 255);
    r.integer(dst_host_srv_count, 255);
    r.rate(dst_host_same_src_port_rate, 1.0);
  } else if (kind == "teardrop") {
    r.set(protocol_type, "udp");
    r.set(service, "private");
    r.set(flag, "SF");
    r.integer(src_bytes, 28);
    r.integer(wrong_fragment, 3);
    r.integer(count, r.uniform(1, 100));
    r.integer(srv_count, r.uniform(1, 100));
    r.integer(dst_host_count, r.uniform(1, 255));
    r.integer(dst_host_srv_count, r.uniform(1, 255));
  } else {  // back
    r.set(protocol_type, "tcp");
    r.set(service, "http");
    r.set(flag, r.chance(0.85) ? "SF" : "RSTR");
    r.integer(src_bytes, 54540);
    r.integer(dst_bytes, r.chance(0.8) ? 8314 : 7300);
    r.integer(hot, 2);
    r.integer(logged_in, 1);
    r.integer(num_compromised, 1);
    r.integer(count, r.uniform(1, 12));
    r.integer(srv_count, r.uniform(1, 12));
    r.integer(dst_host_count, r.uniform(10, 255));
    r.integer(dst_host_srv_count, r.uniform(10, 255));
  }
  r.rate(same_srv_rate, 1.0);
  r.rate(dst_host_same_srv_rate, 0.9 + 0.1 * r.unit());
  r.set(label, kind);
  r.integer(difficulty, r.uniform(14, 21));
}

inline void sample_content(SampleRow& r, const std::string& kind) {
  r.set(protocol_type, "tcp");
  r.set(flag, "SF");
  r.integer(logged_in, kind == "guess_passwd" ? 0 : 1);
  if (kind == "guess_passwd") {
    r.set(service, "telnet");
    r.integer(src_bytes, 125);
    r.integer(dst_bytes, 179);
    r.integer(num_failed_logins, 1);
    r.integer(duration, r.uniform(1, 5));
  } else {  // warezclient
    r.set(service, r.chance(0.6) ? "ftp_data" : "ftp");
    r.integer(src_bytes, r.lognormal(30000, 1.2));
    r.integer(hot, r.chance(0.5) ? 28 : 0);
    r.integer(is_guest_login, r.chance(0.7) ? 1 : 0);
    r.integer(duration, r.lognormal(400, 1.0));
  }
  r.integer(count, r.uniform(1, 3));
  r.integer(srv_count, r.uniform(1, 3));
  r.rate(same_srv_rate, 1.0);
  r.integer(dst_host_count, r.uniform(1, 120));
  r.integer(dst_host_srv_count, r.uniform(1, 60));
  r.rate(dst_host_same_srv_rate, 0.5 + 0.5 * r.unit());
  r.set(label, kind);
  r.integer(difficulty, r.uniform(6, 20));
}

}  // namespace detail

/// Headerless NSL-KDD-format text with `rows` records, deterministic in `seed`.
inline std::string generate_nslkdd_sample(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  std::string out;
  for (std::size_t i = 0; i < rows; ++i) {
    detail::SampleRow r(rng);
    const double u = rng.unit();
    if (u < 0.535) detail::sample_normal(r);
    else if (u < 0.86) detail::sample_neptune(r);
    else if (u < 0.89) detail::sample_probe(r, "satan");
    else if (u < 0.92) detail::sample_probe(r, "ipsweep");
    else if (u < 0.943) detail::sample_probe(r, "portsweep");
    else if (u < 0.964) detail::sample_flood(r, "smurf");
    else if (u < 0.972) detail::sample_flood(r, "teardrop");
    else if (u < 0.98) detail::sample_flood(r, "back");
    else if (u < 0.99) detail::sample_content(r, "warezclient");
    else detail::sample_content(r, "guess_passwd");
    out += r.join();
    out += '\n';
  }
  return out;
}

}  // namespace graphkdd
