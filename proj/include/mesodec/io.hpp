// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
//
// Text-boundary helpers for the command-line tool: unit-suffixed quantities,
// grid axis syntax, flat config files and locale-independent number output.
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "mesodec/constants.hpp"
#include "mesodec/decoherence.hpp"

namespace mesodec::io {

enum class Quantity { dimensionless, length, time, temperature, mass };

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Decimal prefixes are applied by dividing by an exact power of ten, so that
// "20um" parses to the same double as "20e-6".
struct Unit {
  double divisor = 1.0;
  double factor = 1.0;
};

inline Unit unit_of(Quantity q, std::string_view unit) {
  if (unit.empty()) return {};
  switch (q) {
    case Quantity::length:
      if (unit == "m") return {};
      if (unit == "mm") return {1e3};
      if (unit == "um" || unit == "µm" || unit == "μm") return {1e6};
      if (unit == "nm") return {1e9};
      if (unit == "pm") return {1e12};
      break;
    case Quantity::time:
      if (unit == "s") return {};
      if (unit == "ms") return {1e3};
      if (unit == "us" || unit == "µs" || unit == "μs") return {1e6};
      if (unit == "ns") return {1e9};
      break;
    case Quantity::temperature:
      if (unit == "K") return {};
      break;
    case Quantity::mass:
      if (unit == "kg") return {};
      if (unit == "u") return {1.0, constants::atomic_mass_unit};
      break;
    case Quantity::dimensionless:
      break;
  }
  throw std::invalid_argument("unknown unit '" + std::string(unit) + "'");
}

}  // namespace detail

/// Parses "1e-6", "1um", "10ms", "2500K", "840u" into SI.
inline double parse_quantity(std::string_view text, Quantity q) {
  text = detail::trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    throw std::invalid_argument("cannot parse number from '" + std::string(text) + "'");
  }
  const std::string_view unit = detail::trim(std::string_view(ptr, last - ptr));
  const detail::Unit u = detail::unit_of(q, unit);
  return value / u.divisor * u.factor;
}

inline Quantity axis_quantity(SweepAxis a) {
  switch (a) {
    case SweepAxis::temperature: return Quantity::temperature;
    case SweepAxis::separation: return Quantity::length;
    case SweepAxis::time: return Quantity::time;
  }
  return Quantity::dimensionless;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Axis syntax `name:min:max:count[:log]` with name in {T, d, t}.
inline AxisSpec parse_axis(std::string_view text) {
  const auto parts = split(detail::trim(text), ':');
  if (parts.size() != 4 && parts.size() != 5) {
    throw std::invalid_argument("grid axis '" + std::string(text) +
                                "' must look like name:min:max:count[:log]");
  }
  AxisSpec axis;
  if (parts[0] == "T") {
    axis.axis = SweepAxis::temperature;
  } else if (parts[0] == "d") {
    axis.axis = SweepAxis::separation;
  } else if (parts[0] == "t") {
    axis.axis = SweepAxis::time;
  } else {
    throw std::invalid_argument("grid axis name must be T, d or t, got '" + parts[0] + "'");
  }
  axis.min = parse_quantity(parts[1], axis_quantity(axis.axis));
  axis.max = parse_quantity(parts[2], axis_quantity(axis.axis));
  int count = 0;
  const auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), count);
  if (ec != std::errc{} || ptr != parts[3].data() + parts[3].size()) {
    throw std::invalid_argument("grid axis count '" + parts[3] + "' is not an integer");
  }
  axis.count = count;
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin") {
      throw std::invalid_argument("grid axis spacing must be 'log' or 'lin'");
    }
    axis.log = parts[4] == "log";
  }
  axis.validate();
  return axis;
}

/// Range syntax `min:max:count` for a single quantity.
struct Range {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  std::vector<double> values() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out[i] = min * (1.0 - f) + max * f;
    }
    if (count > 1) out.back() = max;
    return out;
  }
};

inline Range parse_range(std::string_view text, Quantity q) {
  const auto parts = split(detail::trim(text), ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("range '" + std::string(text) + "' must look like min:max:count");
  }
  Range r;
  r.min = parse_quantity(parts[0], q);
  r.max = parse_quantity(parts[1], q);
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), r.count);
  if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || r.count < 1) {
    throw std::invalid_argument("range count '" + parts[2] + "' must be a positive integer");
  }
  if (!(r.min <= r.max)) throw std::invalid_argument("range needs min <= max");
  return r;
}

/// Flat `key = value` config file; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(detail::trim(view.substr(0, eq)));
    std::string value(detail::trim(view.substr(eq + 1)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

/// Shortest-form double for CSV/text output. Uses the C locale's decimal
/// point; the tool never changes the global locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

}  // namespace mesodec::io
