#include "sgsim/format.hpp"

#include <charconv>
#include <stdexcept>

namespace sgsim {

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

}  // namespace sgsim
