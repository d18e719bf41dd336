#pragma once

#include <doctest.h>

#include "dsvm/error.hpp"

// Checks that `expr` throws a dsvm::Error of the given kind.
#define CHECK_THROWS_KIND(expr, expected_kind)                      \
  do {                                                              \
    bool thrown_ = false;                                           \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const dsvm::Error& e) {                                \
      thrown_ = true;                                               \
      CHECK_MESSAGE(e.kind() == (expected_kind), e.what());         \
    }                                                               \
    CHECK_MESSAGE(thrown_, "expected dsvm::Error from " #expr);     \
  } while (false)
