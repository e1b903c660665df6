#pragma once

#include <doctest.h>

#include "radoncomp/common.hpp"

// Passes when expr throws radoncomp::Error carrying the given code.
#define CHECK_ERROR_CODE(expr, expected)                                   \
  do {                                                                     \
    bool thrown_ = false;                                                  \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const radoncomp::Error& e_) {                                 \
      thrown_ = true;                                                      \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());                   \
    }                                                                      \
    CHECK_MESSAGE(thrown_, "no radoncomp::Error from " #expr);             \
  } while (0)
