#pragma once

#include <string>

#include "doctest.h"
#include "twistlab/errors.hpp"

// Checks that an expression throws a twistlab::Error carrying the given code.
#define CHECK_ERRCODE(expr, expected_code)                       \
  do {                                                           \
    bool caught_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const twistlab::Error& e_) {                        \
      caught_ = true;                                            \
      CHECK_MESSAGE(e_.code() == (expected_code),                \
                    "caught code: ", e_.code(), " what: ", e_.what()); \
    }                                                            \
    CHECK_MESSAGE(caught_, "expected error " expected_code       \
                           " but nothing was thrown");           \
  } while (0)
