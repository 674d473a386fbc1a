#pragma once

#include <doctest.h>

#include "wideopen/scalars.hpp"

namespace doctest {
template <> struct StringMaker<wideopen::NormExp> {
    static String convert(const wideopen::NormExp& e) { return e.str().c_str(); }
};
template <> struct StringMaker<mpq_class> {
    static String convert(const mpq_class& q) { return q.get_str().c_str(); }
};
} // namespace doctest
