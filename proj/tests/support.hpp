// Copyright 2026 The segre-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Readable doctest failure output for library types.

#ifndef SEGREKIT_TESTS_SUPPORT_HPP
#define SEGREKIT_TESTS_SUPPORT_HPP

#include "doctest.h"

#include "segrekit/series.hpp"

namespace doctest
{

template <> struct StringMaker<segrekit::TruncatedSeries> {
    static String convert(const segrekit::TruncatedSeries &s) { return s.to_string().c_str(); }
};

template <> struct StringMaker<segrekit::SeriesVector> {
    static String convert(const segrekit::SeriesVector &v) { return v.to_string().c_str(); }
};

template <> struct StringMaker<segrekit::GaussianRational> {
    static String convert(const segrekit::GaussianRational &c) { return c.to_string().c_str(); }
};

} // namespace doctest

#endif
