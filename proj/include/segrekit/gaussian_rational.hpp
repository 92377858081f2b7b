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

#ifndef SEGREKIT_GAUSSIAN_RATIONAL_HPP
#define SEGREKIT_GAUSSIAN_RATIONAL_HPP

#include <ostream>
#include <string>

#include <gmpxx.h>

namespace segrekit
{

using Rational = mpq_class;

/// Exact complex number re + im*i with rational parts.
class GaussianRational
{
  public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}
    GaussianRational(Rational re, Rational im = 0);

    static GaussianRational i() { return {0, 1}; }

    const Rational &re() const { return re_; }
    const Rational &im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }
    // |c|^2
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational &operator+=(const GaussianRational &o);
    GaussianRational &operator-=(const GaussianRational &o);
    GaussianRational &operator*=(const GaussianRational &o);
    // Throws std::domain_error on division by zero.
    GaussianRational &operator/=(const GaussianRational &o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) { return a /= b; }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend bool operator==(const GaussianRational &a, const GaussianRational &b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Canonical text "a/b+c/d*i"; integer parts print without denominator.
    std::string to_string() const;

    /// Parses the canonical form produced by to_string().
    static GaussianRational parse(const std::string &text);

  private:
    Rational re_{0};
    Rational im_{0};
};

std::ostream &operator<<(std::ostream &os, const GaussianRational &c);

} // namespace segrekit

#endif
