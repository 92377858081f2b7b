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

#include "segrekit/gaussian_rational.hpp"

#include <stdexcept>

namespace segrekit
{

GaussianRational::GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
{
    re_.canonicalize();
    im_.canonicalize();
}

GaussianRational &GaussianRational::operator+=(const GaussianRational &o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational &GaussianRational::operator-=(const GaussianRational &o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational &GaussianRational::operator*=(const GaussianRational &o)
{
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational &GaussianRational::operator/=(const GaussianRational &o)
{
    if (o.is_zero()) {
        throw std::domain_error("GaussianRational: division by zero");
    }
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    const Rational n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

std::string GaussianRational::to_string() const
{
    std::string s = re_.get_str();
    if (sgn(im_) < 0) {
        s += "-";
        s += Rational(-im_).get_str();
    } else {
        s += "+";
        s += im_.get_str();
    }
    s += "*i";
    return s;
}

GaussianRational GaussianRational::parse(const std::string &text)
{
    // Split at the sign that separates the real and imaginary parts.
    if (text.size() < 4 || text.substr(text.size() - 2) != "*i") {
        throw std::invalid_argument("not a canonical Gaussian rational: " + text);
    }
    const std::string body = text.substr(0, text.size() - 2);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if (body[k] == '+' || body[k] == '-') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        throw std::invalid_argument("not a canonical Gaussian rational: " + text);
    }
    Rational re(body.substr(0, split));
    std::string ims = body.substr(split + 1);
    Rational im(ims);
    if (body[split] == '-') {
        im = -im;
    }
    return {re, im};
}

std::ostream &operator<<(std::ostream &os, const GaussianRational &c)
{
    return os << c.to_string();
}

} // namespace segrekit
