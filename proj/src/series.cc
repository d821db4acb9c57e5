// Copyright 2026 The cavo Authors
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

#include "cavo/series.h"

#include <cstdio>

namespace cavo {

std::string to_string(const Rational &r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Rational parse_rational(std::string_view text) {
    std::string t(text);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\r')) t.pop_back();
    size_t start = t.find_first_not_of(' ');
    if (start == std::string::npos) throw std::invalid_argument("empty rational");
    t = t.substr(start);
    Rational r;
    if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational: " + t);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + t);
    r.canonicalize();
    return r;
}

}  // namespace cavo
