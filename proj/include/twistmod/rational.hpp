#pragma once

#include <gmpxx.h>

#include <string>

#include "twistmod/error.hpp"

namespace twistmod {

// Exact rational scalar.  mpq_class values are kept canonical (lowest terms,
// positive denominator), so operator== is plain value equality.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "-p" or "p/q".  Canonicalizes, rejects zero denominators.
inline Rational rat_parse(const std::string& s) {
  try {
    Rational q(s);
    if (q.get_den() == 0) throw InputError("zero denominator in \"" + s + "\"");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("unparsable rational \"" + s + "\"");
  }
}

/// "p/q" with q omitted when 1; this is the wire format for all coefficients.
inline std::string rat_str(const Rational& q) { return q.get_str(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace twistmod
