use dashu_base::UnsignedAbs;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use num_traits::Zero;

use super::ExactError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = RBig;

pub type QVector = Vec<Rational>;

pub fn q(n: i64) -> Rational {
    Rational::from(n)
}

/// `n / d`, reduced. Panics on `d == 0`.
pub fn qf(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::from_parts_signed(IBig::from(n), IBig::from(d))
}

pub fn qvec(values: &[i64]) -> QVector {
    values.iter().map(|&v| q(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `1 / value`. Panics on zero.
pub fn recip(value: &Rational) -> Rational {
    Rational::ONE / value
}

/// Exact `p/q` text form used in every interchange format.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numerator(), value.denominator())
}

pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let text = text.trim();
    let bad = || ExactError::Parse(text.to_string());
    let int = |s: &str| -> Result<IBig, ExactError> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.strip_prefix('+').unwrap_or(s).parse().map_err(|_| bad())
    };
    match text.split_once('/') {
        Some((p, d)) => {
            let p = int(p)?;
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::from_parts_signed(p, d))
        }
        None => Ok(Rational::from(int(text)?)),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator(values: &[Rational]) -> UBig {
    use dashu_base::Gcd;
    values.iter().fold(UBig::ONE, |acc, v| {
        let d = v.denominator();
        let g = (&acc).gcd(d);
        acc / g * d
    })
}

/// Scales a vector by a positive factor so that it becomes integral with content 1.
/// The zero vector is returned unchanged.
pub fn primitive_integer_scaling(values: &[Rational]) -> QVector {
    use dashu_base::Gcd;
    let lcd = IBig::from(common_denominator(values));
    let ints: Vec<IBig> = values
        .iter()
        .map(|v| v.numerator() * (&lcd / IBig::from(v.denominator().clone())))
        .collect();
    let g = ints.iter().fold(UBig::ZERO, |acc, v| acc.gcd(v.clone().unsigned_abs()));
    if g.is_zero() {
        return values.to_vec();
    }
    let g = IBig::from(g);
    ints.into_iter().map(|v| Rational::from(v / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for (n, d) in [(0, 1), (3, 4), (-7, 2), (5, 1), (6, -4)] {
            let v = qf(n, d);
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
        assert_eq!(format_rational(&qf(6, -4)), "-3/2");
        assert_eq!(parse_rational("12").unwrap(), q(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/-2").is_ok_and(|v| v == qf(-1, 2)));
    }

    #[test]
    fn reduced_after_arithmetic() {
        let v = qf(1, 6) + qf(1, 3);
        assert_eq!(v.numerator(), &IBig::from(1));
        assert_eq!(v.denominator(), &UBig::from(2u8));
        let w = qf(-2, 4) * qf(-2, 1);
        assert!(!w.denominator().is_zero());
        assert_eq!(w, q(1));
    }

    #[test]
    fn integer_scaling() {
        let v = primitive_integer_scaling(&[qf(1, 2), qf(3, 4), q(0)]);
        assert_eq!(v, qvec(&[2, 3, 0]));
        let w = primitive_integer_scaling(&qvec(&[4, 6]));
        assert_eq!(w, qvec(&[2, 3]));
    }
}
