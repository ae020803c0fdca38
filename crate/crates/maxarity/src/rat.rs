//! Exact rational scalars and vectors.
//!
//! Every quantity in this crate is a `BigRational`; there is no floating
//! point anywhere in the core. Constancy and equality predicates are decided,
//! never approximated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Rat = BigRational;

/// A point or direction in Q^n.
pub type QVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
}

/// Formats as "p/q", or "p" when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn qvec(entries: &[i64]) -> QVec {
    entries.iter().map(|&n| rat(n)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vadd(a: &[Rat], b: &[Rat]) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rat], b: &[Rat]) -> QVec {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[Rat], c: &Rat) -> QVec {
    a.iter().map(|x| x * c).collect()
}

pub fn vneg(a: &[Rat]) -> QVec {
    a.iter().map(|x| -x).collect()
}

/// x + t*v
pub fn vaxpy(x: &[Rat], t: &Rat, v: &[Rat]) -> QVec {
    x.iter().zip(v).map(|(a, b)| a + t * b).collect()
}

/// Scales a rational vector to a primitive integer vector: entries are
/// coprime integers and the first nonzero entry is positive. The zero
/// vector is returned unchanged.
pub fn primitive(v: &[Rat]) -> QVec {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = num_integer::gcd(gcd, i.clone());
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign_flip = ints.iter().find(|i| !i.is_zero()).is_some_and(|i| i.is_negative());
    ints.into_iter()
        .map(|i| {
            let q = &i / &gcd;
            Rat::from_integer(if sign_flip { -q } else { q })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(format_rat(&rat(7)), "7");
        assert_eq!(format_rat(&ratio(3, 6)), "1/2");
        assert_eq!(format_rat(&ratio(-3, 6)), "-1/2");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "5", "-5", "2/3", "-7/4"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn primitive_vector_canonicalization() {
        let v = vec![ratio(-2, 4), ratio(1, 4)];
        assert_eq!(primitive(&v), qvec(&[2, -1]));
        assert_eq!(primitive(&zeros(3)), zeros(3));
    }

    proptest! {
        // Canonical-form property: rationals remain in lowest terms with a
        // positive denominator through arithmetic chains.
        #[test]
        fn rat_canonical_after_arithmetic(a in -50i64..50, b in 1i64..30, c in -50i64..50, d in 1i64..30) {
            let x = ratio(a, b);
            let y = ratio(c, d);
            for r in [&x + &y, &x - &y, &x * &y] {
                prop_assert!(r.denom() > &num_bigint::BigInt::from(0));
                prop_assert!(num_integer::gcd(r.numer().clone(), r.denom().clone())
                    == num_bigint::BigInt::from(1) || r.numer().is_zero());
            }
            if !y.is_zero() {
                let q = &x / &y;
                prop_assert!(q.denom() > &num_bigint::BigInt::from(0));
            }
        }
    }
}
