//! Scalar helpers: extended gcd and logarithms of big numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Natural log of a positive big integer, accurate to f64 precision even
/// when the value overflows f64.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(f) = x.to_f64() {
            if f.is_finite() {
                return f.ln();
            }
        }
    }
    let shift = bits - 60;
    let top = (x >> shift).to_f64().expect("shifted value fits");
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| {
        if x.is_zero() {
            acc
        } else {
            acc.lcm(x)
        }
    })
}

/// Sum that starts from `+0.0`, so an empty sum never prints as `-0`.
pub fn fsum(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |a, b| a + b)
}

/// `a^e` for a rational base and signed exponent.
pub fn rational_pow(a: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(a.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (-3, -9)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let (g, s, t) = xgcd(&a, &b);
            assert!(!g.is_negative());
            assert_eq!(&s * &a + &t * &b, g);
        }
    }

    #[test]
    fn ln_of_huge_values() {
        let x = BigInt::from(3).pow(2000);
        let l = ln_bigint(&x);
        assert!((l - 2000.0 * 3f64.ln()).abs() < 1e-9 * l);
        assert!((ln_bigint(&BigInt::from(10)) - 10f64.ln()).abs() < 1e-15);
    }
}

/// Serde adapter writing `Vec<BigInt>` as decimal strings.
pub mod decimal_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(|_| D::Error::custom(format!("{x:?} is not an integer"))))
            .collect()
    }
}
