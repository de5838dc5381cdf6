use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumericsError;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Parses `p`, `p/q` or a plain decimal such as `-2.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let err = || NumericsError::Parse(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| err())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| err())?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let magnitude = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Is `s` written as a decimal with a fractional part (as opposed to an exact
/// integer or fraction)?
pub fn is_decimal_literal(s: &str) -> bool {
    s.contains('.')
}

/// Closest rational to `x` with denominator at most `max_den`, through the
/// continued fraction of `x` and its last admissible semiconvergent.
pub fn best_rational_approximation(x: &Rational, max_den: &BigInt) -> Rational {
    assert!(max_den.is_positive(), "denominator bound must be positive");
    if x.denom() <= max_den {
        return x.clone();
    }
    // convergents h/k
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    let (mut h, mut k) = (x.floor().to_integer(), BigInt::one());
    let mut rest = x - Rational::from_integer(h.clone());
    loop {
        if rest.is_zero() {
            return Rational::new(h, k);
        }
        let inv = rest.recip();
        let a = inv.floor().to_integer();
        rest = inv - Rational::from_integer(a.clone());
        let k_next = &a * &k + &k_prev;
        if &k_next > max_den {
            // largest semiconvergent that still fits
            let t = (max_den - &k_prev).div_floor(&k);
            let semi = Rational::new(&t * &h + &h_prev, &t * &k + &k_prev);
            let conv = Rational::new(h, k);
            let d_semi = (&semi - x).abs();
            let d_conv = (&conv - x).abs();
            return if d_semi < d_conv { semi } else { conv };
        }
        let h_next = &a * &h + &h_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("-6/4").unwrap(), r(-3, 2));
        assert_eq!(parse_rational("2.125").unwrap(), r(17, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("1/0"), Err(NumericsError::DivisionByZero));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn approximation_brute_force() {
        let x = parse_rational("3.14159265358979").unwrap();
        for bound in [1i64, 7, 100, 113, 1000, 33215] {
            let best = best_rational_approximation(&x, &BigInt::from(bound));
            assert!(best.denom() <= &BigInt::from(bound));
            let err = (&best - &x).abs();
            for q in 1..=bound.min(2000) {
                let p = (&x * Rational::from_integer(q.into())).round().to_integer();
                let cand = Rational::new(p, q.into());
                assert!((&cand - &x).abs() >= err, "bound {bound}: {cand} beats {best}");
            }
        }
        assert_eq!(best_rational_approximation(&x, &BigInt::from(113)), r(355, 113));
    }
}
