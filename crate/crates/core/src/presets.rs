//! Named population vectors.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::population::PopulationVector;
use crate::rational::Rational;

/// Decimal digits kept in each `e^i` before normalizing.
pub const EXP_DIGITS: usize = 40;

/// `e^x` for integer `x ≥ 0`, rounded to nearest at `digits` decimal places.
pub fn exp_approx(x: u32, digits: usize) -> Rational {
    // Taylor series of e^x; terms beyond this index are below 10^{-digits-5}.
    let x = Rational::from_integer(x.into());
    let target = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits + 5));
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut k = 1u64;
    loop {
        term = term * &x / Rational::from_integer(k.into());
        sum += &term;
        if k > 2 && term < target && Rational::from_integer(k.into()) > &x + &x {
            break;
        }
        k += 1;
    }
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (sum * Rational::from_integer(scale.clone())).round().to_integer();
    Rational::new(scaled, scale)
}

/// `ρᵢ ∝ eⁱ` for `i = 1..=n`, from `EXP_DIGITS`-digit approximations.
pub fn exp_proxy(n: usize) -> Result<PopulationVector> {
    if n == 0 {
        return Err(Error::InvalidPopulation("exp preset needs n ≥ 1".into()));
    }
    PopulationVector::normalized((1..=n as u32).map(|i| exp_approx(i, EXP_DIGITS)).collect())
}

/// `exp:N`, `uniform:N`, or an explicit comma-separated list.
pub fn parse_population(spec: &str) -> Result<PopulationVector> {
    let spec = spec.trim();
    let parse_n = |s: &str| -> Result<usize> {
        s.trim().parse().map_err(|_| Error::Parse {
            what: "population preset size",
            input: spec.to_string(),
        })
    };
    if let Some(n) = spec.strip_prefix("exp:") {
        exp_proxy(parse_n(n)?)
    } else if let Some(n) = spec.strip_prefix("uniform:") {
        let n = parse_n(n)?;
        if n == 0 {
            return Err(Error::InvalidPopulation("uniform preset needs n ≥ 1".into()));
        }
        Ok(PopulationVector::uniform(n))
    } else {
        PopulationVector::parse(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_decimal_string;

    #[test]
    fn e_to_forty_digits() {
        let e = exp_approx(1, 40);
        assert_eq!(to_decimal_string(&e, 40), "2.7182818284590452353602874713526624977572");
        let e4 = exp_approx(4, 30);
        assert_eq!(to_decimal_string(&e4, 30), "54.598150033144239078110261202861");
    }

    #[test]
    fn proxy_is_increasing_and_normalized() {
        let p = exp_proxy(4).unwrap();
        assert!(p.is_non_decreasing());
        assert!(p.has_distinct_components());
    }

    #[test]
    fn presets_parse() {
        assert_eq!(parse_population("uniform:3").unwrap(), PopulationVector::uniform(3));
        assert_eq!(parse_population("exp:2").unwrap().dim(), 2);
        assert!(parse_population("exp:x").is_err());
    }
}
