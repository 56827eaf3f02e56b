//! Exact truncated formal power series.
//!
//! [`Series`] carries its truncation order explicitly. Arithmetic, composition,
//! compositional inverse, `log(1+f)`, `exp(f)` and Lagrange coefficient
//! extraction are all exact over [`Q`].

mod coeff;
mod laurent;
mod series;

pub use coeff::{ln_bigint, ln_q, q_to_f64, qf, qi, Coeff, Q};
pub use laurent::Laurent;
pub use series::{lagrange_coeff, Series};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct RatJson {
    num: String,
    den: String,
}

impl Serialize for Series<Q> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<RatJson> = self
            .coeffs()
            .iter()
            .map(|c| RatJson { num: c.numer().to_string(), den: c.denom().to_string() })
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Series<Q> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<RatJson> = Vec::deserialize(de)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        let mut out = Vec::with_capacity(v.len());
        for r in v {
            let n: BigInt = r.num.parse().map_err(serde::de::Error::custom)?;
            let d: BigInt = r.den.parse().map_err(serde::de::Error::custom)?;
            if d == BigInt::from(0) {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            out.push(Q::new(n, d));
        }
        Ok(Series::new(out))
    }
}

/// Parses `"3"`, `"-1/4"`, `"0.25"`, `"2.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if num_traits::Zero::is_zero(&d) {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Q::from_integer(digits * ten.pow(scale as u32))
    } else {
        Q::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let s = Series::new(vec![qf(1, 2), qi(-3), qf(7, 9)]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"[{"num":"1","den":"2"},{"num":"-3","den":"1"},{"num":"7","den":"9"}]"#
        );
        let back: Series = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), qi(3));
        assert_eq!(parse_rational("-1/4").unwrap(), qf(-1, 4));
        assert_eq!(parse_rational("0.3").unwrap(), qf(3, 10));
        assert_eq!(parse_rational(".5").unwrap(), qf(1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), qf(1, 400));
        assert_eq!(parse_rational("1e2").unwrap(), qi(100));
        assert_eq!(parse_rational("0.5/2").unwrap(), qf(1, 4));
        for bad in ["", "abc", "1/0", "1.2.3", "-", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
}
