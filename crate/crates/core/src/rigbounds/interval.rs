use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::accumulator::BoundsAccumulator;
use super::beta::TABULATED;
use crate::error::{Error, Result};

/// Which distribution an interval vector bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistKind {
    /// Missing sums of a random subset of ℕ containing 0.
    Z,
    /// Missing sums of a random subset of ℕ.
    Y,
    /// Missing sums of a random subset of `[0, n)`, `n → ∞`.
    M,
    /// Missing sums of a random subset of `[0, n]` containing both ends.
    W,
}

impl DistKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DistKind::Z => "z",
            DistKind::Y => "y",
            DistKind::M => "m",
            DistKind::W => "w",
        }
    }
}

impl fmt::Display for DistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(DistKind::Z),
            "y" => Ok(DistKind::Y),
            "m" => Ok(DistKind::M),
            "w" => Ok(DistKind::W),
            _ => Err(Error::invalid(format!("unknown distribution kind {s:?}"))),
        }
    }
}

/// Exact lower and upper bounds on a distribution for `k < 32`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalVector {
    /// Prefix window of the enumeration the bounds came from.
    pub n: u32,
    pub kind: DistKind,
    pub lower: Vec<BigRational>,
    pub upper: Vec<BigRational>,
}

fn one() -> BigRational {
    BigRational::one()
}

fn clamp_one(x: BigRational) -> BigRational {
    if x > one() {
        one()
    } else {
        x
    }
}

impl IntervalVector {
    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != TABULATED || self.upper.len() != TABULATED {
            return Err(Error::Consistency(format!(
                "interval vectors have {TABULATED} entries"
            )));
        }
        for k in 0..TABULATED {
            let (l, u) = (&self.lower[k], &self.upper[k]);
            if l.is_negative() || l > u || *u > one() {
                return Err(Error::Consistency(format!(
                    "{} bounds at k = {k} violate 0 <= lower <= upper <= 1",
                    self.kind
                )));
            }
        }
        let total: BigRational = self.lower.iter().sum();
        if total > one() {
            return Err(Error::Consistency(format!(
                "{} lower bounds sum past 1",
                self.kind
            )));
        }
        Ok(())
    }

    /// Lower bound rounded down and upper bound rounded up to `places` decimals.
    pub fn outward_decimals(&self, k: usize, places: u32) -> (f64, f64) {
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(places));
        let lo = (&self.lower[k] * &scale).floor();
        let hi = (&self.upper[k] * &scale).ceil();
        let s = 10f64.powi(places as i32);
        (ratio_f64(&lo) / s, ratio_f64(&hi) / s)
    }

    /// Whether `[lower, upper]` at `k` meets the closed interval `[lo, hi]`.
    pub fn intersects(&self, k: usize, lo: &BigRational, hi: &BigRational) -> bool {
        self.lower[k] <= *hi && *lo <= self.upper[k]
    }
}

pub(crate) fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Turns a complete accumulator into bounds on `z(k)`:
/// `z_lower = Lower / 2^(2n-1)` and
/// `z_upper = min(1, (Upper[k] + Σ_{i≤k-2} Overhang[i]/(k-i)) / 2^(2n-1))`.
pub fn combine(acc: &BoundsAccumulator) -> Result<IntervalVector> {
    acc.validate()?;
    if !acc.is_complete() {
        return Err(Error::Coverage(format!(
            "{} of {} shards merged",
            acc.shards.len(),
            1u64 << (acc.n - acc.n1)
        )));
    }
    let denom = BigInt::from(BigUint::one() << (2 * acc.n - 1) as usize);
    let int = |x: &BigUint| BigRational::from_integer(BigInt::from(x.clone()));
    let lower = acc
        .lower
        .iter()
        .map(|x| BigRational::new(BigInt::from(x.clone()), denom.clone()))
        .collect();
    let upper = (0..TABULATED)
        .map(|k| {
            let mut total = int(&acc.upper[k]);
            for i in 0..k.saturating_sub(1) {
                total += int(&acc.overhang[i]) / BigRational::from_integer(((k - i) as i64).into());
            }
            clamp_one(total / BigRational::from_integer(denom.clone()))
        })
        .collect();
    let out = IntervalVector {
        n: acc.n,
        kind: DistKind::Z,
        lower,
        upper,
    };
    out.validate()?;
    Ok(out)
}

/// `y(k) = Σ_{i≤k/2} 2^-(i+1) z(k-2i)`, applied to each bound.
pub fn derive_y(z: &IntervalVector) -> Result<IntervalVector> {
    if z.kind != DistKind::Z {
        return Err(Error::invalid(format!(
            "derive_y needs z bounds, got {}",
            z.kind
        )));
    }
    let apply = |v: &[BigRational]| -> Vec<BigRational> {
        (0..TABULATED)
            .map(|k| {
                let mut acc = BigRational::zero();
                for i in 0..=k / 2 {
                    let w = BigRational::new(BigInt::one(), BigInt::one() << (i + 1));
                    acc += w * &v[k - 2 * i];
                }
                clamp_one(acc)
            })
            .collect()
    };
    let out = IntervalVector {
        n: z.n,
        kind: DistKind::Y,
        lower: apply(&z.lower),
        upper: apply(&z.upper),
    };
    out.validate()?;
    Ok(out)
}

/// Self-convolution of bounds: `m` from `y`, or `w` from `z`.
pub fn derive_convolution(x: &IntervalVector, target: DistKind) -> Result<IntervalVector> {
    let source = match target {
        DistKind::M => DistKind::Y,
        DistKind::W => DistKind::Z,
        _ => {
            return Err(Error::invalid(format!(
                "{target} is not a convolution target"
            )))
        }
    };
    if x.kind != source {
        return Err(Error::invalid(format!(
            "{target} is derived from {source} bounds, got {}",
            x.kind
        )));
    }
    let conv = |v: &[BigRational]| -> Vec<BigRational> {
        (0..TABULATED)
            .map(|k| clamp_one((0..=k).map(|i| &v[i] * &v[k - i]).sum()))
            .collect()
    };
    let out = IntervalVector {
        n: x.n,
        kind: target,
        lower: conv(&x.lower),
        upper: conv(&x.upper),
    };
    out.validate()?;
    Ok(out)
}

pub const INTERVAL_CSV_HEADER: &str =
    "k,lower_num,lower_den,upper_num,upper_den,lower_decimal,upper_decimal";

fn decimal(r: &BigRational, up: bool) -> String {
    let scaled = r * BigRational::from_integer(100_000.into());
    let i = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (whole, frac) = (&i / 100_000, &i % 100_000);
    format!("{whole}.{frac:0>5}")
}

/// CSV with exact fractions plus outward-rounded 5-place decimals.
pub fn interval_to_csv(v: &IntervalVector) -> String {
    let mut out = format!("# kind {}\n# n {}\n{INTERVAL_CSV_HEADER}\n", v.kind, v.n);
    for k in 0..v.lower.len() {
        let (l, u) = (&v.lower[k], &v.upper[k]);
        out.push_str(&format!(
            "{k},{},{},{},{},{},{}\n",
            l.numer(),
            l.denom(),
            u.numer(),
            u.denom(),
            decimal(l, false),
            decimal(u, true)
        ));
    }
    out
}

fn parse_fraction(no: usize, num: &str, den: &str) -> Result<BigRational> {
    let parse = |s: &str| {
        if s.is_empty() || s.len() > 20_000 {
            return None;
        }
        BigInt::parse_bytes(s.as_bytes(), 10)
    };
    let (n, d) = parse(num)
        .zip(parse(den))
        .ok_or_else(|| Error::parse(no, "fraction fields must be integers"))?;
    if !d.is_positive() {
        return Err(Error::parse(no, "denominator must be positive"));
    }
    Ok(BigRational::new(n, d))
}

/// Reads the output of [`interval_to_csv`]; the decimal columns are ignored.
pub fn parse_interval_csv(text: &str) -> Result<IntervalVector> {
    let mut kind = None;
    let mut n = None;
    let mut header_seen = false;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if let Some(meta) = line.strip_prefix('#') {
            match meta.trim().split_once(' ') {
                Some(("kind", v)) => {
                    kind = Some(
                        v.parse::<DistKind>()
                            .map_err(|e| Error::parse(no, e.to_string()))?,
                    )
                }
                Some(("n", v)) => {
                    n = Some(
                        v.parse::<u32>()
                            .map_err(|_| Error::parse(no, "bad window"))?,
                    )
                }
                _ => {}
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line != INTERVAL_CSV_HEADER {
                return Err(Error::parse(no, "unexpected header"));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(Error::parse(
                no,
                format!("expected 7 fields, got {}", f.len()),
            ));
        }
        if f[0] != lower.len().to_string() {
            return Err(Error::parse(no, format!("expected k = {}", lower.len())));
        }
        if lower.len() == TABULATED {
            return Err(Error::parse(no, "too many rows"));
        }
        lower.push(parse_fraction(no, f[1], f[2])?);
        upper.push(parse_fraction(no, f[3], f[4])?);
    }
    let v = IntervalVector {
        n: n.ok_or_else(|| Error::parse(0, "missing `# n` line"))?,
        kind: kind.ok_or_else(|| Error::parse(0, "missing `# kind` line"))?,
        lower,
        upper,
    };
    v.validate().map_err(|e| Error::parse(0, e.to_string()))?;
    Ok(v)
}
