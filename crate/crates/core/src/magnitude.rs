//! Extended-range reals for quantities spanning hundreds of decades.

use std::fmt;
use std::ops::{Div, Mul};

const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// A real number held as `mantissa · 2^exponent` with `|mantissa|` in
/// `[1, 2)`; zero has a zero mantissa. Products and quotients keep full
/// `f64` relative precision at any scale.
#[derive(Clone, Copy, PartialEq)]
pub struct Magnitude {
    mantissa: f64,
    exponent: i64,
}

/// `x = m · 2^e` with `|m|` in `[1, 2)`, for finite nonzero `x`.
fn split(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        // subnormal: rescale into the normal range first
        let (m, e) = split(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    (m, raw - 1023)
}

/// `2^e` for `e` in the normal exponent range.
fn pow2(e: i64) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

impl Magnitude {
    pub const ZERO: Magnitude = Magnitude {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: Magnitude = Magnitude {
        mantissa: 1.0,
        exponent: 0,
    };

    fn normalized(mantissa: f64, exponent: i64) -> Self {
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = split(mantissa);
        Self {
            mantissa: m,
            exponent: exponent + e,
        }
    }

    fn from_log2(log2: f64) -> Self {
        let e = log2.floor();
        Self::normalized((log2 - e).exp2(), e as i64)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "magnitude of a non-finite value");
        Self::normalized(x, 0)
    }

    /// Positive value `10^log10`.
    pub fn from_log10(log10: f64) -> Self {
        Self::from_log2(log10 / LOG10_2)
    }

    /// `-1`, `0` or `1`.
    pub fn sign(self) -> i8 {
        if self.mantissa > 0.0 {
            1
        } else if self.mantissa < 0.0 {
            -1
        } else {
            0
        }
    }

    /// Decimal exponent of the absolute value; `-inf` for zero.
    pub fn log10(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().log10() + self.exponent as f64 * LOG10_2
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    /// Linear value if it fits in a normal `f64`.
    pub fn to_f64(self) -> Option<f64> {
        if self.is_zero() {
            return Some(0.0);
        }
        (-1022..=1023)
            .contains(&self.exponent)
            .then(|| self.mantissa * pow2(self.exponent))
    }

    /// `|x|^p` keeping the sign of `x` only for `p == 1`; callers raise
    /// non-negative values.
    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return if p == 0.0 { Self::ONE } else { Self::ZERO };
        }
        if p == 1.0 {
            return self;
        }
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            // exact-exponent path for small integer powers
            let n = p as i32;
            let m = self.mantissa.abs().powi(n);
            return Self::normalized(m, self.exponent * i64::from(n));
        }
        Self::from_log2(p * (self.mantissa.abs().log2() + self.exponent as f64))
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        // halve an even exponent exactly
        let (m, e) = if self.exponent % 2 == 0 {
            (self.mantissa.abs(), self.exponent)
        } else {
            (2.0 * self.mantissa.abs(), self.exponent - 1)
        };
        Self::normalized(m.sqrt(), e / 2)
    }

    pub fn recip(self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero magnitude");
        Self::normalized(1.0 / self.mantissa, -self.exponent)
    }
}

impl Mul for Magnitude {
    type Output = Magnitude;

    fn mul(self, rhs: Magnitude) -> Magnitude {
        Magnitude::normalized(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<f64> for Magnitude {
    type Output = Magnitude;

    fn mul(self, rhs: f64) -> Magnitude {
        self * Magnitude::from_f64(rhs)
    }
}

impl Div for Magnitude {
    type Output = Magnitude;

    fn div(self, rhs: Magnitude) -> Magnitude {
        assert!(!rhs.is_zero(), "division by zero magnitude");
        Magnitude::normalized(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl Div<f64> for Magnitude {
    type Output = Magnitude;

    fn div(self, rhs: f64) -> Magnitude {
        self / Magnitude::from_f64(rhs)
    }
}

impl fmt::Debug for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            0 => write!(f, "0"),
            s => write!(f, "{}10^{:.6}", if s < 0 { "-" } else { "" }, self.log10()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_arithmetic() {
        let a = Magnitude::from_f64(-2.5e-200);
        let b = Magnitude::from_f64(4.0e150);
        let p = (a * b).to_f64().unwrap();
        assert!((p / -1e-49 - 1.0).abs() < 1e-13);
        assert_eq!((b / a).to_f64(), None);
        assert!(((b / a).log10() - (350.0 + 1.6f64.log10())).abs() < 1e-12);
        assert_eq!((b / a).sign(), -1);
    }

    #[test]
    fn out_of_range_is_not_materialized() {
        let tiny = Magnitude::from_log10(-400.0);
        assert_eq!(tiny.to_f64(), None);
        assert_eq!(Magnitude::from_log10(309.0).to_f64(), None);
        let cube = Magnitude::from_f64(1e-156).powf(3.0);
        assert_eq!(cube.to_f64(), None);
        assert!((cube.log10() + 468.0).abs() < 1e-12);
    }

    #[test]
    fn quotients_are_exact_at_extreme_scales() {
        let big = Magnitude::from_log10(-450.123);
        let ratio = (big / (big / 2f64.powf(1.5))).to_f64().unwrap();
        assert!((ratio - 2f64.powf(1.5)).abs() <= 4.0 * f64::EPSILON);
        let sub = Magnitude::from_f64(3e-310);
        assert!((sub.log10() - 3e-310f64.log10()).abs() < 1e-13);
        assert_eq!((sub * Magnitude::from_f64(1e10)).to_f64().map(|v| (v / 3e-300 - 1.0).abs() < 1e-12), Some(true));
    }

    #[test]
    fn powers_and_roots() {
        let x = Magnitude::from_f64(2.5e-120);
        assert!(((x.sqrt().to_f64().unwrap()) / 2.5e-120f64.sqrt() - 1.0).abs() < 1e-15);
        assert!(((x.powf(2.0) / x / x).to_f64().unwrap() - 1.0).abs() < 1e-15);
        assert!((x.powf(1.0 / 3.0).log10() - 2.5e-120f64.log10() / 3.0).abs() < 1e-13);
        assert_eq!(Magnitude::from_f64(-4.0).powf(0.5).sign(), 1);
    }

    #[test]
    fn zero_handling() {
        assert_eq!(Magnitude::from_f64(0.0).to_f64(), Some(0.0));
        assert!((Magnitude::ZERO * Magnitude::from_f64(3.0)).is_zero());
        assert_eq!(Magnitude::ZERO.powf(0.0), Magnitude::ONE);
    }
}
