//! Signed numbers stored as `(sign, ln|x|)`.
//!
//! Products of many `cosh`/`sinh` factors leave the range of `f64` long
//! before the ratios built from them do. Every product in the closed forms is
//! accumulated here and only final ratios are exponentiated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// A real number as a sign in `{-1, 0, +1}` and the natural log of its
/// magnitude. The magnitude is meaningless when the sign is zero and is kept
/// at `-inf` so that derived `Debug` output stays readable.
#[derive(Clone, Copy, PartialEq)]
pub struct LogSigned {
    sign: i8,
    log_mag: f64,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: LogSigned = LogSigned {
        sign: 1,
        log_mag: 0.0,
    };

    /// Builds from sign and log-magnitude. A zero sign discards `log_mag`.
    pub fn new(sign: i8, log_mag: f64) -> Self {
        match sign.signum() {
            0 => Self::ZERO,
            s => LogSigned { sign: s, log_mag },
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogSigned {
                sign: if x > 0.0 { 1 } else { -1 },
                log_mag: x.abs().ln(),
            }
        }
    }

    /// `ln cosh(x)`, accurate for any finite `x`.
    pub fn cosh(x: f64) -> Self {
        LogSigned {
            sign: 1,
            log_mag: ln_cosh(x),
        }
    }

    /// `sinh(x)`; exactly zero for `x == 0`.
    pub fn sinh(x: f64) -> Self {
        if x == 0.0 {
            return Self::ZERO;
        }
        LogSigned {
            sign: if x > 0.0 { 1 } else { -1 },
            log_mag: ln_abs_sinh(x),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of `|x|`; `-inf` for zero.
    pub fn log_mag(self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Converts back to `f64`; may overflow to `±inf` or underflow to `0`.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_mag.exp(),
        }
    }

    pub fn abs(self) -> Self {
        LogSigned {
            sign: self.sign.abs(),
            log_mag: self.log_mag,
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogSigned {
            sign,
            log_mag: self.log_mag * f64::from(n),
        }
    }

    /// Sum with sign resolution via log-sum-exp.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.log_mag - big.log_mag).exp();
        if big.sign == small.sign {
            LogSigned {
                sign: big.sign,
                log_mag: big.log_mag + ratio.ln_1p(),
            }
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogSigned {
                sign: big.sign,
                log_mag: big.log_mag + (-ratio).ln_1p(),
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }

    /// `self / other` as a plain float. Returns NaN when dividing by zero.
    pub fn ratio(self, other: Self) -> f64 {
        if other.sign == 0 {
            return f64::NAN;
        }
        (self / other).to_f64()
    }

    /// Product over an iterator.
    pub fn product<I: IntoIterator<Item = LogSigned>>(iter: I) -> Self {
        iter.into_iter().fold(Self::ONE, |acc, x| acc * x)
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogSigned {
            sign: self.sign * rhs.sign,
            log_mag: self.log_mag + rhs.log_mag,
        }
    }
}

impl Div for LogSigned {
    type Output = LogSigned;

    /// Division by zero yields a NaN magnitude with the numerator's sign.
    fn div(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return Self::ZERO;
        }
        if rhs.sign == 0 {
            return LogSigned {
                sign: self.sign,
                log_mag: f64::NAN,
            };
        }
        LogSigned {
            sign: self.sign * rhs.sign,
            log_mag: self.log_mag - rhs.log_mag,
        }
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;

    fn neg(self) -> Self {
        LogSigned {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }
}

impl PartialOrd for LogSigned {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.log_mag.partial_cmp(&other.log_mag),
                _ => other.log_mag.partial_cmp(&self.log_mag),
            },
            ord => Some(ord),
        }
    }
}

impl fmt::Debug for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "LogSigned(0)"),
            s => write!(f, "LogSigned({}exp({}))", if s > 0 { '+' } else { '-' }, self.log_mag),
        }
    }
}

impl From<f64> for LogSigned {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

/// `ln cosh x = |x| + ln(1 + e^{-2|x|}) - ln 2`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a < 0.5 {
        // avoids cancellation between |x| and -ln 2 near the origin
        a.cosh().ln()
    } else {
        a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// `ln |sinh x| = |x| + ln(1 - e^{-2|x|}) - ln 2` for `x != 0`.
pub fn ln_abs_sinh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        a.sinh().ln()
    } else {
        a + (-(-2.0 * a).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn roundtrip_and_sign() {
        for x in [-3.5, -1e-300, 0.0, 2.0, 1e200] {
            let l = LogSigned::from_f64(x);
            assert!(close(l.to_f64(), x, 1e-13) || x == 0.0);
        }
        assert_eq!(LogSigned::from_f64(0.0).sign(), 0);
        assert_eq!(LogSigned::from_f64(-2.0).sign(), -1);
    }

    #[test]
    fn zero_propagates_through_products() {
        let z = LogSigned::sinh(0.0);
        assert!(z.is_zero());
        assert!((z * LogSigned::cosh(700.0)).is_zero());
        assert!(LogSigned::product([LogSigned::sinh(1.0), z, LogSigned::sinh(-2.0)]).is_zero());
        assert!(close(z.add(LogSigned::from_f64(3.0)).to_f64(), 3.0, 1e-15));
    }

    #[test]
    fn addition_resolves_signs() {
        let a = LogSigned::from_f64(5.0);
        let b = LogSigned::from_f64(-3.0);
        assert!(close(a.add(b).to_f64(), 2.0, 1e-15));
        assert!(close(b.add(a).to_f64(), 2.0, 1e-15));
        assert!(close(b.add(b).to_f64(), -6.0, 1e-15));
        assert!(a.sub(a).is_zero());
    }

    #[test]
    fn hyperbolic_logs_match_direct_evaluation() {
        for x in [-4.0, -0.7, 1e-8, 0.3, 0.5, 1.0, 2.5, 20.0] {
            assert!(close(LogSigned::cosh(x).to_f64(), f64::cosh(x), 1e-14), "cosh {x}");
            assert!(close(LogSigned::sinh(x).to_f64(), f64::sinh(x), 1e-14), "sinh {x}");
        }
    }

    #[test]
    fn huge_products_stay_finite() {
        let c = LogSigned::product((0..500).map(|_| LogSigned::cosh(30.0)));
        let s = LogSigned::product((0..500).map(|_| LogSigned::sinh(30.0)));
        assert!(c.to_f64().is_infinite());
        let r = s.ratio(c.add(s));
        assert!(r.is_finite() && r > 0.0 && r < 1.0);
    }

    #[test]
    fn ordering() {
        let xs = [-5.0, -1.0, 0.0, 0.5, 3.0];
        for w in xs.windows(2) {
            assert!(LogSigned::from_f64(w[0]) < LogSigned::from_f64(w[1]));
        }
    }

    #[test]
    fn powers() {
        let x = LogSigned::from_f64(-2.0);
        assert!(close(x.powi(3).to_f64(), -8.0, 1e-15));
        assert!(close(x.powi(2).to_f64(), 4.0, 1e-15));
        assert_eq!(LogSigned::ZERO.powi(0).to_f64(), 1.0);
    }
}
