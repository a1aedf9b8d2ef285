use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Tolerance used when comparing phases by value.
pub const PHASE_EPS: f64 = 1e-12;

/// A rotation angle in `[0, 2π)`.
///
/// Symbolic phases are kept as exact rational multiples of π in lowest terms
/// with `num / den ∈ [0, 2)`. Decimal radians exist as an escape hatch; any
/// arithmetic touching one promotes the result to radians.
#[derive(Clone, Copy, Debug)]
pub enum Phase {
    Exact { num: i64, den: i64 },
    Radians(f64),
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Phase {
    pub const ZERO: Phase = Phase::Exact { num: 0, den: 1 };
    pub const PI: Phase = Phase::Exact { num: 1, den: 1 };
    pub const HALF_PI: Phase = Phase::Exact { num: 1, den: 2 };

    /// `num/den · π`, normalized. Panics if `den == 0`.
    pub fn pi_frac(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        Phase::Exact {
            num: num.rem_euclid(2 * den),
            den,
        }
    }

    pub fn radians(r: f64) -> Phase {
        let mut v = r.rem_euclid(TAU);
        if v >= TAU {
            v = 0.0;
        }
        Phase::Radians(v)
    }

    /// `a · π` for `a ∈ {0, 1}` style multiples.
    pub fn multiple_of_pi(a: i64) -> Phase {
        Phase::pi_frac(a, 1)
    }

    pub fn value(&self) -> f64 {
        match *self {
            Phase::Exact { num, den } => PI * num as f64 / den as f64,
            Phase::Radians(r) => r,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Phase::Exact { num, .. } => num == 0,
            Phase::Radians(r) => circular_distance(r, 0.0) <= PHASE_EPS,
        }
    }

    /// `e^{iθ}`. Multiples of π/4 are produced without trigonometric noise.
    pub fn unit(&self) -> Complex64 {
        if let Phase::Exact { num, den } = *self {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            // quarter-turn index when the phase is a multiple of π/4
            if 4 % den == 0 {
                let eighth = (num * (4 / den)).rem_euclid(8);
                return match eighth {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(h, h),
                    2 => Complex64::new(0.0, 1.0),
                    3 => Complex64::new(-h, h),
                    4 => Complex64::new(-1.0, 0.0),
                    5 => Complex64::new(-h, -h),
                    6 => Complex64::new(0.0, -1.0),
                    _ => Complex64::new(h, -h),
                };
            }
        }
        Complex64::cis(self.value())
    }

    /// Equality by value on the circle, within [`PHASE_EPS`].
    pub fn same_value(&self, other: &Phase) -> bool {
        match (*self, *other) {
            (Phase::Exact { num: a, den: b }, Phase::Exact { num: c, den: d }) => a == c && b == d,
            _ => circular_distance(self.value(), other.value()) <= PHASE_EPS,
        }
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Self) -> bool {
        self.same_value(other)
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, rhs: Phase) -> Phase {
        match (self, rhs) {
            (Phase::Exact { num: a, den: b }, Phase::Exact { num: c, den: d }) => {
                Phase::pi_frac(a * d + c * b, b * d)
            }
            _ => Phase::radians(self.value() + rhs.value()),
        }
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        match self {
            Phase::Exact { num, den } => Phase::pi_frac(-num, den),
            Phase::Radians(r) => Phase::radians(-r),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Phase::Exact { num: 0, .. } => write!(f, "0"),
            Phase::Exact { num: 1, den: 1 } => write!(f, "pi"),
            Phase::Exact { num, den: 1 } => write!(f, "{num}pi"),
            Phase::Exact { num: 1, den } => write!(f, "pi/{den}"),
            Phase::Exact { num, den } => write!(f, "{num}pi/{den}"),
            Phase::Radians(r) => write!(f, "rad({r:?})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PhaseRepr {
    Exact { pi_num: i64, pi_den: i64 },
    Radians { radians: f64 },
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Phase::Exact { num, den } => PhaseRepr::Exact {
                pi_num: num,
                pi_den: den,
            },
            Phase::Radians(r) => PhaseRepr::Radians { radians: r },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PhaseRepr::deserialize(d)? {
            PhaseRepr::Exact { pi_num, pi_den } => {
                if pi_den <= 0 {
                    return Err(serde::de::Error::custom("pi_den must be positive"));
                }
                Ok(Phase::pi_frac(pi_num, pi_den))
            }
            PhaseRepr::Radians { radians } if radians.is_finite() => Ok(Phase::radians(radians)),
            PhaseRepr::Radians { .. } => Err(serde::de::Error::custom("radians must be finite")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_into_range() {
        assert_eq!(Phase::pi_frac(-1, 2), Phase::Exact { num: 3, den: 2 });
        assert_eq!(Phase::pi_frac(4, 2), Phase::ZERO);
        assert!(matches!(Phase::pi_frac(6, 4), Phase::Exact { num: 3, den: 2 }));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Phase::PI.to_string(), "pi");
        assert_eq!(Phase::HALF_PI.to_string(), "pi/2");
        assert_eq!(Phase::pi_frac(3, 4).to_string(), "3pi/4");
        assert_eq!(Phase::ZERO.to_string(), "0");
        assert_eq!(Phase::radians(0.5).to_string(), "rad(0.5)");
    }

    #[test]
    fn exact_units_have_no_noise() {
        assert_eq!(Phase::PI.unit(), Complex64::new(-1.0, 0.0));
        assert_eq!(Phase::HALF_PI.unit(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn mixing_promotes_to_radians() {
        let p = Phase::PI + Phase::radians(0.25);
        assert!(!p.is_exact());
        assert!((p.value() - (PI + 0.25)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn exact_addition_matches_values(a in -20i64..20, b in 1i64..9, c in -20i64..20, d in 1i64..9) {
            let p = Phase::pi_frac(a, b);
            let q = Phase::pi_frac(c, d);
            let sum = p + q;
            prop_assert!(sum.is_exact());
            let expected = (p.value() + q.value()).rem_euclid(TAU);
            prop_assert!(circular_distance(sum.value(), expected) <= 1e-12);
        }
    }
}
