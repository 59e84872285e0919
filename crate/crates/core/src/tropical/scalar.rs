//! Scalars of the completed max-plus semiring `ℝ ∪ {−∞, +∞}`.
//!
//! | op      | meaning                          | neutral |
//! |---------|----------------------------------|---------|
//! | `oplus` | max                              | ⊥ = −∞  |
//! | `odot`  | + (⊥ absorbs, then ⊤ absorbs)    | 𝟙 = 0   |
//! | `wedge` | min                              | ⊤ = +∞  |
//! | `ldiv`  | greatest `x` with `a ⊙ x ≤ b`    |         |
//! | `rdiv`  | greatest `x` with `x ⊙ a ≤ b`    |         |

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{Scalar, Tolerance};

/// An element of the completed max-plus semiring.
///
/// Variants are declared in increasing order. Build finite values through
/// [`ExtendedTropical::finite`], which rejects NaN and infinite floats.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedTropical<T> {
    Bottom,
    Finite(T),
    Top,
}

use ExtendedTropical::{Bottom, Finite, Top};

impl<T: Scalar> ExtendedTropical<T> {
    pub fn finite(value: T) -> Result<Self> {
        if value.is_valid() {
            Ok(Finite(value))
        } else {
            Err(Error::InvalidValue(value.to_string()))
        }
    }

    /// Multiplicative unit 𝟙 = 0.
    pub fn one() -> Self {
        Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn as_finite(&self) -> Option<&T> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Result<T> {
        match self {
            Finite(v) => Ok(v),
            Bottom => Err(Error::NotFinite("-inf".into())),
            Top => Err(Error::NotFinite("+inf".into())),
        }
    }

    /// Chain order ⊥ < finite < ⊤.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    /// `self ≤ other`, with finite values compared up to `tol`.
    pub fn le_within(&self, other: &Self, tol: Tolerance) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => a.le_within(b, tol),
            _ => self.rank() <= other.rank(),
        }
    }

    pub fn eq_within(&self, other: &Self, tol: Tolerance) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => a.eq_within(b, tol),
            _ => self.rank() == other.rank(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Bottom => 0,
            Finite(_) => 1,
            Top => 2,
        }
    }

    /// `a ⊕ b = max(a, b)`.
    pub fn oplus(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// `a ∧ b = min(a, b)`.
    pub fn wedge(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// `a ⊙ b = a + b`; ⊥ absorbs everything, including ⊤.
    pub fn odot(&self, other: &Self) -> Self {
        match (self, other) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Top, _) | (_, Top) => Top,
            (Finite(a), Finite(b)) => Finite(a.add(b)),
        }
    }

    /// Left residual `self \ b`: the greatest `x` with `self ⊙ x ≤ b`.
    pub fn ldiv(&self, b: &Self) -> Self {
        match (self, b) {
            (Bottom, _) => Top,
            (Top, Top) => Top,
            (Top, _) => Bottom,
            (Finite(_), Top) => Top,
            (Finite(_), Bottom) => Bottom,
            (Finite(a), Finite(b)) => Finite(b.sub(a)),
        }
    }

    /// Right residual `self / a`: the greatest `x` with `x ⊙ a ≤ self`.
    /// Scalar ⊙ commutes, so this agrees with `a.ldiv(self)`.
    pub fn rdiv(&self, a: &Self) -> Self {
        a.ldiv(self)
    }

    /// Multiplicative inverse of a finite value (its negation).
    pub fn inv(&self) -> Result<Self> {
        match self {
            Finite(a) => Ok(Finite(a.neg())),
            Bottom => Err(Error::InverseOfInfinite("-inf")),
            Top => Err(Error::InverseOfInfinite("+inf")),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Bottom => serde_json::Value::String("-inf".into()),
            Top => serde_json::Value::String("+inf".into()),
            Finite(v) => v.to_json(),
        }
    }

    /// Parses a number, or `-inf` / `+inf` (also `inf`).
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-∞" => Ok(Bottom),
            "+inf" | "inf" | "+∞" | "∞" => Ok(Top),
            t => Ok(Finite(T::parse_decimal(t)?)),
        }
    }
}

impl<T: Scalar> fmt::Display for ExtendedTropical<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bottom => f.write_str("-inf"),
            Top => f.write_str("+inf"),
            Finite(v) => f.write_str(&v.to_plain_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use proptest::prelude::*;

    type E = ExtendedTropical<Rational>;

    fn f(n: i64) -> E {
        Finite(Rational::from_ratio(n, 1))
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(f(3).oplus(&f(5)), f(5));
        assert_eq!(E::Bottom.oplus(&f(-7)), f(-7));
        assert_eq!(E::Bottom.oplus(&E::Top), E::Top);
        assert_eq!(E::Top.oplus(&f(7)), E::Top);
    }

    #[test]
    fn odot_examples() {
        assert_eq!(f(2).odot(&f(3)), f(5));
        assert_eq!(E::Bottom.odot(&E::Top), E::Bottom);
        assert_eq!(E::Top.odot(&E::Bottom), E::Bottom);
        assert_eq!(E::Top.odot(&f(4)), E::Top);
        assert_eq!(f(9).odot(&E::one()), f(9));
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(f(3).wedge(&f(5)), f(3));
        assert_eq!(E::Top.wedge(&f(2)), f(2));
        assert_eq!(E::Bottom.wedge(&f(9)), E::Bottom);
    }

    #[test]
    fn division_examples() {
        assert_eq!(f(2).ldiv(&f(5)), f(3));
        assert_eq!(E::Bottom.ldiv(&f(5)), E::Top);
        assert_eq!(E::Top.ldiv(&f(5)), E::Bottom);
        assert_eq!(E::Top.ldiv(&E::Top), E::Top);
        assert_eq!(f(1).ldiv(&E::Top), E::Top);
        assert_eq!(f(5).rdiv(&f(2)), f(3));
        assert_eq!(f(5).rdiv(&E::Bottom), E::Top);
        assert_eq!(E::Top.rdiv(&E::Top), E::Top);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(f(4).inv().unwrap(), f(-4));
        assert_eq!(f(0).inv().unwrap(), f(0));
        assert!(E::Bottom.inv().is_err());
        assert!(E::Top.inv().is_err());
        assert_eq!(f(4).odot(&f(4).inv().unwrap()), E::one());
    }

    #[test]
    fn nan_rejected() {
        assert!(ExtendedTropical::<f64>::finite(f64::NAN).is_err());
        assert!(ExtendedTropical::<f64>::finite(f64::INFINITY).is_err());
        assert!(ExtendedTropical::<f64>::finite(1.5).is_ok());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(E::parse("-inf").unwrap(), E::Bottom);
        assert_eq!(E::parse("+inf").unwrap(), E::Top);
        assert_eq!(E::parse("0.5").unwrap(), Finite(Rational::from_ratio(1, 2)));
        assert_eq!(E::Top.to_json(), serde_json::json!("+inf"));
        assert_eq!(f(3).to_string(), "3");
    }

    fn arb_ext() -> impl Strategy<Value = E> {
        prop_oneof![
            1 => Just(E::Bottom),
            1 => Just(E::Top),
            4 => (-50i64..50, 1i64..7).prop_map(|(n, d)| Finite(Rational::from_ratio(n, d))),
        ]
    }

    fn le(a: &E, b: &E) -> bool {
        a.total_cmp(b) != Ordering::Greater
    }

    proptest! {
        #[test]
        fn semiring_laws(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            prop_assert_eq!(a.oplus(&a), a.clone());
            prop_assert_eq!(a.oplus(&b), b.oplus(&a));
            prop_assert_eq!(a.odot(&b), b.odot(&a));
            prop_assert_eq!(a.oplus(&b).oplus(&c), a.oplus(&b.oplus(&c)));
            prop_assert_eq!(a.odot(&b).odot(&c), a.odot(&b.odot(&c)));
            prop_assert_eq!(a.odot(&b.oplus(&c)), a.odot(&b).oplus(&a.odot(&c)));
            // chain lattices are distributive
            prop_assert_eq!(a.oplus(&b.wedge(&c)), a.oplus(&b).wedge(&a.oplus(&c)));
            prop_assert_eq!(a.wedge(&b.oplus(&c)), a.wedge(&b).oplus(&a.wedge(&c)));
        }

        #[test]
        fn galois_scalar(a in arb_ext(), b in arb_ext(), x in arb_ext()) {
            prop_assert_eq!(le(&a.odot(&x), &b), le(&x, &a.ldiv(&b)));
            prop_assert_eq!(le(&x.odot(&a), &b), le(&x, &b.rdiv(&a)));
        }

        #[test]
        fn exact_denominators_stay_bounded(
            (an, ad) in (-50i64..50, 1i64..12),
            (bn, bd) in (-50i64..50, 1i64..12),
        ) {
            use num_integer::Integer;
            let a = Finite(Rational::from_ratio(an, ad));
            let b = Finite(Rational::from_ratio(bn, bd));
            let lcm = num_bigint::BigInt::from(ad.lcm(&bd));
            for r in [a.oplus(&b), a.odot(&b), a.wedge(&b), a.ldiv(&b), b.rdiv(&a), a.inv().unwrap()] {
                let d = r.as_finite().unwrap().denom().clone();
                prop_assert!((&lcm % d) == num_bigint::BigInt::from(0));
            }
        }
    }

    #[test]
    fn printed_lattice_law_has_counterexample() {
        // a ⊕ (b ∧ c) = (a ∧ b) ⊕ (a ∧ c) is not a lattice law; a=5, b=0, c=1
        // gives 5 on the left and 1 on the right.
        let (a, b, c) = (f(5), f(0), f(1));
        assert_ne!(a.oplus(&b.wedge(&c)), a.wedge(&b).oplus(&a.wedge(&c)));
    }
}
