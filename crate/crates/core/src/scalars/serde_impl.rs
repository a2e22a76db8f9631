//! Canonical JSON: a Laurent polynomial is the sorted list of
//! `[exponent, coefficient]` pairs; a rational function is
//! `{"num": [...], "den": [...]}`. Coefficients that do not fit in an `i64`
//! are written as decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LaurentPoly, RationalFn};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Big(String),
}

impl From<&BigInt> for CoeffRepr {
    fn from(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(x) => CoeffRepr::Int(x),
            None => CoeffRepr::Big(c.to_string()),
        }
    }
}

impl CoeffRepr {
    fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            CoeffRepr::Int(x) => Ok(BigInt::from(x)),
            CoeffRepr::Big(s) => s
                .parse()
                .map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, CoeffRepr)> = self.terms().map(|(e, c)| (e, c.into())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, CoeffRepr)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for (e, c) in pairs {
            terms.push((e, c.into_bigint::<D::Error>()?));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for RationalFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr {
            num: self.numer().clone(),
            den: self.denom().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RationalRepr::deserialize(d)?;
        RationalFn::new(r.num, r.den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn laurent_json_shape() {
        let p = LaurentPoly::from_terms([(-2, 1), (0, -3), (5, 7)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[-2,1],[0,-3],[5,7]]");
        assert_eq!(serde_json::to_string(&LaurentPoly::zero()).unwrap(), "[]");
        let big = LaurentPoly::monomial(BigInt::from(i64::MAX) * 4, 1);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, r#"[[1,"36893488147419103228"]]"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), big);
    }

    #[test]
    fn rational_json_shape() {
        let r = RationalFn::new(
            LaurentPoly::one(),
            LaurentPoly::from_terms([(0, 1), (-2, -1)]),
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"num":[[2,1]],"den":[[0,-1],[2,1]]}"#
        );
        assert!(serde_json::from_str::<RationalFn>(r#"{"num":[[0,1]],"den":[]}"#).is_err());
    }

    fn small_laurent() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..6, -20i64..20), 0..5).prop_map(LaurentPoly::from_terms)
    }

    fn small_rational() -> impl Strategy<Value = RationalFn> {
        (small_laurent(), small_laurent())
            .prop_filter_map("zero denominator", |(n, d)| RationalFn::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn rational_json_round_trip_is_bit_exact(r in small_rational()) {
            let s = serde_json::to_string(&r).unwrap();
            let back: RationalFn = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }

        #[test]
        fn ring_axioms(a in small_laurent(), b in small_laurent(), c in small_laurent()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn normalization_is_idempotent(r in small_rational()) {
            let again = RationalFn::new(r.numer().clone(), r.denom().clone()).unwrap();
            prop_assert_eq!(again, r);
        }

        #[test]
        fn scaling_num_and_den_gives_same_fraction(n in small_laurent(), d in small_laurent(), k in small_laurent()) {
            prop_assume!(!d.is_zero() && !k.is_zero());
            let a = RationalFn::new(n.clone(), d.clone()).unwrap();
            let b = RationalFn::new(&n * &k, &d * &k).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
