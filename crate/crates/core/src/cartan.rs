//! Symmetrizable generalized Cartan matrices and the root lattice.

use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A symmetrizable GCM `A` together with symmetrizers `eps`, so that
/// `eps_i a_ij = eps_j a_ji`. The symmetric form on the root lattice is
/// `(alpha_i, alpha_j) = eps_i a_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CartanJson", into = "CartanJson")]
pub struct CartanDatum {
    a: Vec<Vec<i64>>,
    eps: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct CartanJson {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    eps: Vec<i64>,
}

impl TryFrom<CartanJson> for CartanDatum {
    type Error = Error;
    fn try_from(j: CartanJson) -> Result<Self> {
        CartanDatum::new(j.a, j.eps)
    }
}

impl From<CartanDatum> for CartanJson {
    fn from(c: CartanDatum) -> Self {
        CartanJson { a: c.a, eps: c.eps }
    }
}

impl CartanDatum {
    /// Validates `a` as a GCM symmetrized by `eps`.
    pub fn new(a: Vec<Vec<i64>>, eps: Vec<i64>) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        if eps.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: eps.len(),
            });
        }
        if let Some(k) = eps.iter().position(|&e| e <= 0) {
            return Err(Error::NotGcm(format!(
                "symmetrizer eps_{k} must be positive"
            )));
        }
        if n > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("rank {n} is too large")));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::NotGcm(format!("a_{i}{i} = {} != 2", a[i][i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return Err(Error::NotGcm(format!("a_{i}{j} = {} > 0", a[i][j])));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::NotGcm(format!(
                        "a_{i}{j} and a_{j}{i} disagree on vanishing"
                    )));
                }
                if eps[i] * a[i][j] != eps[j] * a[j][i] {
                    return Err(Error::NotSymmetrizable { i, j });
                }
            }
        }
        Ok(Self { a, eps })
    }

    /// Uses [`minimal_symmetrizers`] for `eps`.
    pub fn with_minimal_symmetrizers(a: Vec<Vec<i64>>) -> Result<Self> {
        let eps = minimal_symmetrizers(&a)?;
        Self::new(a, eps)
    }

    /// Named finite types: `A1`..`An`, `B2`, `C2`, `G2`, `B3`, `C3`.
    ///
    /// Rank-2 conventions put the long root first: `B2` has
    /// `a_12 = -1, a_21 = -2, eps = (2, 1)` and `G2` has
    /// `a_12 = -1, a_21 = -3, eps = (3, 1)`.
    pub fn named(name: &str) -> Result<Self> {
        let unknown = || Error::InvalidInput(format!("unknown Cartan type {name}"));
        let (kind, rank) = name.split_at(1);
        let rank: usize = rank.parse().map_err(|_| unknown())?;
        match (kind, rank) {
            ("A", n) if n >= 1 => {
                let a = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match i.abs_diff(j) {
                                0 => 2,
                                1 => -1,
                                _ => 0,
                            })
                            .collect()
                    })
                    .collect();
                Self::new(a, vec![1; n])
            }
            ("B", 2) | ("C", 2) => Self::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1]),
            ("G", 2) => Self::new(vec![vec![2, -1], vec![-3, 2]], vec![3, 1]),
            ("B", 3) => Self::new(
                vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -2, 2]],
                vec![2, 2, 1],
            ),
            ("C", 3) => Self::new(
                vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]],
                vec![1, 1, 2],
            ),
            _ => Err(unknown()),
        }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.eps
    }

    pub fn eps(&self, i: usize) -> i64 {
        self.eps[i]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            })
        }
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: w.len(),
            })
        }
    }

    /// `(alpha_i, alpha_j) = eps_i a_ij`.
    pub fn root_pairing(&self, i: usize, j: usize) -> i64 {
        self.eps[i] * self.a[i][j]
    }

    /// `(nu, alpha_i)` for coordinates `nu`; no rank check.
    pub(crate) fn pair_with_simple(&self, nu: &[i64], i: usize) -> i64 {
        nu.iter()
            .enumerate()
            .map(|(j, &c)| c * self.root_pairing(j, i))
            .sum()
    }

    /// The symmetric bilinear form `sum_ij nu_i mu_j eps_i a_ij`.
    pub fn sym_form(&self, nu: &Weight, mu: &Weight) -> Result<i64> {
        self.check_weight(nu)?;
        self.check_weight(mu)?;
        let mut total = 0;
        for (i, &x) in nu.coords().iter().enumerate() {
            if x != 0 {
                total += x * self.pair_with_simple(mu.coords(), i);
            }
        }
        Ok(total)
    }

    /// The simple reflection `s_i`.
    pub fn reflect_weight(&self, i: usize, nu: &Weight) -> Result<Weight> {
        self.check_index(i)?;
        self.check_weight(nu)?;
        let mut out = nu.clone();
        let pairing: i64 = (0..self.rank()).map(|j| self.a[i][j] * nu.0[j]).sum();
        out.0[i] -= pairing;
        Ok(out)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::simple(self.rank(), i)
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.rank())
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A={:?} eps={:?}", self.a, self.eps)
    }
}

/// Smallest positive symmetrizers with `gcd = 1` on each connected component.
pub fn minimal_symmetrizers(a: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    // Rational symmetrizers as (numerator, denominator), propagated along edges.
    let mut eps: Vec<Option<(i64, i64)>> = vec![None; n];
    for root in 0..n {
        if eps[root].is_some() {
            continue;
        }
        eps[root] = Some((1, 1));
        let mut component = vec![root];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let (p, q) = eps[i].unwrap();
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                if a[j][i] == 0 {
                    return Err(Error::NotGcm(format!(
                        "a_{i}{j} and a_{j}{i} disagree on vanishing"
                    )));
                }
                // eps_j = eps_i a_ij / a_ji
                let (np, nq) = reduce(p * a[i][j], q * a[j][i]);
                match eps[j] {
                    None => {
                        eps[j] = Some((np, nq));
                        component.push(j);
                        stack.push(j);
                    }
                    Some(e) if e == (np, nq) => {}
                    Some(_) => return Err(Error::NotSymmetrizable { i, j }),
                }
            }
        }
        let lcm = component
            .iter()
            .fold(1i64, |acc, &k| acc.lcm(&eps[k].unwrap().1));
        let ints: Vec<i64> = component
            .iter()
            .map(|&k| {
                let (p, q) = eps[k].unwrap();
                p * (lcm / q)
            })
            .collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for (&k, x) in component.iter().zip(ints) {
            eps[k] = Some((x / g, 1));
        }
    }
    Ok(eps.into_iter().map(|e| e.unwrap().0).collect())
}

fn reduce(p: i64, q: i64) -> (i64, i64) {
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    if q < 0 {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// A vector in the root lattice `Z^I`, in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i] = 1;
        w
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// `self - alpha_i`, if it stays nonnegative in coordinate `i`.
    pub fn minus_simple(&self, i: usize) -> Option<Weight> {
        (self.0[i] > 0).then(|| {
            let mut w = self.clone();
            w.0[i] -= 1;
            w
        })
    }

    pub fn plus_simple(&self, i: usize) -> Weight {
        let mut w = self.clone();
        w.0[i] += 1;
        w
    }

    /// All nonnegative weights of the given rank and exact height, in
    /// lexicographic order.
    pub fn all_of_height(rank: usize, height: i64) -> Vec<Weight> {
        fn rec(rank: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
            if cur.len() + 1 == rank {
                cur.push(left);
                out.push(Weight(cur.clone()));
                cur.pop();
                return;
            }
            for c in 0..=left {
                cur.push(c);
                rec(rank, left - c, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if rank == 0 {
            if height == 0 {
                out.push(Weight(Vec::new()));
            }
            return out;
        }
        rec(rank, height, &mut Vec::new(), &mut out);
        out
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(CartanDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).is_ok());
        assert!(CartanDatum::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1]).is_ok());
        assert!(matches!(
            CartanDatum::new(vec![vec![2, -1], vec![-3, 2]], vec![1, 1]),
            Err(Error::NotSymmetrizable { .. })
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, 1], vec![1, 2]], vec![1, 1]),
            Err(Error::NotGcm(_))
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![3, -1], vec![-1, 2]], vec![1, 1]),
            Err(Error::NotGcm(_))
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, -1]], vec![1]),
            Err(Error::NotSquare)
        ));
    }

    #[test]
    fn sym_form_examples() {
        let a2 = CartanDatum::named("A2").unwrap();
        let (a1, a2r) = (a2.simple_root(0), a2.simple_root(1));
        assert_eq!(a2.sym_form(&a1, &a2r).unwrap(), -1);
        let b2 = CartanDatum::named("B2").unwrap();
        assert_eq!(
            b2.sym_form(&b2.simple_root(0), &b2.simple_root(1)).unwrap(),
            -2
        );
        for c in ["A2", "B2", "G2", "B3", "C3"] {
            let c = CartanDatum::named(c).unwrap();
            for i in 0..c.rank() {
                let a = c.simple_root(i);
                assert_eq!(c.sym_form(&a, &a).unwrap(), 2 * c.eps(i));
            }
        }
        assert!(matches!(
            a2.sym_form(&Weight::new(vec![1]), &a1),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn reflection_examples() {
        let a2 = CartanDatum::named("A2").unwrap();
        assert_eq!(
            a2.reflect_weight(0, &Weight::new(vec![1, 1])).unwrap(),
            Weight::new(vec![0, 1])
        );
        assert_eq!(
            a2.reflect_weight(1, &a2.simple_root(1)).unwrap(),
            Weight::new(vec![0, -1])
        );
        for n in 0..=4i64 {
            let c = CartanDatum::with_minimal_symmetrizers(vec![vec![2, -n], vec![-1, 2]]);
            let Ok(c) = c else { continue };
            for m in 0..=n {
                let nu = Weight::new(vec![m, 1]);
                assert_eq!(
                    c.reflect_weight(0, &nu).unwrap(),
                    Weight::new(vec![n - m, 1])
                );
            }
        }
        assert!(matches!(
            a2.reflect_weight(2, &a2.simple_root(0)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn minimal_symmetrizers_examples() {
        assert_eq!(
            minimal_symmetrizers(&[vec![2, -1], vec![-3, 2]]).unwrap(),
            vec![3, 1]
        );
        assert_eq!(
            minimal_symmetrizers(&[vec![2, -2], vec![-4, 2]]).unwrap(),
            vec![2, 1]
        );
        assert_eq!(
            minimal_symmetrizers(&[vec![2, 0], vec![0, 2]]).unwrap(),
            vec![1, 1]
        );
        let b3 = CartanDatum::named("B3").unwrap();
        assert_eq!(minimal_symmetrizers(b3.matrix()).unwrap(), vec![2, 2, 1]);
        // A 3-cycle whose products of ratios are not 1.
        let bad = [vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]];
        assert!(minimal_symmetrizers(&bad).is_err());
    }

    #[test]
    fn json_schema() {
        let b2 = CartanDatum::named("B2").unwrap();
        let s = serde_json::to_string(&b2).unwrap();
        assert_eq!(s, r#"{"A":[[2,-1],[-2,2]],"eps":[2,1]}"#);
        let back: CartanDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b2);
        assert!(serde_json::from_str::<CartanDatum>(r#"{"A":[[2,1],[1,2]],"eps":[1,1]}"#).is_err());
    }

    #[test]
    fn heights_enumerate_compositions() {
        assert_eq!(Weight::all_of_height(2, 2).len(), 3);
        assert_eq!(Weight::all_of_height(3, 2).len(), 6);
        assert_eq!(Weight::all_of_height(3, 0), vec![Weight::zero(3)]);
    }
}
