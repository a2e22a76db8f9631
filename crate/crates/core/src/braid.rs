//! The generators `f(i,j;m)` of `_i f`, their mirrors `f'(i,j;m)` generating
//! `^i f`, the quantum Serre relators, and the symmetries
//! `T_i : _i f -> ^i f` and `T_i^-1 : ^i f -> _i f`.
//!
//! `T_i` is determined by `f(i,j;m) -> f'(i,j;-a_ij-m)` and
//! multiplicativity. To apply it to `x`, every ordered product of generators
//! with the weight of `x` is listed, `x` is written as a combination of those
//! products modulo the radical (an exact solve against the pivot words of the
//! weight space), and each factor is then substituted. The products span but
//! are usually dependent, so [`kernel_image_check`] verifies that every
//! dependency is carried to a dependency; this is what makes the result
//! independent of the particular solution.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::exec;
use crate::falg::Algebra;
use crate::freealg::{Element, Word};
use crate::linalg;
use crate::scalars::{quantum_factorial, LaurentPoly, RationalFn};

fn check_pair(datum: &CartanDatum, i: usize, j: usize) -> Result<()> {
    datum.check_index(i)?;
    datum.check_index(j)?;
    if i == j {
        return Err(Error::InvalidInput(format!(
            "generator indices must differ, got i = j = {i}"
        )));
    }
    Ok(())
}

/// `sum_{r+s=m} (-1)^r v_i^{-r(-a_ij-m+1)} X_{r,s}` where `X_{r,s}` is
/// `theta_i^(r) theta_j theta_i^(s)` (unprimed) or
/// `theta_i^(s) theta_j theta_i^(r)` (primed).
fn alternating_sum(
    datum: &std::sync::Arc<CartanDatum>,
    i: usize,
    j: usize,
    m: i64,
    primed: bool,
) -> Result<Element> {
    check_pair(datum, i, j)?;
    if m < 0 {
        return Err(Error::NegativeArgument(m));
    }
    let eps = datum.eps(i);
    let n = -datum.a(i, j);
    let mut out = Element::zero(datum);
    for r in 0..=m {
        let s = m - r;
        let (left, right) = if primed { (s, r) } else { (r, s) };
        let letters = std::iter::repeat_n(i, left as usize)
            .chain([j])
            .chain(std::iter::repeat_n(i, right as usize));
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let num = LaurentPoly::monomial(sign, -eps * r * (n - m + 1));
        let den = &quantum_factorial(r, eps)? * &quantum_factorial(s, eps)?;
        out.add_term(Word::new(letters), RationalFn::new(num, den)?);
    }
    Ok(out)
}

/// `f(i,j;m)`, of weight `m alpha_i + alpha_j`.
pub fn f_gen(datum: &std::sync::Arc<CartanDatum>, i: usize, j: usize, m: i64) -> Result<Element> {
    alternating_sum(datum, i, j, m, false)
}

/// `f'(i,j;m)`: the same sum with the divided powers on either side of
/// `theta_j` exchanged.
pub fn f_gen_prime(
    datum: &std::sync::Arc<CartanDatum>,
    i: usize,
    j: usize,
    m: i64,
) -> Result<Element> {
    alternating_sum(datum, i, j, m, true)
}

/// The quantum Serre relator `f(i,j;1-a_ij)`.
pub fn serre_relator(datum: &std::sync::Arc<CartanDatum>, i: usize, j: usize) -> Result<Element> {
    check_pair(datum, i, j)?;
    f_gen(datum, i, j, 1 - datum.a(i, j))
}

/// An ordered product of generators `f(i,j_1;m_1) ... f(i,j_k;m_k)` (or of
/// the primed generators, depending on context).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GeneratorProduct {
    pub i: usize,
    /// `(j, m)` pairs, in multiplication order.
    pub factors: Vec<(usize, i64)>,
}

impl GeneratorProduct {
    pub fn weight(&self, rank: usize) -> Weight {
        let mut c = vec![0i64; rank];
        for &(j, m) in &self.factors {
            c[self.i] += m;
            c[j] += 1;
        }
        Weight::new(c)
    }

    /// The product with every factor `m` replaced by `-a_ij - m`.
    pub fn substituted(&self, datum: &CartanDatum) -> GeneratorProduct {
        GeneratorProduct {
            i: self.i,
            factors: self
                .factors
                .iter()
                .map(|&(j, m)| (j, -datum.a(self.i, j) - m))
                .collect(),
        }
    }

    /// Multiplies out the product of `f` (or `f'` when `primed`) factors.
    pub fn expand(&self, datum: &std::sync::Arc<CartanDatum>, primed: bool) -> Result<Element> {
        let mut cache: HashMap<(usize, i64), Element> = HashMap::new();
        let mut acc = Element::one(datum);
        for &(j, m) in &self.factors {
            let g = match cache.get(&(j, m)) {
                Some(g) => g.clone(),
                None => {
                    let g = alternating_sum(datum, self.i, j, m, primed)?;
                    cache.insert((j, m), g.clone());
                    g
                }
            };
            acc = acc.multiply(&g)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for GeneratorProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (j, m)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "f({},{};{})", self.i, j, m)?;
        }
        Ok(())
    }
}

/// Every ordered product of generators `f(i,j;m)`, `j != i`,
/// `0 <= m <= -a_ij`, of total weight `nu`, in lexicographic order of the
/// factor sequences.
pub fn generator_products(
    datum: &CartanDatum,
    i: usize,
    nu: &Weight,
) -> Result<Vec<GeneratorProduct>> {
    datum.check_index(i)?;
    if nu.len() != datum.rank() {
        return Err(Error::RankMismatch {
            expected: datum.rank(),
            found: nu.len(),
        });
    }
    if !nu.is_nonnegative() {
        return Err(Error::NegativeWeight(nu.coords().to_vec()));
    }
    let choices: Vec<(usize, i64)> = (0..datum.rank())
        .filter(|&j| j != i)
        .flat_map(|j| (0..=-datum.a(i, j)).map(move |m| (j, m)))
        .collect();
    let mut out = Vec::new();
    let mut left = nu.coords().to_vec();
    let mut cur = Vec::new();
    enumerate(i, &choices, &mut left, &mut cur, &mut out);
    Ok(out)
}

fn enumerate(
    i: usize,
    choices: &[(usize, i64)],
    left: &mut Vec<i64>,
    cur: &mut Vec<(usize, i64)>,
    out: &mut Vec<GeneratorProduct>,
) {
    if left.iter().all(|&c| c == 0) {
        out.push(GeneratorProduct {
            i,
            factors: cur.clone(),
        });
        return;
    }
    for &(j, m) in choices {
        if left[j] >= 1 && left[i] >= m {
            left[j] -= 1;
            left[i] -= m;
            cur.push((j, m));
            enumerate(i, choices, left, cur, out);
            cur.pop();
            left[i] += m;
            left[j] += 1;
        }
    }
}

/// The value of `T_i` or `T_i^-1` together with the data that produced it:
/// `x = sum coordinates[k] * products[k]` modulo the radical.
#[derive(Clone, Debug)]
pub struct TiResult {
    pub image: Element,
    pub coordinates: Vec<RationalFn>,
    pub products: Vec<GeneratorProduct>,
}

/// Serializable certificate of a [`TiResult`].
#[derive(Clone, Debug, Serialize)]
pub struct TiCertificate {
    pub coordinates: Vec<RationalFn>,
    pub products: Vec<Vec<(usize, i64)>>,
}

impl TiResult {
    pub fn certificate(&self) -> TiCertificate {
        TiCertificate {
            coordinates: self.coordinates.clone(),
            products: self.products.iter().map(|p| p.factors.clone()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    /// `T_i`: products of `f`, images in `f'`.
    Forward,
    /// `T_i^-1`: products of `f'`, images in `f`.
    Inverse,
}

impl Direction {
    fn source_primed(self) -> bool {
        self == Direction::Inverse
    }
}

fn guard_weights(alg: &Algebra, i: usize, nu: &Weight) -> Result<Weight> {
    alg.check_weight(nu)?;
    let image = alg.datum().reflect_weight(i, nu)?;
    if !image.is_nonnegative() {
        // only possible for nu a multiple of alpha_i, where the space is zero
        return Ok(image);
    }
    alg.check_weight(&image)?;
    Ok(image)
}

/// `M[p][k] = P(p, g_k)` over the pivot words `p` of `nu`, with `g_k` the
/// expanded products.
fn coordinate_matrix(
    alg: &Algebra,
    nu: &Weight,
    expanded: &[Element],
) -> Result<Vec<Vec<RationalFn>>> {
    let ws = alg.weight_space(nu)?;
    let columns: Vec<Vec<RationalFn>> = exec::map_collect(alg.parallel(), expanded, |g| {
        alg.pairings(g, ws.pivot_words())
    });
    Ok((0..ws.rank())
        .map(|p| columns.iter().map(|col| col[p].clone()).collect())
        .collect())
}

fn apply(alg: &Algebra, i: usize, x: &Element, dir: Direction) -> Result<TiResult> {
    alg.check_element(x)?;
    let datum = alg.datum();
    datum.check_index(i)?;
    let Some(nu) = x.homogeneous_weight()? else {
        return Ok(TiResult {
            image: Element::zero(datum),
            coordinates: Vec::new(),
            products: Vec::new(),
        });
    };
    guard_weights(alg, i, &nu)?;
    let member = match dir {
        Direction::Forward => alg.membership_left(i, x)?,
        Direction::Inverse => alg.membership_right(i, x)?,
    };
    if !member {
        let space = match dir {
            Direction::Forward => "_i f",
            Direction::Inverse => "^i f",
        };
        return Err(Error::NotInSubalgebra(format!(
            "element is not in {space} for i = {i}"
        )));
    }
    let products = generator_products(datum, i, &nu)?;
    let expanded = products
        .iter()
        .map(|p| p.expand(datum, dir.source_primed()))
        .collect::<Result<Vec<_>>>()?;
    let matrix = coordinate_matrix(alg, &nu, &expanded)?;
    let ws = alg.weight_space(&nu)?;
    let rhs = alg.pairings(x, ws.pivot_words());
    let coordinates =
        linalg::solve(&matrix, &rhs, alg.parallel()).ok_or(Error::InconsistentSystem)?;
    let mut image = Element::zero(datum);
    for (p, c) in products.iter().zip(&coordinates) {
        if c.is_zero() {
            continue;
        }
        let target = p.substituted(datum).expand(datum, !dir.source_primed())?;
        image = image.checked_add(&target.scale(c))?;
    }
    Ok(TiResult {
        image,
        coordinates,
        products,
    })
}

/// `T_i(x)` for homogeneous `x` in `_i f`.
pub fn ti_apply(alg: &Algebra, i: usize, x: &Element) -> Result<TiResult> {
    apply(alg, i, x, Direction::Forward)
}

/// `T_i^-1(x)` for homogeneous `x` in `^i f`.
pub fn ti_inverse_apply(alg: &Algebra, i: usize, x: &Element) -> Result<TiResult> {
    apply(alg, i, x, Direction::Inverse)
}

/// Outcome of [`kernel_image_check`] at one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub i: usize,
    pub weight: Vec<i64>,
    pub products: usize,
    pub kernel_dim: usize,
    /// Whether every dependency among the products maps to zero in `f`.
    pub vanishing: bool,
}

/// Checks that `T_i` is well defined on `_i f_nu` (or `T_i^-1` on `^i f_nu`
/// when `inverse`): every combination of generator products that vanishes in
/// `f` must still vanish after substitution.
pub fn kernel_image_check(
    alg: &Algebra,
    i: usize,
    nu: &Weight,
    inverse: bool,
) -> Result<KernelReport> {
    let datum = alg.datum();
    datum.check_index(i)?;
    let dir = if inverse {
        Direction::Inverse
    } else {
        Direction::Forward
    };
    let image_weight = guard_weights(alg, i, nu)?;
    let products = generator_products(datum, i, nu)?;
    let mut report = KernelReport {
        i,
        weight: nu.coords().to_vec(),
        products: products.len(),
        kernel_dim: 0,
        vanishing: true,
    };
    if products.is_empty() {
        return Ok(report);
    }
    let expanded = products
        .iter()
        .map(|p| p.expand(datum, dir.source_primed()))
        .collect::<Result<Vec<_>>>()?;
    let matrix = coordinate_matrix(alg, nu, &expanded)?;
    let kernel = if matrix.is_empty() {
        (0..products.len())
            .map(|k| {
                let mut e = vec![RationalFn::zero(); products.len()];
                e[k] = RationalFn::one();
                e
            })
            .collect()
    } else {
        linalg::kernel(&matrix, alg.parallel())
    };
    report.kernel_dim = kernel.len();
    if kernel.is_empty() {
        return Ok(report);
    }
    debug_assert!(image_weight.is_nonnegative());
    let targets = products
        .iter()
        .map(|p| p.substituted(datum).expand(datum, !dir.source_primed()))
        .collect::<Result<Vec<_>>>()?;
    for vec in &kernel {
        let mut image = Element::zero(datum);
        for (t, c) in targets.iter().zip(vec) {
            if !c.is_zero() {
                image = image.checked_add(&t.scale(c))?;
            }
        }
        if !alg.is_zero_in_f(&image)? {
            report.vanishing = false;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn a2() -> Algebra {
        Algebra::new(CartanDatum::named("A2").unwrap())
    }

    fn mono(d: &Arc<CartanDatum>, letters: &[usize], c: RationalFn) -> Element {
        Element::monomial(d, Word::new(letters.iter().copied()), c)
    }

    #[test]
    fn generator_examples() {
        let a = a2();
        let d = a.datum();
        assert_eq!(f_gen(d, 0, 1, 0).unwrap(), a.gen(1).unwrap());
        let f1 = &mono(d, &[1, 0], RationalFn::one()) - &mono(d, &[0, 1], RationalFn::v_pow(-1));
        assert_eq!(f_gen(d, 0, 1, 1).unwrap(), f1);
        let fp1 = &mono(d, &[0, 1], RationalFn::one()) - &mono(d, &[1, 0], RationalFn::v_pow(-1));
        assert_eq!(f_gen_prime(d, 0, 1, 1).unwrap(), fp1);
        assert!(f_gen(d, 0, 0, 1).is_err());
        assert!(matches!(
            f_gen(d, 0, 1, -1),
            Err(Error::NegativeArgument(-1))
        ));
    }

    #[test]
    fn serre_relator_examples() {
        let a = a2();
        let d = a.datum();
        let t1 = a.gen(0).unwrap();
        let t2 = a.gen(1).unwrap();
        let t11 = a.divided_power(0, 2).unwrap();
        let expected = &(&(&t11 * &t2) - &(&(&t1 * &t2) * &t1)) + &(&t2 * &t11);
        assert_eq!(serre_relator(d, 0, 1).unwrap(), expected);
        let a1a1 = Arc::new(CartanDatum::new(vec![vec![2, 0], vec![0, 2]], vec![1, 1]).unwrap());
        let comm =
            &mono(&a1a1, &[1, 0], RationalFn::one()) - &mono(&a1a1, &[0, 1], RationalFn::one());
        assert_eq!(serre_relator(&a1a1, 0, 1).unwrap(), comm);
        let b2 = Arc::new(CartanDatum::named("B2").unwrap());
        // a_10 = -2: four terms, every v-exponent zero
        let rel = serre_relator(&b2, 1, 0).unwrap();
        assert_eq!(rel.len(), 4);
        for r in 0..=3i64 {
            let word = Word::new(
                std::iter::repeat_n(1, r as usize)
                    .chain([0])
                    .chain(std::iter::repeat_n(1, 3 - r as usize)),
            );
            let den = &quantum_factorial(r, 1).unwrap() * &quantum_factorial(3 - r, 1).unwrap();
            let sign = if r % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                rel.coeff(&word),
                RationalFn::new(LaurentPoly::constant(sign), den).unwrap()
            );
        }
        assert!(serre_relator(d, 1, 1).is_err());
    }

    #[test]
    fn products_cover_the_weight() {
        let a = a2();
        let ps = generator_products(a.datum(), 0, &Weight::new(vec![1, 2])).unwrap();
        assert_eq!(
            ps.iter().map(|p| p.factors.clone()).collect::<Vec<_>>(),
            vec![vec![(1, 0), (1, 1)], vec![(1, 1), (1, 0)]]
        );
        assert!(generator_products(a.datum(), 0, &Weight::new(vec![2, 0]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ti_examples() {
        let a = a2();
        let d = a.datum().clone();
        let t2 = a.gen(1).unwrap();
        let fp1 = f_gen_prime(&d, 0, 1, 1).unwrap();
        let r = ti_apply(&a, 0, &t2).unwrap();
        assert_eq!(r.image, fp1);
        let f1 = f_gen(&d, 0, 1, 1).unwrap();
        assert!(a
            .equal_in_f(&ti_apply(&a, 0, &f1).unwrap().image, &t2)
            .unwrap());
        let x = &f1 * &t2;
        let expected = &t2 * &fp1;
        assert!(a
            .equal_in_f(&ti_apply(&a, 0, &x).unwrap().image, &expected)
            .unwrap());
        assert!(a
            .equal_in_f(&ti_inverse_apply(&a, 0, &t2).unwrap().image, &f1)
            .unwrap());
        assert!(a
            .equal_in_f(&ti_inverse_apply(&a, 0, &fp1).unwrap().image, &t2)
            .unwrap());
        let back = ti_inverse_apply(&a, 0, &ti_apply(&a, 0, &f1).unwrap().image).unwrap();
        assert!(a.equal_in_f(&back.image, &f1).unwrap());
        assert!(matches!(
            ti_apply(&a, 0, &a.gen(0).unwrap()),
            Err(Error::NotInSubalgebra(_))
        ));
        assert!(matches!(
            ti_inverse_apply(&a, 0, &f1),
            Err(Error::NotInSubalgebra(_))
        ));
    }

    #[test]
    fn well_defined_on_a2() {
        let a = a2();
        let r = kernel_image_check(&a, 0, &Weight::new(vec![1, 2]), false).unwrap();
        assert_eq!((r.products, r.kernel_dim, r.vanishing), (2, 1, true));
    }
}
