//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra or pairing code.
#![allow(dead_code)]

use std::sync::Arc;

use braidfold_core::{CartanDatum, Element, LaurentPoly, RationalFn, Weight, Word};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub fn datum(name: &str) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::named(name).unwrap())
}

/// Positive roots in simple-root coordinates, written out by hand for the
/// conventions of `CartanDatum::named` (in B2 and G2 the first simple root
/// is the long one).
pub fn positive_roots(name: &str) -> Vec<Vec<i64>> {
    match name {
        "A2" => vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        "B2" => vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]],
        "G2" => vec![
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
        ],
        "A3" => vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![1, 1, 1],
        ],
        other => panic!("no root list for {other}"),
    }
}

/// Number of ways to write `nu` as an unordered sum of positive roots.
pub fn kostant_count(roots: &[Vec<i64>], nu: &[i64]) -> u64 {
    fn go(roots: &[Vec<i64>], k: usize, rest: &mut Vec<i64>) -> u64 {
        if rest.iter().all(|&c| c == 0) {
            return 1;
        }
        if k == roots.len() {
            return 0;
        }
        let mut total = go(roots, k + 1, rest);
        let mut used = 0;
        loop {
            if rest.iter().zip(&roots[k]).any(|(a, b)| a < b) {
                break;
            }
            for (a, b) in rest.iter_mut().zip(&roots[k]) {
                *a -= b;
            }
            used += 1;
            total += go(roots, k + 1, rest);
        }
        for (a, b) in rest.iter_mut().zip(&roots[k]) {
            *a += b * used;
        }
        total
    }
    go(roots, 0, &mut nu.to_vec())
}

/// `[n]_{v^e}` as a Laurent polynomial.
pub fn qint(n: i64, e: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for k in 0..n {
        out += &LaurentPoly::v_pow(e * (n - 1 - 2 * k));
    }
    out
}

pub fn qfact(n: i64, e: i64) -> LaurentPoly {
    (1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &qint(k, e))
}

/// The right-peeling derivation `r_i`: deletes an `i` and weights by the
/// pairing of the suffix with `alpha_i`.
pub fn right_derivation(x: &Element, i: usize) -> Element {
    let d = x.datum().clone();
    let mut terms = Vec::new();
    for (w, c) in x.terms() {
        let letters: Vec<usize> = w.letters().collect();
        for pos in 0..letters.len() {
            if letters[pos] != i {
                continue;
            }
            let exp: i64 = letters[pos + 1..]
                .iter()
                .map(|&l| d.eps(l) * d.a(l, i))
                .sum();
            let rest: Vec<usize> = letters[..pos]
                .iter()
                .chain(&letters[pos + 1..])
                .copied()
                .collect();
            terms.push((Word::new(rest), c.shift(exp)));
        }
    }
    let mut out = Element::zero(&d);
    for (w, c) in terms {
        out = &out + &Element::monomial(&d, w, c);
    }
    out
}

pub fn word_element(d: &Arc<CartanDatum>, letters: &[usize]) -> Element {
    Element::monomial(d, Word::new(letters.iter().copied()), RationalFn::one())
}

pub fn weight_of(rank: usize, letters: &[usize]) -> Weight {
    let mut c = vec![0; rank];
    for &l in letters {
        c[l] += 1;
    }
    Weight::new(c)
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1`, used to evaluate
/// rational functions at a point and take ranks there. A rank computed at
/// one point is a lower bound for the rank over `Q(v)`.
pub const P: u128 = (1u128 << 61) - 1;

fn pow_mod(mut b: u128, mut e: u128) -> u128 {
    let mut r = 1u128;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u128) -> u128 {
    assert!(!a.is_multiple_of(P), "inverting zero");
    pow_mod(a, P - 2)
}

fn big_mod(c: &BigInt) -> u128 {
    let p = BigInt::from(P);
    let r = ((c % &p) + &p) % &p;
    r.to_u128().unwrap()
}

pub fn eval_laurent(f: &LaurentPoly, t: u128) -> u128 {
    let tinv = inv_mod(t);
    let mut acc = 0u128;
    for (e, c) in f.terms() {
        let base = if e >= 0 {
            pow_mod(t, e as u128)
        } else {
            pow_mod(tinv, (-e) as u128)
        };
        acc = (acc + big_mod(c) * base) % P;
    }
    acc
}

pub fn eval_rational(f: &RationalFn, t: u128) -> u128 {
    if f.is_zero() {
        return 0;
    }
    eval_laurent(f.numer(), t) * inv_mod(eval_laurent(f.denom(), t)) % P
}

/// Rank of a matrix over `F_P` by Gaussian elimination.
pub fn rank_mod(mut rows: Vec<Vec<u128>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c]);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c] * inv % P;
                for k in c..cols {
                    row[k] = (row[k] + P - f * pivot_row[k] % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficient vector of `x` over `words`, evaluated at `t`.
pub fn coeff_vector(x: &Element, words: &[Word], t: u128) -> Vec<u128> {
    words
        .iter()
        .map(|w| eval_rational(&x.coeff(w), t))
        .collect()
}

pub fn is_zero_vec(v: &[u128]) -> bool {
    v.iter().all(Zero::is_zero)
}
