//! Dense univariate polynomials over `Z`, stored low degree first.
//!
//! These are the workhorse for both `LaurentPoly` (which adds an exponent
//! offset) and the fraction-free elimination in `linalg`. Every function
//! returns trimmed vectors: no trailing zero coefficients, and the zero
//! polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type Coeffs = Vec<BigInt>;

pub(crate) fn trim(p: &mut Coeffs) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Coeffs {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Coeffs {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o -= s;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt) -> Coeffs {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Positive gcd of the coefficients; zero for the zero polynomial.
pub(crate) fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub(crate) fn div_scalar_exact(a: &[BigInt], c: &BigInt) -> Coeffs {
    a.iter()
        .map(|x| {
            debug_assert!((x % c).is_zero());
            x / c
        })
        .collect()
}

pub(crate) fn primitive_part(a: &[BigInt]) -> Coeffs {
    let c = content(a);
    if c.is_zero() || c.is_one() {
        a.to_vec()
    } else {
        div_scalar_exact(a, &c)
    }
}

/// Exact quotient `a / b` in `Z[v]`, or `None` when `b` does not divide `a`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Coeffs> {
    let db = degree(b).expect("division by the zero polynomial");
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() == 1 {
        let c = &b[0];
        let mut out = Vec::with_capacity(a.len());
        for x in a {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        return Some(out);
    }
    let da = degree(a).unwrap();
    if da < db {
        return None;
    }
    let lead = &b[db];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let top = &rem[k + db];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                rem[k + j] -= &q * bj;
            }
        }
        quot[k] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut quot);
    Some(quot)
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Coeffs {
    let db = degree(b).expect("pseudo-remainder by zero");
    let mut rem = a.to_vec();
    let lead = b[db].clone();
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let top = rem[dr].clone();
        for c in rem.iter_mut() {
            *c *= &lead;
        }
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &top * bj;
        }
        trim(&mut rem);
    }
    rem
}

/// Greatest common divisor in `Z[v]`, normalized to a positive leading
/// coefficient. Primitive remainder sequence; content handled separately.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Coeffs {
    if a.is_empty() {
        return normalize_sign(b.to_vec());
    }
    if b.is_empty() {
        return normalize_sign(a.to_vec());
    }
    let cont = content(a).gcd(&content(b));
    let mut x = primitive_part(a);
    let mut y = primitive_part(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![cont];
        }
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive_part(&r);
    }
    let g = scale(&x, &cont);
    normalize_sign(g)
}

fn normalize_sign(mut p: Coeffs) -> Coeffs {
    if p.last().is_some_and(Signed::is_negative) {
        for c in p.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    p
}

pub(crate) fn is_one(p: &[BigInt]) -> bool {
    p.len() == 1 && p[0].is_one()
}
